#pragma once

#include <cmath>
#include <vector>

#include "rally/core.hpp"

namespace testutil {

inline const std::vector<double> kGrid5{0.1, 0.3, 0.5, 0.7, 0.9};

inline rally::GameConfig sideout(int n, int server_a = 1) {
  rally::GameConfig c;
  c.n = n;
  c.sa = server_a;
  return c;
}

inline rally::GameConfig rallypoint(int n) {
  rally::GameConfig c;
  c.n = n;
  c.system = rally::ScoringSystem::RallyPoint;
  return c;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace testutil
