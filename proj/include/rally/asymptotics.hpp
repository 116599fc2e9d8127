#pragma once

// Limiting laws of the number of rallies in the no-server model
// (p = p_a = 1 - p_b) as p -> 0 or p -> 1, conditional on the winner of an
// A-game.
//
// Conditioning on the likely winner gives degenerate limits. Conditioning on
// the unlikely winner gives:
//   side-out, A wins, p -> 0:    point mass at n
//   side-out, B wins, p -> 1:    uniform on {n+1, ..., 2n}
//   rally-point, unlikely winner: mass at n + k proportional to binom(n+k-1, k)
//
// The variance of the uniform limit is (n^2 - 1)/12. The closed form
// (n - 1)^2/12 that is sometimes quoted for it understates it by (n - 1)/6;
// uniform_limit_quoted_variance() keeps that value for comparison.

#include <span>
#include <vector>

#include "rally/core.hpp"
#include "rally/pmf.hpp"

namespace rally {

enum class LimitDirection { PToZero, PToOne };

Moments limit_moments(ScoringSystem system, Player winner, LimitDirection direction, int n);

DurationPMF limit_pmf(ScoringSystem system, Player winner, LimitDirection direction, int n);

double uniform_limit_quoted_variance(int n);

/// Exact law of D given the winner of an A-game at p_a = p, p_b = 1 - p.
DurationPMF no_server_conditional_pmf(ScoringSystem system, Player winner, int n, double p,
                                      double epsilon = 1e-13);

struct ConvergenceReport {
  std::vector<double> distances;  // total variation to the limit, per p
  double max_deviation = 0.0;
  bool monotone = true;  // distances non-increasing along the sequence
};

ConvergenceReport convergence_check(ScoringSystem system, Player winner, LimitDirection direction,
                                    int n, std::span<const double> p_sequence);

}  // namespace rally
