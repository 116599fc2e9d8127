#include "rally/asymptotics.hpp"

#include <cstdint>

#include "rally/duration.hpp"

namespace rally {

namespace {

void check_n(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
}

// binom(n+k-1, k) for k = 0..n-1, exact in 64 bits while the recurrence's
// intermediate product fits (n <= 31), otherwise from the double recurrence.
std::vector<double> rally_point_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n <= 31) {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> exact(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      std::uint64_t c = 1;  // binom(n-1+k, k) = binom(n-1+k-1, k-1) * (n-1+k) / k
      if (k > 0) c = exact[static_cast<std::size_t>(k - 1)] * static_cast<std::uint64_t>(n - 1 + k) / k;
      exact[static_cast<std::size_t>(k)] = c;
      total += c;
    }
    for (int k = 0; k < n; ++k) {
      w[static_cast<std::size_t>(k)] =
          static_cast<double>(exact[static_cast<std::size_t>(k)]) / static_cast<double>(total);
    }
    return w;
  }
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += (w[static_cast<std::size_t>(k)] = binom(n + k - 1, k));
  for (double& x : w) x /= total;
  return w;
}

bool unlikely_winner(Player winner, LimitDirection direction) {
  return (winner == Player::A) == (direction == LimitDirection::PToZero);
}

}  // namespace

Moments limit_moments(ScoringSystem system, Player winner, LimitDirection direction, int n) {
  check_n(n);
  const double nd = n;
  if (!unlikely_winner(winner, direction)) {
    // All rallies go to the winner; B needs one extra rally to gain the serve.
    const bool extra = system == ScoringSystem::SideOut && winner == Player::B;
    return {extra ? nd + 1.0 : nd, 0.0};
  }
  if (system == ScoringSystem::SideOut) {
    if (winner == Player::A) return {nd, 0.0};
    return {(3.0 * nd + 1.0) / 2.0, (nd * nd - 1.0) / 12.0};
  }
  return {2.0 * nd * nd / (nd + 1.0),
          2.0 * nd * nd * (nd - 1.0) / ((nd + 1.0) * (nd + 1.0) * (nd + 2.0))};
}

double uniform_limit_quoted_variance(int n) {
  check_n(n);
  return (n - 1.0) * (n - 1.0) / 12.0;
}

DurationPMF limit_pmf(ScoringSystem system, Player winner, LimitDirection direction, int n) {
  const Moments m = limit_moments(system, winner, direction, n);
  if (m.variance == 0.0) return DurationPMF::point_mass(static_cast<int>(m.mean));
  if (system == ScoringSystem::SideOut) {
    return DurationPMF(n + 1, std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
  }
  return DurationPMF(n, rally_point_weights(n));
}

DurationPMF no_server_conditional_pmf(ScoringSystem system, Player winner, int n, double p,
                                      double epsilon) {
  GameConfig config;
  config.n = n;
  config.system = system;
  config.sa = 1.0;
  return duration_pmf({p, 1.0 - p}, config, Player::A, winner, epsilon);
}

ConvergenceReport convergence_check(ScoringSystem system, Player winner, LimitDirection direction,
                                    int n, std::span<const double> p_sequence) {
  const DurationPMF target = limit_pmf(system, winner, direction, n);
  ConvergenceReport report;
  for (double p : p_sequence) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("convergence sequence must lie in (0,1)");
    const double tv = total_variation(no_server_conditional_pmf(system, winner, n, p), target);
    if (!report.distances.empty() && tv > report.distances.back()) report.monotone = false;
    report.distances.push_back(tv);
    report.max_deviation = std::max(report.max_deviation, tv);
  }
  return report;
}

}  // namespace rally
