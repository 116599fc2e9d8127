#pragma once

// Number of rallies D in a side-out game.
//
// Conditional on the tally alpha:beta and the last scorer in an A-game, D
// decomposes as alpha + beta + 2(R' + L) + [B scores last], where R' counts
// A-interruptions (shifted by one when B scores last) and L is the number of
// exchanges, negative binomial with alpha + beta successes and failure
// probability q. Every conditional law therefore depends on (p_a, p_b) only
// through q = (1 - p_a)(1 - p_b).

#include <array>
#include <optional>
#include <vector>

#include "rally/core.hpp"
#include "rally/pmf.hpp"

namespace rally {

/// Law of the interruption count R over r_min, r_min + 1, ...
struct InterruptionWeights {
  int r_min = 0;
  std::vector<double> weights;

  int r_max() const { return r_min + static_cast<int>(weights.size()) - 1; }
  double weight(int r) const;
  double mean() const;
  double variance() const;
};

/// Normalized interruption weights. At q = 0 this is the q -> 0 limit, a
/// point mass on the smallest admissible r.
InterruptionWeights interruption_weights(int alpha, int beta, Player last_scorer, double q);

double mgf_conditional(int alpha, int beta, Player last_scorer, double q, double t);

double expected_duration_conditional(int alpha, int beta, Player last_scorer, double q);
double variance_duration_conditional(int alpha, int beta, Player last_scorer, double q);
Moments conditional_moments(int alpha, int beta, Player last_scorer, double q);

/// Inner sum H(j) of the probability generating function coefficients,
/// evaluated directly from binomials. Test and likelihood use; the PMF
/// builder folds powers of q into the recursion instead.
double h_coefficient(int alpha, int beta, Player last_scorer, int j);

/// P[D = d | tally, A serves first] from q alone. The series is cut once a
/// certified bound on the remaining mass drops below epsilon.
DurationPMF duration_pmf_conditional(int alpha, int beta, Player last_scorer, double q,
                                     double epsilon);

/// As above, but refuses events whose probability underflows (ConditioningError).
DurationPMF duration_pmf_conditional(int alpha, int beta, Player last_scorer,
                                     const RallyProbs& probs, double epsilon);

/// Side-out aggregates. Winner-conditional fields are empty when that winner
/// has probability zero.
struct ServerAggregate {
  std::array<double, 2> win_prob{};                    // p_C^A, p_C^B
  std::array<std::optional<Moments>, 2> given_winner;  // (e_C^W, v_C^W)
  Moments overall;                                     // (e_C, v_C)
};

struct AggregateMoments {
  std::array<ServerAggregate, 2> by_server;           // first server A, B
  std::array<std::optional<Moments>, 2> given_winner;  // (e^W, v^W), mixed over s_a
  Moments overall;                                     // (e, v)
  double sa = 1.0;
};

AggregateMoments aggregate_moments(const RallyProbs& probs, const GameConfig& config);

/// Duration PMF, optionally conditioned on the first server and/or winner.
/// Without a server the s_a mixture is used.
DurationPMF duration_pmf(const RallyProbs& probs, const GameConfig& config,
                         std::optional<Player> server, std::optional<Player> winner,
                         double epsilon);

DurationPMF duration_pmf_unconditional(const RallyProbs& probs, const GameConfig& config,
                                       double epsilon);

enum class QuantileMode { Standard, Interpolated };

/// Standard: smallest support point whose CDF reaches `level`.
///
/// Interpolated: each mass is spread uniformly over a window of width s
/// centred on its support point, where s = 2 for single-parity PMFs and 1
/// otherwise, and the resulting piecewise-linear CDF is inverted. With d the
/// standard quantile this gives
///   d - s/2 + s * (level - F(d - s)) / (F(d) - F(d - s)).
double quantile(const DurationPMF& pmf, double level, QuantileMode mode);

}  // namespace rally
