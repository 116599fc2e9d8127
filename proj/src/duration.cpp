#include "rally/duration.hpp"

#include <algorithm>
#include <cmath>

#include "rally/game.hpp"
#include "rally/sideout.hpp"

namespace rally {

namespace {

constexpr double kUnderflow = 1e-300;
constexpr int kMaxSeriesTerms = 10'000'000;

void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw DomainError("exchange probability q must lie in [0,1), got " + std::to_string(q));
  }
}

// Exchange-count law: NB_l = (1-q)^m q^l binom(m+l-1, l), built by its ratio
// recursion so that no binomial is ever formed explicitly.
class ExchangeLaw {
 public:
  ExchangeLaw(int m, double q) : m_(m), q_(q) {
    const double first = std::pow(1.0 - q, m);
    if (first == 0.0) throw DomainError("q too close to 1: exchange law underflows");
    terms_.push_back(first);
  }

  double at(int l) {
    if (l < 0) return 0.0;
    while (static_cast<int>(terms_.size()) <= l) {
      const int i = static_cast<int>(terms_.size()) - 1;
      terms_.push_back(terms_.back() * q_ * static_cast<double>(m_ + i) / static_cast<double>(i + 1));
    }
    return terms_[static_cast<std::size_t>(l)];
  }

  // Upper bound on P[L > l]. Successive ratios q(m+i)/(i+1) decrease in i,
  // so the tail is dominated by a geometric series.
  double tail_after(int l) {
    if (l < 0) return 1.0;
    const double rho = q_ * static_cast<double>(m_ + l + 1) / static_cast<double>(l + 2);
    if (rho >= 1.0) return 1.0;
    return std::min(1.0, at(l + 1) / (1.0 - rho));
  }

 private:
  int m_;
  double q_;
  std::vector<double> terms_;
};

int shift_of(Player last_scorer) { return last_scorer == Player::B ? 1 : 0; }

}  // namespace

double InterruptionWeights::weight(int r) const {
  if (r < r_min || r > r_max()) return 0.0;
  return weights[static_cast<std::size_t>(r - r_min)];
}

double InterruptionWeights::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * (r_min + static_cast<int>(i));
  return acc;
}

double InterruptionWeights::variance() const {
  const double mu = mean();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double dev = (r_min + static_cast<int>(i)) - mu;
    acc += weights[i] * dev * dev;
  }
  return acc;
}

InterruptionWeights interruption_weights(int alpha, int beta, Player last_scorer, double q) {
  validate_event(alpha, beta, last_scorer);
  check_q(q);
  const GammaBounds g = GammaBounds::of(alpha, beta);
  InterruptionWeights w;
  int r_max;
  if (last_scorer == Player::A) {
    w.r_min = g.gamma0;
    r_max = g.gamma1;
  } else {
    w.r_min = 1;
    r_max = g.gamma2 + 1;
  }
  // Powers of q are taken relative to the first term so that tiny q cannot
  // underflow the whole vector; q = 0 yields the limiting point mass.
  double total = 0.0;
  for (int r = w.r_min; r <= r_max; ++r) {
    const double c = last_scorer == Player::A ? binom(alpha, r) * binom(beta - 1, r - 1)
                                              : binom(alpha, r - 1) * binom(beta - 1, r - 1);
    const double term = c * std::pow(q, r - w.r_min);
    w.weights.push_back(term);
    total += term;
  }
  for (double& x : w.weights) x /= total;
  return w;
}

double mgf_conditional(int alpha, int beta, Player last_scorer, double q, double t) {
  check_q(q);
  const double denom = 1.0 - q * std::exp(2.0 * t);
  if (!(denom > 0.0)) throw DomainError("MGF diverges: q e^{2t} >= 1");
  const InterruptionWeights w = interruption_weights(alpha, beta, last_scorer, q);
  const int delta = shift_of(last_scorer);
  double r_part = 0.0;
  for (int r = w.r_min; r <= w.r_max(); ++r) r_part += w.weight(r) * std::exp(t * (2 * r - delta));
  return std::pow((1.0 - q) * std::exp(t) / denom, alpha + beta) * r_part;
}

double expected_duration_conditional(int alpha, int beta, Player last_scorer, double q) {
  return conditional_moments(alpha, beta, last_scorer, q).mean;
}

double variance_duration_conditional(int alpha, int beta, Player last_scorer, double q) {
  return conditional_moments(alpha, beta, last_scorer, q).variance;
}

Moments conditional_moments(int alpha, int beta, Player last_scorer, double q) {
  const InterruptionWeights w = interruption_weights(alpha, beta, last_scorer, q);
  const double m = alpha + beta;
  const double mean = m * (1.0 + q) / (1.0 - q) - shift_of(last_scorer) + 2.0 * w.mean();
  const double var = 4.0 * m * q / ((1.0 - q) * (1.0 - q)) + 4.0 * w.variance();
  return {mean, var};
}

double h_coefficient(int alpha, int beta, Player last_scorer, int j) {
  validate_event(alpha, beta, last_scorer);
  if (j < 0) return 0.0;
  const GammaBounds g = GammaBounds::of(alpha, beta);
  const int m = alpha + beta;
  double acc = 0.0;
  if (last_scorer == Player::A) {
    for (int l = std::max(j - g.gamma1, 0); l <= j; ++l) {
      acc += binom(m + l - 1, l) * binom(alpha, j - l) * binom(beta - 1, j - l - 1);
    }
  } else {
    for (int l = std::max(j - g.gamma2, 0); l <= j; ++l) {
      acc += binom(m + l - 1, l) * binom(alpha, j - l) * binom(beta - 1, j - l);
    }
  }
  return acc;
}

DurationPMF duration_pmf_conditional(int alpha, int beta, Player last_scorer, double q,
                                     double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const InterruptionWeights w = interruption_weights(alpha, beta, last_scorer, q);
  const int m = alpha + beta;
  const int delta = shift_of(last_scorer);
  // Index j carries D = m + delta + 2j; R contributes shift s = r - delta.
  const int s_min = w.r_min - delta;
  const int s_max = w.r_max() - delta;
  ExchangeLaw law(m, q);

  std::vector<double> masses;
  double bound = 1.0;
  for (int j = 0;; ++j) {
    if (j > kMaxSeriesTerms) throw DomainError("duration series did not reach tolerance");
    double mass = 0.0;
    bound = 0.0;
    for (int s = s_min; s <= s_max; ++s) {
      const double ws = w.weight(s + delta);
      mass += ws * law.at(j - s);
      bound += ws * law.tail_after(j - s);
    }
    masses.push_back(mass);
    masses.push_back(0.0);
    if (bound <= epsilon) break;
  }
  masses.pop_back();
  return DurationPMF(m + delta, std::move(masses), bound);
}

DurationPMF duration_pmf_conditional(int alpha, int beta, Player last_scorer,
                                     const RallyProbs& probs, double epsilon) {
  validate(probs);
  const double p = score_prob(alpha, beta, last_scorer, Player::A, probs);
  if (p < kUnderflow) {
    throw ConditioningError("conditioning event " + to_string(TerminalScore{alpha, beta, last_scorer}) +
                            " has probability below 1e-300");
  }
  return duration_pmf_conditional(alpha, beta, last_scorer, probs.q(), epsilon);
}

AggregateMoments aggregate_moments(const RallyProbs& probs, const GameConfig& config) {
  validate(probs, config);
  AggregateMoments out;
  out.sa = config.sa;
  // Per server: accumulate P, P*e, P*(v + e^2) by winner.
  std::array<std::array<double, 2>, 2> mass{}, first{}, second{};
  for (Player server : {Player::A, Player::B}) {
    const auto c = index(server);
    for (const Outcome& o : game_outcomes(probs, config, server)) {
      const auto w = index(o.score.last_scorer);
      mass[c][w] += o.probability;
      first[c][w] += o.probability * o.moments.mean;
      second[c][w] += o.probability * (o.moments.variance + o.moments.mean * o.moments.mean);
    }
    ServerAggregate& agg = out.by_server[c];
    double e = 0.0, s2 = 0.0, total = 0.0;
    for (std::size_t w = 0; w < 2; ++w) {
      agg.win_prob[w] = mass[c][w];
      total += mass[c][w];
      e += first[c][w];
      s2 += second[c][w];
      if (mass[c][w] > kUnderflow) {
        const double mu = first[c][w] / mass[c][w];
        agg.given_winner[w] = Moments{mu, std::max(0.0, second[c][w] / mass[c][w] - mu * mu)};
      }
    }
    e /= total;
    agg.overall = {e, std::max(0.0, s2 / total - e * e)};
  }

  const std::array<double, 2> weight{config.sa, 1.0 - config.sa};
  for (std::size_t w = 0; w < 2; ++w) {
    double p = 0.0, e = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      p += weight[c] * mass[c][w];
      e += weight[c] * first[c][w];
      s2 += weight[c] * second[c][w];
    }
    if (p > kUnderflow) {
      const double mu = e / p;
      out.given_winner[w] = Moments{mu, std::max(0.0, s2 / p - mu * mu)};
    }
  }
  double e = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const Moments& m = out.by_server[c].overall;
    e += weight[c] * m.mean;
    s2 += weight[c] * (m.variance + m.mean * m.mean);
  }
  out.overall = {e, std::max(0.0, s2 - e * e)};
  return out;
}

DurationPMF duration_pmf(const RallyProbs& probs, const GameConfig& config,
                         std::optional<Player> server, std::optional<Player> winner,
                         double epsilon) {
  validate(probs, config);
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  DurationPMF acc;
  double conditioning = 0.0;
  for (Player c : {Player::A, Player::B}) {
    const double ws = server ? (*server == c ? 1.0 : 0.0) : (c == Player::A ? config.sa : 1.0 - config.sa);
    if (ws == 0.0) continue;
    for (const OutcomePmf& o : game_outcome_pmfs(probs, config, c, epsilon)) {
      if (winner && o.score.last_scorer != *winner) continue;
      acc.add_scaled(o.pmf, ws * o.probability);
      conditioning += ws * o.probability;
    }
  }
  if (!(conditioning > kUnderflow)) {
    throw ConditioningError("conditioning event has probability below 1e-300");
  }
  return acc.scaled(1.0 / conditioning);
}

DurationPMF duration_pmf_unconditional(const RallyProbs& probs, const GameConfig& config,
                                       double epsilon) {
  return duration_pmf(probs, config, std::nullopt, std::nullopt, epsilon);
}

double quantile(const DurationPMF& pmf, double level, QuantileMode mode) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  if (pmf.empty()) throw DomainError("quantile of an empty distribution");
  double acc = 0.0;
  int d = pmf.offset();
  for (; d <= pmf.last(); ++d) {
    acc += pmf.mass(d);
    if (acc >= level) break;
  }
  if (d > pmf.last()) {
    throw DomainError("quantile level " + std::to_string(level) +
                      " is not reached within the stored support");
  }
  if (mode == QuantileMode::Standard) return d;
  const int step = pmf.single_parity() ? 2 : 1;
  const double lo = pmf.cdf(d - step);
  const double hi = pmf.cdf(d);
  return d - 0.5 * step + step * (level - lo) / (hi - lo);
}

}  // namespace rally
