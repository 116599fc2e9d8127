#include "rally/rallypoint.hpp"

#include <cmath>

namespace rally {

namespace {

double rp_term(int alpha, int beta, Player last, int r, const RallyProbs& probs) {
  const GammaBounds g = GammaBounds::of(alpha, beta);
  const double x = probs.qa() * probs.qb();
  if (last == Player::A) {
    if (r < g.gamma0 || r > g.gamma1) return 0.0;
    return binom(alpha, r) * binom(beta - 1, r - 1) * std::pow(probs.pa, alpha - r) *
           std::pow(probs.pb, beta - r) * std::pow(x, r);
  }
  if (r < 1 || r > g.gamma2 + 1) return 0.0;
  return binom(alpha, r - 1) * binom(beta - 1, r - 1) * std::pow(probs.pa, alpha - r + 1) *
         std::pow(probs.pb, beta - r) * probs.qa() * std::pow(x, r - 1);
}

void require_rally_point(const GameConfig& config) {
  if (config.system != ScoringSystem::RallyPoint) {
    throw ConfigError("expected a rally-point game configuration");
  }
}

}  // namespace

double rp_score_prob_r(int alpha, int beta, Player last_scorer, int r, const RallyProbs& probs) {
  validate(probs, false);
  validate_event(alpha, beta, last_scorer);
  return rp_term(alpha, beta, last_scorer, r, probs);
}

double rp_score_prob(int alpha, int beta, Player last_scorer, Player server,
                     const RallyProbs& probs) {
  validate(probs, false);
  validate_event(alpha, beta, last_scorer);
  if (server == Player::B) {
    return rp_score_prob(beta, alpha, other(last_scorer), Player::A, probs.swapped());
  }
  const GammaBounds g = GammaBounds::of(alpha, beta);
  const int lo = last_scorer == Player::A ? g.gamma0 : 1;
  const int hi = last_scorer == Player::A ? g.gamma1 : g.gamma2 + 1;
  double acc = 0.0;
  for (int r = lo; r <= hi; ++r) acc += rp_term(alpha, beta, last_scorer, r, probs);
  return acc;
}

double rp_score_prob(const TerminalScore& score, Player server, const RallyProbs& probs) {
  return rp_score_prob(score.alpha, score.beta, score.last_scorer, server, probs);
}

ScoreDistribution rp_score_distribution(const RallyProbs& probs, const GameConfig& config,
                                        std::optional<Player> server) {
  require_rally_point(config);
  validate(probs, config, false);
  ScoreDistribution dist{config, server, {}};
  auto add = [&](const TerminalScore& s) {
    double p;
    if (server) {
      p = rp_score_prob(s, *server, probs);
    } else {
      p = 0.0;
      if (config.sa > 0.0) p += config.sa * rp_score_prob(s, Player::A, probs);
      if (config.sa < 1.0) p += (1.0 - config.sa) * rp_score_prob(s, Player::B, probs);
    }
    dist.entries.push_back({s, p});
  };
  for (int k = 0; k < config.n; ++k) add({config.n, k, Player::A});
  for (int k = 0; k < config.n; ++k) add({k, config.n, Player::B});
  return dist;
}

double rp_game_win_prob(Player winner, Player server, const RallyProbs& probs,
                        const GameConfig& config) {
  return rp_score_distribution(probs, config, server).win_prob(winner);
}

RallyPointDurations rp_duration_quantities(const RallyProbs& probs, const GameConfig& config) {
  require_rally_point(config);
  // Durations are deterministic given the score, so any positive tolerance is exact.
  return {aggregate_moments(probs, config), duration_pmf_unconditional(probs, config, 1.0)};
}

}  // namespace rally
