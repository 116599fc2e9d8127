#include "rally/sideout.hpp"

#include <cmath>

namespace rally {

namespace {

// p_A^{alpha,beta,C}: first server A. Factors p/(1-q) are <= 1, so the
// prefactor is accumulated without overflow.
double score_prob_a_game(int alpha, int beta, Player last, const RallyProbs& probs) {
  const double q = probs.q();
  // 1 - q without cancellation when both probabilities are small.
  const double norm = probs.pa + probs.pb * probs.qa();
  const double prefactor =
      std::pow(probs.pa / norm, alpha) * std::pow(probs.pb / norm, beta);
  if (prefactor == 0.0) return 0.0;
  const GammaBounds g = GammaBounds::of(alpha, beta);
  double sum = 0.0;
  if (last == Player::A) {
    for (int r = g.gamma0; r <= g.gamma1; ++r) {
      sum += binom(alpha, r) * binom(beta - 1, r - 1) * std::pow(q, r);
    }
    return prefactor * sum;
  }
  for (int r = 1; r <= g.gamma2 + 1; ++r) {
    sum += binom(alpha, r - 1) * binom(beta - 1, r - 1) * std::pow(q, r - 1);
  }
  return prefactor * probs.qa() * sum;
}

std::vector<TerminalScore> regular_scores(int n, bool tiebreak) {
  std::vector<TerminalScore> out;
  const int last_k = tiebreak ? n - 2 : n - 1;
  for (int k = 0; k <= last_k; ++k) out.push_back({n, k, Player::A});
  for (int k = 0; k <= last_k; ++k) out.push_back({k, n, Player::B});
  return out;
}

}  // namespace

double prob_score_r_j(int alpha, int beta, Player last_scorer, int r, int j,
                      const RallyProbs& probs) {
  validate(probs);
  validate_event(alpha, beta, last_scorer);
  if (j < 0) return 0.0;
  const GammaBounds g = GammaBounds::of(alpha, beta);
  const double q = probs.q();
  const double base = std::pow(probs.pa, alpha) * std::pow(probs.pb, beta) *
                      binom(alpha + beta + j - 1, j);
  if (last_scorer == Player::A) {
    if (r < g.gamma0 || r > g.gamma1) return 0.0;
    return base * binom(alpha, r) * binom(beta - 1, r - 1) * std::pow(q, r + j);
  }
  if (r < 1 || r > g.gamma2 + 1) return 0.0;
  return base * binom(alpha, r - 1) * binom(beta - 1, r - 1) * probs.qa() *
         std::pow(q, r + j - 1);
}

double score_prob(int alpha, int beta, Player last_scorer, Player server,
                  const RallyProbs& probs) {
  validate(probs);
  validate_event(alpha, beta, last_scorer);
  if (server == Player::A) return score_prob_a_game(alpha, beta, last_scorer, probs);
  return score_prob_a_game(beta, alpha, other(last_scorer), probs.swapped());
}

double score_prob(const TerminalScore& score, Player server, const RallyProbs& probs) {
  return score_prob(score.alpha, score.beta, score.last_scorer, server, probs);
}

double ScoreDistribution::win_prob(Player winner) const {
  double acc = 0.0;
  for (const auto& e : entries) {
    if (e.score.last_scorer == winner) acc += e.probability;
  }
  return acc;
}

double ScoreDistribution::total() const {
  double acc = 0.0;
  for (const auto& e : entries) acc += e.probability;
  return acc;
}

double ScoreDistribution::prob(const TerminalScore& score) const {
  for (const auto& e : entries) {
    if (e.score == score) return e.probability;
  }
  return 0.0;
}

double tie_probability(Player server, const RallyProbs& probs, const GameConfig& config) {
  validate(probs, config);
  if (config.n < 2) throw ConfigError("a tie at n-1 requires n >= 2");
  const int t = config.n - 1;
  return score_prob(t, t, Player::A, server, probs) + score_prob(t, t, Player::B, server, probs);
}

double tiebreak_score_prob(int k, Player winner, Player server, const RallyProbs& probs,
                           const GameConfig& config) {
  validate(probs, config);
  if (!config.tiebreak) throw ConfigError("tie-break length l is not configured");
  const int l = *config.tiebreak;
  if (k < 0 || k >= l) {
    throw DomainError("tie-break loser points must lie in [0, l-1], got " + std::to_string(k));
  }
  const int t = config.n - 1;
  // The l-stage is a fresh game to l whose first server scored the tying point.
  const TerminalScore stage = winner == Player::A ? TerminalScore{l, k, Player::A}
                                                  : TerminalScore{k, l, Player::B};
  double acc = 0.0;
  for (Player tied_by : {Player::A, Player::B}) {
    acc += score_prob(t, t, tied_by, server, probs) * score_prob(stage, tied_by, probs);
  }
  return acc;
}

ScoreDistribution score_distribution(const RallyProbs& probs, const GameConfig& config,
                                     std::optional<Player> server) {
  validate(probs, config);
  if (config.system != ScoringSystem::SideOut) {
    throw ConfigError("score_distribution here is for side-out games");
  }
  ScoreDistribution dist{config, server, {}};
  auto prob_for = [&](auto&& f) {
    if (server) return f(*server);
    double acc = 0.0;
    if (config.sa > 0.0) acc += config.sa * f(Player::A);
    if (config.sa < 1.0) acc += (1.0 - config.sa) * f(Player::B);
    return acc;
  };
  const bool tb = config.tiebreak.has_value();
  for (const auto& s : regular_scores(config.n, tb)) {
    dist.entries.push_back({s, prob_for([&](Player c) { return score_prob(s, c, probs); })});
  }
  if (tb) {
    const int l = *config.tiebreak;
    const int t = config.n - 1;
    for (Player w : {Player::A, Player::B}) {
      for (int k = 0; k < l; ++k) {
        const TerminalScore s = w == Player::A ? TerminalScore{t + l, t + k, Player::A}
                                               : TerminalScore{t + k, t + l, Player::B};
        dist.entries.push_back(
            {s, prob_for([&](Player c) { return tiebreak_score_prob(k, w, c, probs, config); })});
      }
    }
  }
  return dist;
}

double game_win_prob(Player winner, Player server, const RallyProbs& probs,
                     const GameConfig& config) {
  return score_distribution(probs, config, server).win_prob(winner);
}

MixedServerResult mixed_server_probs(const RallyProbs& probs, const GameConfig& config) {
  ScoreDistribution dist = score_distribution(probs, config, std::nullopt);
  const double a = dist.win_prob(Player::A);
  const double b = dist.win_prob(Player::B);
  return {std::move(dist), a, b};
}

}  // namespace rally
