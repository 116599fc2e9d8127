#include "rally/game.hpp"

#include "rally/duration.hpp"
#include "rally/rallypoint.hpp"

namespace rally {

namespace {

// Moments/PMF of D given a side-out tally, for either first server. Only q
// enters, so a B-game is the A-game of the swapped tally.
Moments sideout_moments(const TerminalScore& s, Player server, double q) {
  const TerminalScore t = server == Player::A ? s : s.swapped();
  return conditional_moments(t.alpha, t.beta, t.last_scorer, q);
}

DurationPMF sideout_pmf(const TerminalScore& s, Player server, double q, double epsilon) {
  const TerminalScore t = server == Player::A ? s : s.swapped();
  return duration_pmf_conditional(t.alpha, t.beta, t.last_scorer, q, epsilon);
}

struct TiebreakPath {
  Player tied_by;
  double weight;
  TerminalScore tie;
  TerminalScore stage;
};

// Two routes to an extended score: the tying point is scored by A or by B,
// after which that player serves first in the race to l.
std::vector<TiebreakPath> tiebreak_paths(const TerminalScore& final_score, Player server,
                                         const RallyProbs& probs, const GameConfig& config) {
  const int t = config.n - 1;
  const TerminalScore stage{final_score.alpha - t, final_score.beta - t, final_score.last_scorer};
  std::vector<TiebreakPath> out;
  for (Player c : {Player::A, Player::B}) {
    const TerminalScore tie{t, t, c};
    const double w = score_prob(tie, server, probs) * score_prob(stage, c, probs);
    if (w > 0.0) out.push_back({c, w, tie, stage});
  }
  return out;
}

bool is_tiebreak_score(const TerminalScore& s, const GameConfig& config) {
  return config.tiebreak && s.alpha >= config.n - 1 && s.beta >= config.n - 1;
}

}  // namespace

ScoreDistribution game_score_distribution(const RallyProbs& probs, const GameConfig& config,
                                          std::optional<Player> server) {
  if (config.system == ScoringSystem::RallyPoint) return rp_score_distribution(probs, config, server);
  return score_distribution(probs, config, server);
}

double game_win(Player winner, Player server, const RallyProbs& probs, const GameConfig& config) {
  return game_score_distribution(probs, config, server).win_prob(winner);
}

std::vector<Outcome> game_outcomes(const RallyProbs& probs, const GameConfig& config,
                                   Player server) {
  const ScoreDistribution dist = game_score_distribution(probs, config, server);
  const double q = probs.q();
  std::vector<Outcome> out;
  for (const ScoreEntry& e : dist.entries) {
    if (!(e.probability > 0.0)) continue;
    Moments m;
    if (config.system == ScoringSystem::RallyPoint) {
      m = {static_cast<double>(e.score.total()), 0.0};
    } else if (is_tiebreak_score(e.score, config)) {
      double w_total = 0.0, first = 0.0, second = 0.0;
      for (const TiebreakPath& path : tiebreak_paths(e.score, server, probs, config)) {
        const Moments a = sideout_moments(path.tie, server, q);
        const Moments b = sideout_moments(path.stage, path.tied_by, q);
        const double mu = a.mean + b.mean;
        const double var = a.variance + b.variance;
        w_total += path.weight;
        first += path.weight * mu;
        second += path.weight * (var + mu * mu);
      }
      const double mu = first / w_total;
      m = {mu, std::max(0.0, second / w_total - mu * mu)};
    } else {
      m = sideout_moments(e.score, server, q);
    }
    out.push_back({e.score, e.probability, m});
  }
  return out;
}

std::vector<OutcomePmf> game_outcome_pmfs(const RallyProbs& probs, const GameConfig& config,
                                          Player server, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const ScoreDistribution dist = game_score_distribution(probs, config, server);
  const double q = probs.q();
  std::vector<OutcomePmf> out;
  for (const ScoreEntry& e : dist.entries) {
    if (!(e.probability > 0.0)) continue;
    DurationPMF pmf;
    if (config.system == ScoringSystem::RallyPoint) {
      pmf = DurationPMF::point_mass(e.score.total());
    } else if (is_tiebreak_score(e.score, config)) {
      const auto paths = tiebreak_paths(e.score, server, probs, config);
      double w_total = 0.0;
      for (const auto& path : paths) w_total += path.weight;
      for (const auto& path : paths) {
        // Each stage gets half the budget so the convolved bound stays below epsilon.
        const DurationPMF a = sideout_pmf(path.tie, server, q, 0.5 * epsilon);
        const DurationPMF b = sideout_pmf(path.stage, path.tied_by, q, 0.5 * epsilon);
        pmf.add_scaled(a.convolve(b), path.weight / w_total);
      }
    } else {
      pmf = sideout_pmf(e.score, server, q, epsilon);
    }
    out.push_back({e.score, e.probability, std::move(pmf)});
  }
  return out;
}

}  // namespace rally
