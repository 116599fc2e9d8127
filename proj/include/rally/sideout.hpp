#pragma once

// Exact score-level probabilities under side-out scoring, where only the
// server can score. Quantities for B-serving games come from the A-game
// formulas with the roles of A and B exchanged.

#include <optional>
#include <vector>

#include "rally/core.hpp"

namespace rally {

/// Probability, in an A-game, of reaching alpha:beta with `last_scorer`
/// scoring last after exactly r A-interruptions and j exchanges. Zero for r
/// outside the admissible range.
double prob_score_r_j(int alpha, int beta, Player last_scorer, int r, int j,
                      const RallyProbs& probs);

/// Probability that a game with the given first server passes through the
/// tally alpha:beta with `last_scorer` scoring the last of those points.
double score_prob(int alpha, int beta, Player last_scorer, Player server,
                  const RallyProbs& probs);
double score_prob(const TerminalScore& score, Player server, const RallyProbs& probs);

struct ScoreEntry {
  TerminalScore score;
  double probability;
};

struct ScoreDistribution {
  GameConfig config;
  std::optional<Player> server;  // nullopt: mixed over config.sa
  std::vector<ScoreEntry> entries;

  double win_prob(Player winner) const;
  double total() const;
  /// Zero when the score is not a terminal score of this game.
  double prob(const TerminalScore& score) const;
};

/// All terminal scores of a side-out game (tie-break extension included
/// when config.tiebreak is set), for a fixed server or mixed over config.sa.
ScoreDistribution score_distribution(const RallyProbs& probs, const GameConfig& config,
                                     std::optional<Player> server);

double game_win_prob(Player winner, Player server, const RallyProbs& probs,
                     const GameConfig& config);

struct MixedServerResult {
  ScoreDistribution distribution;
  double win_a;
  double win_b;
};

/// Score distribution and win probabilities unconditional on the server.
MixedServerResult mixed_server_probs(const RallyProbs& probs, const GameConfig& config);

/// Probability of reaching the (n-1, n-1) tie in a game with this first server.
double tie_probability(Player server, const RallyProbs& probs, const GameConfig& config);

/// Probability of the extended final score after a tie-break to l: the
/// winner takes l further points while the loser takes k (0 <= k < l).
/// The l-stage is served first by whoever scored the tying point.
double tiebreak_score_prob(int k, Player winner, Player server, const RallyProbs& probs,
                           const GameConfig& config);

}  // namespace rally
