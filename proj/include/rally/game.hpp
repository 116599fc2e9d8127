#pragma once

// Scoring-system dispatch: per-outcome probabilities and conditional
// durations for a single game, with tie-break stages composed in.

#include <optional>
#include <vector>

#include "rally/core.hpp"
#include "rally/pmf.hpp"
#include "rally/sideout.hpp"

namespace rally {

struct Outcome {
  TerminalScore score;
  double probability;
  Moments moments;  // of D given this outcome
};

struct OutcomePmf {
  TerminalScore score;
  double probability;
  DurationPMF pmf;  // of D given this outcome
};

/// Terminal scores with positive probability in a game with this first
/// server, together with the conditional moments of D.
std::vector<Outcome> game_outcomes(const RallyProbs& probs, const GameConfig& config,
                                   Player server);

std::vector<OutcomePmf> game_outcome_pmfs(const RallyProbs& probs, const GameConfig& config,
                                          Player server, double epsilon);

/// Score distribution for either scoring system.
ScoreDistribution game_score_distribution(const RallyProbs& probs, const GameConfig& config,
                                          std::optional<Player> server);

double game_win(Player winner, Player server, const RallyProbs& probs, const GameConfig& config);

}  // namespace rally
