#pragma once

// Rally-point scoring: every rally scores, so there are no exchanges and the
// number of rallies equals alpha + beta once the score is known.

#include <optional>

#include "rally/core.hpp"
#include "rally/duration.hpp"
#include "rally/pmf.hpp"
#include "rally/sideout.hpp"

namespace rally {

/// A-game probability of alpha:beta with exactly r A-interruptions.
double rp_score_prob_r(int alpha, int beta, Player last_scorer, int r, const RallyProbs& probs);

/// Summed over r. Uses p_a^{alpha-r} p_b^{beta-r} (q_a q_b)^r per term, so
/// no division by p_a or p_b is needed.
double rp_score_prob(int alpha, int beta, Player last_scorer, Player server,
                     const RallyProbs& probs);
double rp_score_prob(const TerminalScore& score, Player server, const RallyProbs& probs);

double rp_game_win_prob(Player winner, Player server, const RallyProbs& probs,
                        const GameConfig& config);

ScoreDistribution rp_score_distribution(const RallyProbs& probs, const GameConfig& config,
                                        std::optional<Player> server);

struct RallyPointDurations {
  AggregateMoments moments;
  DurationPMF pmf;  // unconditional, mixed over s_a
};

RallyPointDurations rp_duration_quantities(const RallyProbs& probs, const GameConfig& config);

}  // namespace rally
