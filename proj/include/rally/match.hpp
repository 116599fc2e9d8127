#pragma once

// Matches: the first player to win M games. Games are independent given
// their first servers. The first game's server follows GameConfig::sa.

#include <array>
#include <span>
#include <vector>

#include "rally/core.hpp"
#include "rally/duration.hpp"
#include "rally/pmf.hpp"
#include "rally/simulate.hpp"

namespace rally {

enum class ServerRule { WinnerServesNext, Alternate, CoinFlipEach };

std::string_view to_string(ServerRule r);
ServerRule parse_server_rule(std::string_view s);

struct MatchConfig {
  int games_to_win = 2;
  ServerRule rule = ServerRule::WinnerServesNext;
};

constexpr int kMaxGamesToWin = 20;

double match_win_prob(Player winner, const RallyProbs& probs, const GameConfig& game,
                      const MatchConfig& match);

/// Expected total rallies, from per-game conditional means along the match DP.
double match_expected_duration(const RallyProbs& probs, const GameConfig& game,
                               const MatchConfig& match);

DurationPMF match_duration_pmf(const RallyProbs& probs, const GameConfig& game,
                               const MatchConfig& match, double epsilon);

/// Law of the total rallies over `matches` independent matches.
DurationPMF total_duration_pmf(const DurationPMF& match_pmf, int matches);

struct MatchSim {
  Player winner;
  std::array<int, 2> games{};
  long long duration = 0;
};

/// Game g is simulated from seed.child(g); server coin flips use a separate child stream.
MatchSim simulate_match(const RallyProbs& probs, const GameConfig& game, const MatchConfig& match,
                        const SeedSpec& seed);

}  // namespace rally
