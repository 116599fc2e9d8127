#include "rally/match.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "rally/game.hpp"

namespace rally {

std::string_view to_string(ServerRule r) {
  switch (r) {
    case ServerRule::WinnerServesNext: return "winner";
    case ServerRule::Alternate: return "alternate";
    case ServerRule::CoinFlipEach: return "coin";
  }
  return "?";
}

ServerRule parse_server_rule(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "winner" || lower == "winner-serves-next") return ServerRule::WinnerServesNext;
  if (lower == "alternate") return ServerRule::Alternate;
  if (lower == "coin" || lower == "coin-flip") return ServerRule::CoinFlipEach;
  throw DomainError("unknown server rule '" + std::string(s) + "'");
}

namespace {

void check(const RallyProbs& probs, const GameConfig& game, const MatchConfig& match) {
  validate(probs, game, true);
  if (match.games_to_win < 1 || match.games_to_win > kMaxGamesToWin) {
    throw DomainError("games to win must lie in [1, " + std::to_string(kMaxGamesToWin) + "]");
  }
}

// Law of the next game's first server after a game served by s and won by w.
std::array<double, 2> next_server(ServerRule rule, Player s, Player w, double sa) {
  switch (rule) {
    case ServerRule::WinnerServesNext: return w == Player::A ? std::array{1.0, 0.0} : std::array{0.0, 1.0};
    case ServerRule::Alternate: return s == Player::B ? std::array{1.0, 0.0} : std::array{0.0, 1.0};
    case ServerRule::CoinFlipEach: return {sa, 1.0 - sa};
  }
  return {0.0, 0.0};
}

// Generic walk over match states (games won by A, by B) with a per-server
// payload. `step(s, w, payload)` returns the payload carried out of a game
// served by s and won by w; `add(dst, src, weight)` accumulates.
template <class T, class Step, class Add>
T walk(const GameConfig& game, const MatchConfig& match, const T& start, Step step, Add add) {
  const int M = match.games_to_win;
  // state[i][j][s]
  std::vector<std::vector<std::array<T, 2>>> state(
      static_cast<std::size_t>(M), std::vector<std::array<T, 2>>(static_cast<std::size_t>(M)));
  add(state[0][0][0], start, game.sa);
  add(state[0][0][1], start, 1.0 - game.sa);
  T done{};
  for (int total = 0; total <= 2 * M - 2; ++total) {
    for (int i = std::max(0, total - (M - 1)); i <= std::min(total, M - 1); ++i) {
      const int j = total - i;
      for (Player s : {Player::A, Player::B}) {
        const T& here = state[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][index(s)];
        for (Player w : {Player::A, Player::B}) {
          const T out = step(s, w, here);
          const int ni = i + (w == Player::A), nj = j + (w == Player::B);
          if (ni == M || nj == M) {
            add(done, out, 1.0);
            continue;
          }
          const auto ns = next_server(match.rule, s, w, game.sa);
          for (Player t : {Player::A, Player::B}) {
            if (ns[index(t)] > 0.0) {
              add(state[static_cast<std::size_t>(ni)][static_cast<std::size_t>(nj)][index(t)], out,
                  ns[index(t)]);
            }
          }
        }
      }
    }
  }
  return done;
}

// P(winner w | server s) for one game.
std::array<std::array<double, 2>, 2> game_win_table(const RallyProbs& probs, const GameConfig& game) {
  std::array<std::array<double, 2>, 2> t{};
  for (Player s : {Player::A, Player::B}) {
    for (Player w : {Player::A, Player::B}) t[index(s)][index(w)] = game_win(w, s, probs, game);
  }
  return t;
}

}  // namespace

double match_win_prob(Player winner, const RallyProbs& probs, const GameConfig& game,
                      const MatchConfig& match) {
  check(probs, game, match);
  const auto win = game_win_table(probs, game);
  // Payload: (reach probability, probability that `winner` took the last game).
  using P = std::array<double, 2>;
  const P done = walk<P>(
      game, match, P{1.0, 0.0},
      [&](Player s, Player w, const P& in) {
        const double out = in[0] * win[index(s)][index(w)];
        return P{out, w == winner ? out : 0.0};
      },
      [](P& dst, const P& src, double w) {
        dst[0] += w * src[0];
        dst[1] += w * src[1];
      });
  return done[1];
}

double match_expected_duration(const RallyProbs& probs, const GameConfig& game,
                               const MatchConfig& match) {
  check(probs, game, match);
  const auto win = game_win_table(probs, game);
  // e[s][w] = E[D; winner w | server s]
  std::array<std::array<double, 2>, 2> e{};
  for (Player s : {Player::A, Player::B}) {
    for (const Outcome& o : game_outcomes(probs, game, s)) {
      e[index(s)][index(o.score.last_scorer)] += o.probability * o.moments.mean;
    }
  }
  // Payload: (reach probability, accumulated expected rallies on reaching paths).
  using P = std::array<double, 2>;
  const P done = walk<P>(
      game, match, P{1.0, 0.0},
      [&](Player s, Player w, const P& in) {
        return P{in[0] * win[index(s)][index(w)], in[1] * win[index(s)][index(w)] + in[0] * e[index(s)][index(w)]};
      },
      [](P& dst, const P& src, double w) {
        dst[0] += w * src[0];
        dst[1] += w * src[1];
      });
  return done[1];
}

DurationPMF match_duration_pmf(const RallyProbs& probs, const GameConfig& game,
                               const MatchConfig& match, double epsilon) {
  check(probs, game, match);
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double per_game = epsilon / (2 * match.games_to_win - 1);
  // Joint sub-PMFs of (duration, winner) for each first server.
  std::array<std::array<DurationPMF, 2>, 2> joint;
  for (Player s : {Player::A, Player::B}) {
    for (const OutcomePmf& o : game_outcome_pmfs(probs, game, s, per_game)) {
      joint[index(s)][index(o.score.last_scorer)].add_scaled(o.pmf, o.probability);
    }
  }
  return walk<DurationPMF>(
      game, match, DurationPMF::point_mass(0),
      [&](Player s, Player w, const DurationPMF& in) {
        if (in.empty() || joint[index(s)][index(w)].empty()) return DurationPMF{};
        return in.convolve(joint[index(s)][index(w)]);
      },
      [](DurationPMF& dst, const DurationPMF& src, double w) {
        if (w > 0.0 && !src.empty()) dst.add_scaled(src, w);
      });
}

DurationPMF total_duration_pmf(const DurationPMF& match_pmf, int matches) {
  if (matches < 1) throw DomainError("number of matches must be >= 1");
  DurationPMF result = DurationPMF::point_mass(0);
  DurationPMF base = match_pmf;
  for (int k = matches;;) {
    if (k & 1) result = result.convolve(base);
    k >>= 1;
    if (k == 0) break;
    base = base.convolve(base);
  }
  return result;
}

MatchSim simulate_match(const RallyProbs& probs, const GameConfig& game, const MatchConfig& match,
                        const SeedSpec& seed) {
  check(probs, game, match);
  CounterRng coin(seed.child(~std::uint64_t{0}));
  auto draw_server = [&] {
    if (game.sa >= 1.0) return Player::A;
    if (game.sa <= 0.0) return Player::B;
    return coin.bernoulli(game.sa) ? Player::A : Player::B;
  };
  MatchSim out{Player::A, {0, 0}, 0};
  Player server = draw_server();
  for (std::uint64_t g = 0;; ++g) {
    const SimResult r = simulate_game(probs, game, seed.child(g), {server, false});
    out.duration += r.duration;
    ++out.games[index(r.winner)];
    if (out.games[index(r.winner)] == match.games_to_win) {
      out.winner = r.winner;
      return out;
    }
    switch (match.rule) {
      case ServerRule::WinnerServesNext: server = r.winner; break;
      case ServerRule::Alternate: server = other(server); break;
      case ServerRule::CoinFlipEach: server = draw_server(); break;
    }
  }
}

}  // namespace rally
