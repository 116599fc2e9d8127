#include "rally/simulate.hpp"

#include <algorithm>
#include <thread>

namespace rally {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

SeedSpec SeedSpec::child(std::uint64_t i) const {
  return {master, mix64(stream + kGolden) ^ mix64(i * 0xd1b54a32d192ed03ULL + 1)};
}

CounterRng::CounterRng(const SeedSpec& seed)
    : state_(mix64(mix64(seed.master ^ 0x6a09e667f3bcc909ULL) + seed.stream * kGolden)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

SimResult simulate_game(const RallyProbs& probs, const GameConfig& config, const SeedSpec& seed,
                        const SimOptions& options) {
  validate(probs, config, true);
  CounterRng rng(seed);
  SimResult res;
  if (options.server) {
    res.first_server = *options.server;
  } else if (config.sa >= 1.0) {
    res.first_server = Player::A;
  } else if (config.sa <= 0.0) {
    res.first_server = Player::B;
  } else {
    res.first_server = rng.bernoulli(config.sa) ? Player::A : Player::B;
  }
  if (options.keep_trajectory) res.trajectory.emplace();

  const bool sideout = config.system == ScoringSystem::SideOut;
  std::array<int, 2> pts{0, 0};
  int target = config.n;
  bool extended = false;
  Player server = res.first_server;
  Player last = server;
  for (;;) {
    const Player w = rng.bernoulli(probs.rally_prob(server)) ? server : other(server);
    ++res.duration;
    if (res.trajectory) res.trajectory->push_back({server, w});
    const bool scores = !sideout || w == server;
    if (scores) {
      ++pts[index(w)];
      last = w;
      if (pts[index(w)] >= target) break;
      if (sideout && config.tiebreak && !extended && pts[0] == config.n - 1 &&
          pts[1] == config.n - 1) {
        extended = true;
        target = config.n - 1 + *config.tiebreak;
      }
    }
    server = w;
  }
  res.score = {pts[0], pts[1], last};
  res.winner = last;
  return res;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<SimResult> simulate_games(const RallyProbs& probs, const GameConfig& config,
                                      std::size_t count, const SeedSpec& seed, unsigned threads) {
  validate(probs, config, true);
  std::vector<SimResult> out(count);
  parallel_for(count, threads,
               [&](std::size_t j) { out[j] = simulate_game(probs, config, seed.child(j)); });
  return out;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace {

Moments sample_moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  return {mean, pairwise_sum(sq) / n};
}

}  // namespace

EstimatorReport summarize(std::span<const SimResult> games) {
  if (games.empty()) throw DomainError("J must be >= 1");
  EstimatorReport rep;
  rep.J = games.size();
  std::vector<double> all;
  std::array<std::vector<double>, 2> by_winner;
  all.reserve(games.size());
  for (const SimResult& g : games) {
    const double d = static_cast<double>(g.duration);
    all.push_back(d);
    by_winner[index(g.winner)].push_back(d);
  }
  rep.overall = sample_moments(all);
  for (Player w : {Player::A, Player::B}) {
    const std::size_t i = index(w);
    rep.wins[i] = by_winner[i].size();
    rep.win_prob[i] = static_cast<double>(rep.wins[i]) / static_cast<double>(rep.J);
    if (!by_winner[i].empty()) rep.given_winner[i] = sample_moments(by_winner[i]);
  }
  return rep;
}

EstimatorReport run_experiment(const RallyProbs& probs, const GameConfig& config, std::size_t J,
                               const SeedSpec& seed, unsigned threads) {
  if (J < 1) throw DomainError("J must be >= 1");
  const auto games = simulate_games(probs, config, J, seed, threads);
  return summarize(games);
}

std::vector<EstimatorReport> sweep(std::span<const RallyProbs> grid, const GameConfig& config,
                                   std::size_t J, const SeedSpec& seed, unsigned threads) {
  if (grid.empty()) throw DomainError("sweep grid is empty");
  if (J < 1) throw DomainError("J must be >= 1");
  for (const RallyProbs& p : grid) validate(p, config, true);
  std::vector<EstimatorReport> out(grid.size());
  // Parallelize over grid points; each point runs its replications serially.
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const SeedSpec s = seed.child(i);
    std::vector<SimResult> games(J);
    for (std::size_t j = 0; j < J; ++j) games[j] = simulate_game(grid[i], config, s.child(j));
    out[i] = summarize(games);
  });
  return out;
}

}  // namespace rally
