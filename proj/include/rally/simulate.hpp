#pragma once

// Rally-by-rally Monte Carlo under either scoring system.
//
// Every uniform deviate is a function of (master seed, stream, draw index),
// so results do not depend on how replications are scheduled over threads.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rally/core.hpp"
#include "rally/pmf.hpp"

namespace rally {

struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  /// Independent sub-stream i of this stream.
  SeedSpec child(std::uint64_t i) const;
};

/// SplitMix64 sequence started from a hash of (master, stream).
class CounterRng {
 public:
  explicit CounterRng(const SeedSpec& seed);
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

struct RallyRecord {
  Player server;
  Player winner;
};

struct SimResult {
  TerminalScore score;
  Player first_server = Player::A;
  Player winner = Player::A;
  long long duration = 0;
  std::optional<std::vector<RallyRecord>> trajectory;
};

struct SimOptions {
  std::optional<Player> server;  // default: drawn from config.sa
  bool keep_trajectory = false;
};

SimResult simulate_game(const RallyProbs& probs, const GameConfig& config, const SeedSpec& seed,
                        const SimOptions& options = {});

/// Game j uses seed.child(j). `threads` = 0 picks the hardware concurrency.
std::vector<SimResult> simulate_games(const RallyProbs& probs, const GameConfig& config,
                                      std::size_t count, const SeedSpec& seed,
                                      unsigned threads = 0);

struct EstimatorReport {
  std::size_t J = 0;
  std::array<std::size_t, 2> wins{};       // J^A, J^B
  std::array<double, 2> win_prob{};        // p-hat per winner
  Moments overall;                         // (e-hat, v-hat)
  std::array<std::optional<Moments>, 2> given_winner;  // empty when J^C = 0
};

/// Sample moments with the 1/J normalization throughout, including the
/// winner-conditional variances (1/J^C rather than 1/(J^C - 1)).
EstimatorReport summarize(std::span<const SimResult> games);

EstimatorReport run_experiment(const RallyProbs& probs, const GameConfig& config, std::size_t J,
                               const SeedSpec& seed, unsigned threads = 0);

/// Grid point i is simulated from seed.child(i).
std::vector<EstimatorReport> sweep(std::span<const RallyProbs> grid, const GameConfig& config,
                                   std::size_t J, const SeedSpec& seed, unsigned threads = 0);

/// Order-fixed pairwise summation.
double pairwise_sum(std::span<const double> xs);

/// Runs body(i) for i in [0, count) over up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace rally
