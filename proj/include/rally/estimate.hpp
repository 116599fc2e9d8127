#pragma once

// Likelihoods of observed side-out games and maximum-likelihood fits of the
// serve-winning probabilities.
//
// A record is a complete game played to its end without extension: the last
// scorer won, with strictly more points than the opponent.

#include <optional>
#include <span>
#include <vector>

#include "rally/core.hpp"

namespace rally {

struct GameRecord {
  Player first_server = Player::A;
  TerminalScore score;
  std::optional<long long> duration;
};

enum class FitMode { ScoreOnly, ScoreDuration };
enum class FitModel { Server, NoServer };

struct FitResult {
  double pa = 0.5;
  double pb = 0.5;  // equals 1 - pa in the no-server model
  double loglik = 0.0;
  bool converged = false;
  bool boundary = false;
  int evaluations = 0;
};

/// Sum of log P(score) over records.
double loglik_score(std::span<const GameRecord> records, double pa, double pb);

/// Sum of log P(score, D = d) over records; every record needs a duration.
double loglik_score_duration(std::span<const GameRecord> records, double pa, double pb);

struct FitOptions {
  double delta = 1e-9;      // search box [delta, 1 - delta]
  double tolerance = 1e-7;  // simplex size in the transformed coordinates
  int max_evaluations = 10000;  // per start
};

FitResult fit(std::span<const GameRecord> records, FitMode mode, FitModel model,
              const FitOptions& options = {});

/// Relabel A <-> B in every record.
std::vector<GameRecord> swap_labels(std::span<const GameRecord> records);

}  // namespace rally
