#pragma once

// Shared domain types for two-person serve-and-rally games.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rally {

enum class Player { A, B };

constexpr Player other(Player p) { return p == Player::A ? Player::B : Player::A; }
constexpr std::size_t index(Player p) { return p == Player::A ? 0 : 1; }

char to_char(Player p);
/// Accepts "A"/"B" (case-insensitive); throws DomainError otherwise.
Player parse_player(std::string_view s);

enum class ScoringSystem { SideOut, RallyPoint };

std::string_view to_string(ScoringSystem s);
ScoringSystem parse_system(std::string_view s);

// Error hierarchy. Everything the library throws derives from rally::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter or argument outside the admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an event whose probability underflows.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent game/match configuration (e.g. tie-break requested where none exists).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Observed data that no parameter value can produce.
class InfeasibleData : public Error {
 public:
  InfeasibleData(std::size_t record, const std::string& what)
      : Error("record " + std::to_string(record) + ": " + what), record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Rally-winning probabilities on serve. The complements and the exchange
/// probability q are always derived, never stored.
struct RallyProbs {
  double pa = 0.5;
  double pb = 0.5;

  double qa() const { return 1.0 - pa; }
  double qb() const { return 1.0 - pb; }
  double q() const { return qa() * qb(); }
  RallyProbs swapped() const { return {pb, pa}; }
  double rally_prob(Player server) const { return server == Player::A ? pa : pb; }
};

struct GameConfig {
  int n = 15;
  ScoringSystem system = ScoringSystem::SideOut;
  // Set to l at (n-1, n-1); absent means play through to n.
  std::optional<int> tiebreak;
  // Probability that A serves first; 0 or 1 for a fixed first server.
  double sa = 1.0;
};

struct TerminalScore {
  int alpha = 0;
  int beta = 0;
  Player last_scorer = Player::A;

  /// Role-swapped view: B's points first, last scorer relabelled.
  TerminalScore swapped() const { return {beta, alpha, other(last_scorer)}; }
  int points(Player p) const { return p == Player::A ? alpha : beta; }
  int total() const { return alpha + beta; }

  auto operator<=>(const TerminalScore&) const = default;
};

std::string to_string(const TerminalScore& s);

struct GammaBounds {
  int gamma0;
  int gamma1;
  int gamma2;

  static GammaBounds of(int alpha, int beta);
};

/// Range check on probabilities only. `exact` additionally rejects q == 1.
void validate(const RallyProbs& probs, bool exact = true);
void validate(const RallyProbs& probs, const GameConfig& config, bool exact = true);

/// Checks alpha/beta against the last scorer (the scorer needs at least one point).
void validate_event(int alpha, int beta, Player last_scorer);

/// Binomial coefficient in double precision with binom(-1, -1) = 1 and zero
/// outside 0 <= k <= m otherwise.
double binom(int m, int k);

}  // namespace rally
