#include "rally/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace rally {

char to_char(Player p) { return p == Player::A ? 'A' : 'B'; }

Player parse_player(std::string_view s) {
  if (s.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    if (c == 'A') return Player::A;
    if (c == 'B') return Player::B;
  }
  throw DomainError("player must be A or B, got '" + std::string(s) + "'");
}

std::string_view to_string(ScoringSystem s) {
  return s == ScoringSystem::SideOut ? "sideout" : "rallypoint";
}

ScoringSystem parse_system(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "sideout" || lower == "side-out") return ScoringSystem::SideOut;
  if (lower == "rallypoint" || lower == "rally-point") return ScoringSystem::RallyPoint;
  throw DomainError("unknown scoring system '" + std::string(s) + "'");
}

std::string to_string(const TerminalScore& s) {
  std::ostringstream os;
  os << '(' << s.alpha << ',' << s.beta << ',' << to_char(s.last_scorer) << ')';
  return os.str();
}

GammaBounds GammaBounds::of(int alpha, int beta) {
  return {std::min(beta, 1), std::min(alpha, beta), std::min(alpha, beta - 1)};
}

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const RallyProbs& probs, bool exact) {
  if (!is_probability(probs.pa)) {
    throw DomainError("p_a must lie in [0,1], got " + std::to_string(probs.pa));
  }
  if (!is_probability(probs.pb)) {
    throw DomainError("p_b must lie in [0,1], got " + std::to_string(probs.pb));
  }
  if (exact && probs.q() >= 1.0) {
    throw DomainError("q=1, game never terminates (p_a = p_b = 0)");
  }
}

void validate(const RallyProbs& probs, const GameConfig& config, bool exact) {
  // Rally-point games always terminate, even when q = 1.
  validate(probs, exact && config.system == ScoringSystem::SideOut);
  if (config.n < 1) {
    throw DomainError("target score n must be >= 1, got " + std::to_string(config.n));
  }
  if (!is_probability(config.sa)) {
    throw DomainError("s_a must lie in [0,1], got " + std::to_string(config.sa));
  }
  if (config.tiebreak) {
    if (*config.tiebreak < 2) {
      throw DomainError("tie-break l must be >= 2, got " + std::to_string(*config.tiebreak));
    }
    if (config.system != ScoringSystem::SideOut) {
      throw ConfigError("tie-breaks are only defined for side-out scoring");
    }
    if (config.n < 2) {
      throw ConfigError("tie-break requires n >= 2");
    }
  }
}

void validate_event(int alpha, int beta, Player last_scorer) {
  if (alpha < 0 || beta < 0) {
    throw DomainError("scores must be non-negative");
  }
  if (last_scorer == Player::A && alpha < 1) {
    throw DomainError("A cannot score last with alpha = 0");
  }
  if (last_scorer == Player::B && beta < 1) {
    throw DomainError("B cannot score last with beta = 0");
  }
}

double binom(int m, int k) {
  if (m == -1 && k == -1) return 1.0;
  if (m < 0 || k < 0 || k > m) return 0.0;
  k = std::min(k, m - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(m - k + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace rally
