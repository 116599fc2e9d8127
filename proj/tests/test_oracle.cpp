#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "rally/game.hpp"
#include "test_util.hpp"

using namespace rally;

namespace {

void compare_with_dp(const GameConfig& c, const RallyProbs& p, Player s) {
  const auto dp = oracle::markov_dp(c, p, s, 600);
  REQUIRE(dp.residual < 1e-15);
  const auto outcomes = game_outcome_pmfs(p, c, s, 1e-15);
  double covered = 0.0;
  for (const OutcomePmf& o : outcomes) {
    covered += o.probability;
    CHECK(std::abs(o.probability - dp.score_prob(o.score)) <= 1e-10);
    for (int d = 0; d <= 200; ++d) {
      CHECK(std::abs(o.probability * o.pmf.mass(d) - dp.joint_mass(o.score, d)) <= 1e-10);
    }
  }
  // Nothing the oracle reaches is missing from the engine.
  double dp_total = 0.0;
  for (const auto& [score, by_d] : dp.joint) dp_total += dp.score_prob(score);
  CHECK(std::abs(covered - dp_total) <= 1e-10);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("closed forms against the Markov recursion") {
    for (int n = 1; n <= 4; ++n) {
      for (double pa : testutil::kGrid5) {
        for (double pb : testutil::kGrid5) {
          for (Player s : {Player::A, Player::B}) {
            compare_with_dp(testutil::sideout(n), {pa, pb}, s);
            compare_with_dp(testutil::rallypoint(n), {pa, pb}, s);
          }
        }
      }
    }
  }

  TEST_CASE("tie-break games against the Markov recursion") {
    for (int n = 2; n <= 4; ++n) {
      for (int l : {2, 3}) {
        GameConfig c = testutil::sideout(n);
        c.tiebreak = l;
        for (double pa : testutil::kGrid5) {
          for (double pb : testutil::kGrid5) {
            for (Player s : {Player::A, Player::B}) compare_with_dp(c, {pa, pb}, s);
          }
        }
      }
    }
  }

  TEST_CASE("Markov recursion against exact enumeration") {
    using Rational = boost::multiprecision::cpp_rational;
    const int d_max = 16;
    for (int n = 1; n <= 2; ++n) {
      for (auto [num_a, num_b] : {std::pair{3, 7}, std::pair{1, 2}, std::pair{9, 4}}) {
        const Rational pa(num_a, 10), pb(num_b, 10);
        GameConfig c = testutil::sideout(n);
        for (Player s : {Player::A, Player::B}) {
          const auto exact = oracle::enumerate<Rational>(c, pa, pb, s, d_max);
          const auto dp = oracle::markov_dp(c, {num_a / 10.0, num_b / 10.0}, s, d_max);
          for (const auto& [key, w] : exact) {
            CHECK(std::abs(static_cast<double>(w) - dp.joint_mass(key.first, key.second)) <= 1e-15);
          }
          for (const auto& [score, by_d] : dp.joint) {
            for (int d = 0; d < static_cast<int>(by_d.size()); ++d) {
              if (by_d[d] > 0.0) CHECK(exact.count({score, d}) == 1);
            }
          }
        }
      }
    }
  }
}
