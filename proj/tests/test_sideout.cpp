#include <boost/multiprecision/cpp_int.hpp>

#include "doctest.h"
#include "oracle.hpp"
#include "rally/game.hpp"
#include "rally/sideout.hpp"
#include "test_util.hpp"

using namespace rally;
using testutil::sideout;

namespace {
using Rational = boost::multiprecision::cpp_rational;

double sum_r_j(int a, int b, Player last, const RallyProbs& p) {
  double acc = 0.0;
  for (int r = 0; r <= a + 1; ++r) {
    for (int j = 0; j < 5000; ++j) {
      const double t = prob_score_r_j(a, b, last, r, j, p);
      acc += t;
      if (j > 10 && t < 1e-18) break;
    }
  }
  return acc;
}
}  // namespace

TEST_SUITE("sideout") {
  TEST_CASE("interruption/exchange resolved probabilities") {
    const RallyProbs half{0.5, 0.5};
    CHECK(prob_score_r_j(1, 0, Player::A, 0, 0, half) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prob_score_r_j(2, 1, Player::A, 1, 0, half) == doctest::Approx(0.0625).epsilon(1e-15));
    // Outside the admissible interruption range.
    CHECK(prob_score_r_j(2, 1, Player::A, 0, 0, half) == 0.0);
    CHECK(prob_score_r_j(2, 1, Player::A, 2, 0, half) == 0.0);
    CHECK(prob_score_r_j(2, 1, Player::B, 0, 0, half) == 0.0);
    for (int j = 1; j < 5; ++j) {
      CHECK(prob_score_r_j(3, 2, Player::A, 1, j, RallyProbs{1.0, 0.4}) == 0.0);
    }
  }

  TEST_CASE("(2,1,A) in an A-game against exact rational enumeration") {
    // Every rally sequence of length <= 40 at p_a = p_b = 1/2; the remaining
    // mass after 40 rallies is below 1e-9 because each exchange costs 1/4.
    GameConfig c = sideout(2);
    const auto joint = oracle::enumerate<Rational>(c, Rational(1, 2), Rational(1, 2), Player::A, 40);
    Rational total = 0;
    for (const auto& [key, w] : joint) {
      if (key.first == TerminalScore{2, 1, Player::A}) total += w;
    }
    const double exact = static_cast<double>(total);
    const double engine = score_prob(2, 1, Player::A, Player::A, {0.5, 0.5});
    CHECK(engine >= exact);
    CHECK(engine - exact < 1e-9);
    // One B interruption placed before or after the first A point: two 5-rally paths of 1/32.
    CHECK(joint.at({TerminalScore{2, 1, Player::A}, 5}) == Rational(1, 16));
  }

  TEST_CASE("closed form against the (r, j) series") {
    for (const RallyProbs& p : {RallyProbs{0.5, 0.5}, RallyProbs{0.7, 0.4}, RallyProbs{0.2, 0.9}}) {
      for (int a = 0; a <= 6; ++a) {
        for (int b = 0; b <= 6; ++b) {
          for (Player last : {Player::A, Player::B}) {
            if ((last == Player::A && a == 0) || (last == Player::B && b == 0)) continue;
            const double closed = score_prob(a, b, last, Player::A, p);
            CHECK(std::abs(closed - sum_r_j(a, b, last, p)) <= 1e-13);
          }
        }
      }
    }
  }

  TEST_CASE("shutout") {
    CHECK(score_prob(2, 0, Player::A, Player::A, {0.5, 0.5}) ==
          doctest::Approx(0.25 / 0.5625).epsilon(1e-14));
    const RallyProbs p{0.6, 0.3};
    const double q = p.q();
    CHECK(score_prob(15, 0, Player::A, Player::A, p) ==
          doctest::Approx(std::pow(p.pa / (1 - q), 15)).epsilon(1e-13));
  }

  TEST_CASE("normalization for n <= 30") {
    std::vector<RallyProbs> grid;
    for (double pa = 0.0; pa <= 1.0001; pa += 0.1) {
      for (double pb = 0.0; pb <= 1.0001; pb += 0.1) {
        if (pa < 0.05 && pb < 0.05) continue;  // q = 1
        grid.push_back({std::min(pa, 1.0), std::min(pb, 1.0)});
      }
    }
    for (int n = 1; n <= 30; ++n) {
      for (const RallyProbs& p : grid) {
        for (Player s : {Player::A, Player::B}) {
          const ScoreDistribution d = score_distribution(p, sideout(n), s);
          CHECK(d.entries.size() == static_cast<std::size_t>(2 * n));
          CHECK(std::abs(d.total() - 1.0) <= 1e-12);
          for (const auto& e : d.entries) {
            CHECK(e.probability >= 0.0);
            CHECK(e.probability <= 1.0 + 1e-15);
          }
          CHECK(std::abs(d.win_prob(Player::A) + d.win_prob(Player::B) - 1.0) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("role symmetry is exact") {
    for (double pa : testutil::kGrid5) {
      for (double pb : testutil::kGrid5) {
        for (int a = 0; a <= 8; ++a) {
          for (int b = 1; b <= 8; ++b) {
            for (Player c : {Player::A, Player::B}) {
              if (c == Player::A && a == 0) continue;
              CHECK(score_prob(a, b, c, Player::B, {pa, pb}) ==
                    score_prob(b, a, other(c), Player::A, {pb, pa}));
            }
          }
        }
      }
    }
  }

  TEST_CASE("negative binomial series identity") {
    for (int m = 1; m <= 30; m += 7) {
      for (double z : {0.05, 0.3, 0.6}) {
        double acc = 0.0;
        for (int j = 0; j < 3000; ++j) acc += binom(m + j - 1, j) * std::pow(z, j);
        CHECK(acc == doctest::Approx(std::pow(1 - z, -m)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("game-winning probabilities") {
    const GameConfig c = sideout(15);
    CHECK(std::abs(game_win_prob(Player::A, Player::A, {0.5, 0.5}, c) - 0.53) <= 0.005);
    CHECK(std::abs(game_win_prob(Player::B, Player::A, {0.5, 0.5}, c) - 0.47) <= 0.005);
    CHECK(std::abs(game_win_prob(Player::A, Player::A, {0.7, 0.5}, c) - 0.94) <= 0.005);
    CHECK(std::abs(game_win_prob(Player::A, Player::A, {0.4, 0.5}, c) - 0.22) <= 0.005);
    CHECK(game_win_prob(Player::A, Player::A, {1.0, 0.3}, c) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("server mixing") {
    const RallyProbs p{0.6, 0.5};
    GameConfig c = sideout(15);
    const auto fixed = score_distribution(p, c, Player::A);
    const MixedServerResult one = mixed_server_probs(p, c);
    for (std::size_t i = 0; i < fixed.entries.size(); ++i) {
      CHECK(one.distribution.entries[i].probability == doctest::Approx(fixed.entries[i].probability).epsilon(1e-15));
    }
    c.sa = 0.5;
    const MixedServerResult half = mixed_server_probs(p, c);
    const double pAA = game_win_prob(Player::A, Player::A, p, c);
    const double pBA = game_win_prob(Player::A, Player::B, p, c);
    CHECK(half.win_a == doctest::Approx((pAA + pBA) / 2).epsilon(1e-14));
    CHECK(half.win_a + half.win_b == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("tie-break") {
    GameConfig c = sideout(9);
    c.tiebreak = 2;
    const RallyProbs p{0.5, 0.5};
    for (Player s : {Player::A, Player::B}) {
      const double tie = tie_probability(s, p, c);
      CHECK(tie == doctest::Approx(score_prob(8, 8, Player::A, s, p) + score_prob(8, 8, Player::B, s, p)));
      double extended = 0.0;
      for (int k = 0; k < 2; ++k) {
        for (Player w : {Player::A, Player::B}) extended += tiebreak_score_prob(k, w, s, p, c);
      }
      CHECK(std::abs(extended - tie) <= 1e-13);
      const ScoreDistribution d = score_distribution(p, c, s);
      CHECK(std::abs(d.total() - 1.0) <= 1e-12);
      CHECK(d.prob({8, 9, Player::B}) == 0.0);  // (n-1, n) cannot end a set-to-2 game
      CHECK(d.prob({10, 9, Player::A}) == doctest::Approx(tiebreak_score_prob(1, Player::A, s, p, c)));
    }
    // No tie when A always wins its rallies on serve.
    for (int k = 0; k < 2; ++k) {
      CHECK(tiebreak_score_prob(k, Player::A, Player::A, {1.0, 0.5}, c) == 0.0);
      CHECK(tiebreak_score_prob(k, Player::B, Player::A, {1.0, 0.5}, c) == 0.0);
    }
    CHECK_THROWS_AS(tiebreak_score_prob(0, Player::A, Player::A, p, sideout(9)), ConfigError);
  }

  TEST_CASE("tie-break scores against the Markov oracle") {
    GameConfig c = sideout(9);
    c.tiebreak = 2;
    const RallyProbs p{0.5, 0.5};
    const auto dp = oracle::markov_dp(c, p, Player::A, 1500);
    CHECK(dp.residual < 1e-13);
    const ScoreDistribution d = score_distribution(p, c, Player::A);
    for (const auto& e : d.entries) CHECK(std::abs(e.probability - dp.score_prob(e.score)) <= 1e-11);
  }
}
