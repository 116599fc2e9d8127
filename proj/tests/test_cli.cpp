#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "rally/io.hpp"

using namespace rally;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

OutputTable table(const std::vector<std::string>& args) {
  const Run r = call(args);
  INFO(r.err);
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  return OutputTable::read_csv(is);
}

std::size_t col(const OutputTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns().size(); ++i) {
    if (t.columns()[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

double num(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  return std::get<double>(c);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("score-dist") {
    const auto t = table({"score-dist", "--system", "sideout", "--n", "15", "--pa", ".5", "--pb", ".5", "--server", "A"});
    double a = 0, all = 0;
    for (const auto& row : t.rows()) {
      const double p = num(row[col(t, "probability")]);
      all += p;
      if (std::get<std::string>(row[col(t, "winner")]) == "A") a += p;
    }
    CHECK(std::abs(a - 0.53) <= 0.005);
    CHECK(std::abs(all - 1) <= 1e-12);

    const auto sure = table({"score-dist", "--pa", "1", "--pb", ".4"});
    REQUIRE(sure.rows().size() == 1);
    CHECK(num(sure.rows()[0][0]) == 15);
    CHECK(num(sure.rows()[0][1]) == 0);
    CHECK(num(sure.rows()[0][col(sure, "probability")]) == doctest::Approx(1.0).epsilon(1e-12));

    for (const auto& args : std::vector<std::vector<std::string>>{
             {"score-dist", "--n", "7", "--pa", ".3", "--pb", ".8", "--sa", ".4"},
             {"score-dist", "--n", "9", "--tiebreak", "2", "--p", ".45"},
             {"score-dist", "--system", "rallypoint", "--n", "21", "--pa", ".6", "--pb", ".3", "--server", "B"}}) {
      const auto u = table(args);
      double s = 0;
      for (const auto& row : u.rows()) s += num(row[col(u, "probability")]);
      CHECK(std::abs(s - 1) <= 1e-12);
    }
  }

  TEST_CASE("duration moments, pmf and quantiles") {
    const auto m = table({"duration", "--pa", ".6", "--pb", ".5"});
    CHECK(std::get<std::string>(m.rows()[0][0]) == "all");
    CHECK(std::abs(num(m.rows()[0][col(m, "mean")]) - 41.6) <= 0.05);
    CHECK(std::abs(num(m.rows()[0][col(m, "sd")]) - 9.5) <= 0.05);

    const auto pmf = table({"duration", "--what", "pmf", "--pa", ".6", "--pb", ".5", "--score", "15,7,A"});
    // Seven B points need at least one side-out pair: 22 + 2.
    CHECK(num(pmf.rows().front()[0]) == 24);
    for (const auto& row : pmf.rows()) {
      if (static_cast<long long>(num(row[0])) % 2 == 1) CHECK(num(row[1]) == 0.0);
    }
    CHECK(num(pmf.rows().back()[col(pmf, "cdf")]) > 1 - 1e-11);

    double prev = 0;
    for (int k = 0; k <= 14; ++k) {
      const auto q = table({"duration", "--what", "quantiles", "--levels", "0.5", "--pa", ".6", "--pb", ".5",
                            "--score", "15," + std::to_string(k) + ",A"});
      const double med = num(q.rows()[0][1]);
      CHECK(med >= prev);
      prev = med;
    }
    const auto by = table({"duration", "--by-score", "--pa", ".6", "--pb", ".5", "--winner", "B"});
    CHECK(by.rows().size() == 15);
  }

  TEST_CASE("compare") {
    const auto t = table({"compare", "--p-grid", "0.0001,0.1,0.9999"});
    REQUIRE(t.rows().size() == 5);
    CHECK(std::abs(num(t.rows()[0][col(t, "so_mean")]) - 16) <= 0.01);
    CHECK(std::abs(num(t.rows()[2][col(t, "so_mean")]) - 15) <= 0.01);
    CHECK(std::abs(num(t.rows()[1][col(t, "win_ratio")]) - 28) <= 1.0);
    CHECK(std::get<std::string>(t.rows()[3][0]) == "limit_p0");
    CHECK(num(t.rows()[3][col(t, "so_mean")]) == 16);
    CHECK(num(t.rows()[4][col(t, "so_mean")]) == 15);
  }

  TEST_CASE("compare --tune") {
    const auto t = table({"compare", "--tune", "19:29", "--p-grid", "0.0005:0.9995:0.0005"});
    REQUIRE(t.rows().size() == 11);
    auto winner = [&](const std::string& flag) {
      for (const auto& row : t.rows()) {
        if (num(row[col(t, flag)]) == 1) return static_cast<int>(num(row[0]));
      }
      return -1;
    };
    // Every n shares the ratio floor at p = .5; 27 is the first to reach it.
    CHECK(winner("argmin_ratio") == 27);
    CHECK(winner("argmin_mean_abs_diff") == 28);
    CHECK(winner("argmin_max_abs_diff") == 29);
    // The worst-case gap keeps shrinking across the whole range.
    for (std::size_t i = 1; i < t.rows().size(); ++i) {
      CHECK(num(t.rows()[i][1]) < num(t.rows()[i - 1][1]));
    }
  }

  TEST_CASE("simulate is reproducible and estimate recovers the truth") {
    const std::string f1 = "cli_sim_a.jsonl", f2 = "cli_sim_b.jsonl", o1 = "cli_sim_a.csv", o2 = "cli_sim_b.csv";
    const std::vector<std::string> base{"simulate", "--pa", ".6", "--pb", ".5", "--J", "200", "--seed", "17"};
    auto with = [&](std::vector<std::string> extra) {
      std::vector<std::string> a = base;
      a.insert(a.end(), extra.begin(), extra.end());
      return a;
    };
    REQUIRE(call(with({"--records", f1, "--out", o1, "--threads", "1"})).code == 0);
    REQUIRE(call(with({"--records", f2, "--out", o2, "--threads", "3"})).code == 0);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(slurp(o1) == slurp(o2));
    CHECK_FALSE(slurp(o1).empty());

    const auto e = table({"estimate", "--input", f1});
    CHECK(std::abs(num(e.rows()[0][col(e, "p_a")]) - 0.6) <= 0.03);
    CHECK(std::abs(num(e.rows()[0][col(e, "p_b")]) - 0.5) <= 0.03);
    CHECK(num(e.rows()[0][col(e, "records")]) == 200);

    const auto sweep = table({"simulate", "--p-grid", "0.2:0.8:0.3", "--J", "50"});
    CHECK(sweep.rows().size() == 3);
    for (const auto& f : {f1, f2, o1, o2}) std::filesystem::remove(f);
  }

  TEST_CASE("match and plan") {
    const auto m = table({"match", "--pa", ".6", "--pb", ".5", "--rule", "alternate", "--games-to-win", "2"});
    CHECK(num(m.rows()[0][col(m, "win_A")]) + num(m.rows()[0][col(m, "win_B")]) == doctest::Approx(1.0));
    const auto w = table({"match", "--pa", ".6", "--pb", ".5", "--rule", "winner", "--games-to-win", "2"});
    CHECK(std::abs(num(m.rows()[0][col(m, "win_A")]) - num(w.rows()[0][col(w, "win_A")])) <= 1e-12);

    const auto plan = table({"plan", "--pa", ".6", "--pb", ".5", "--matches", "1", "--games-to-win", "1", "--levels", "0.5"});
    const auto q = table({"duration", "--what", "quantiles", "--pa", ".6", "--pb", ".5", "--levels", "0.5"});
    CHECK(num(plan.rows()[0][col(plan, "quantile")]) == num(q.rows()[0][1]));
    const auto plan4 = table({"plan", "--pa", ".6", "--pb", ".5", "--matches", "4", "--levels", "0.1,0.9"});
    CHECK(num(plan4.rows()[0][2]) < num(plan4.rows()[1][2]));
  }

  TEST_CASE("JSON output") {
    const Run r = call({"--format", "json", "match", "--pa", ".6", "--pb", ".5"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    const OutputTable t = OutputTable::read_json(is);
    CHECK(t.columns().front() == "rule");
    CHECK(std::get<std::string>(t.rows()[0][0]) == "winner");
  }

  TEST_CASE("exit codes") {
    CHECK(call({}).code == cli::kUsage);
    CHECK(call({"bogus"}).code == cli::kUsage);
    CHECK(call({"score-dist", "--n", "abc"}).code == cli::kUsage);
    CHECK(call({"score-dist", "--p", ".5", "--pa", ".3"}).code == cli::kUsage);
    CHECK(call({"duration", "--score", "15"}).code == cli::kUsage);
    CHECK(call({"score-dist", "--pa", "1.2"}).code == cli::kDomain);
    CHECK(call({"score-dist", "--pa", "0", "--pb", "0"}).code == cli::kDomain);
    CHECK(call({"match", "--games-to-win", "40"}).code == cli::kDomain);
    CHECK(call({"duration", "--pa", "1", "--pb", ".5", "--score", "15,3,A", "--what", "pmf"}).code == cli::kDomain);
    CHECK(call({"estimate", "--input", "/nonexistent/records.jsonl"}).code == cli::kIo);
    {
      std::ofstream f("cli_bad.jsonl");
      f << "{\"first_server\":\"A\",\"alpha\":\n";
    }
    CHECK(call({"estimate", "--input", "cli_bad.jsonl"}).code == cli::kIo);
    std::filesystem::remove("cli_bad.jsonl");
    {
      std::ofstream f("cli_infeasible.jsonl");
      f << "{\"first_server\":\"A\",\"alpha\":15,\"beta\":0,\"last_scorer\":\"A\",\"duration\":15}\n";
      f << "{\"first_server\":\"A\",\"alpha\":15,\"beta\":0,\"last_scorer\":\"A\",\"duration\":16}\n";
    }
    const Run inf = call({"estimate", "--input", "cli_infeasible.jsonl"});
    CHECK(inf.code == cli::kDomain);
    CHECK(inf.err.find("record 1") != std::string::npos);
    std::filesystem::remove("cli_infeasible.jsonl");
  }
}
