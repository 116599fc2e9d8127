#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rally/asymptotics.hpp"
#include "rally/duration.hpp"
#include "rally/estimate.hpp"
#include "rally/game.hpp"
#include "rally/io.hpp"
#include "rally/match.hpp"
#include "rally/rallypoint.hpp"
#include "rally/simulate.hpp"

namespace rally::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string cell_player(Player p) { return std::string(1, to_char(p)); }

Cell maybe(const std::optional<double>& x) {
  if (!x) return std::monostate{};
  return *x;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

// "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text, "grid");
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, "grid").front());
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw UsageError("grid must be start:stop:step with step > 0 and stop >= start");
  }
  const long long count = std::llround((parts[1] - parts[0]) / parts[2]) + 1;
  std::vector<double> out;
  for (long long i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto pos = text.find(':');
  if (pos == std::string::npos) throw UsageError("range must be lo:hi");
  try {
    const int lo = std::stoi(text.substr(0, pos));
    const int hi = std::stoi(text.substr(pos + 1));
    if (hi < lo) throw UsageError("range must have lo <= hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("range must be lo:hi");
  }
}

TerminalScore parse_score(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',')) {
    throw UsageError("score must be alpha,beta,last_scorer (e.g. 15,7,A)");
  }
  try {
    return {std::stoi(a), std::stoi(b), parse_player(c)};
  } catch (const std::logic_error&) {
    throw UsageError("score must be alpha,beta,last_scorer (e.g. 15,7,A)");
  }
}

// ---------------------------------------------------------------------------

struct GameOpts {
  std::string system = "sideout";
  int n = 15;
  double pa = 0.5;
  double pb = 0.5;
  double p = 0.5;
  std::string server = "A";
  double sa = 1.0;
  int tiebreak = 0;
  CLI::Option* p_opt = nullptr;
  CLI::Option* server_opt = nullptr;
  CLI::Option* sa_opt = nullptr;
  CLI::Option* tiebreak_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--system", system, "sideout or rallypoint")
        ->check(CLI::IsMember({"sideout", "rallypoint"}));
    app->add_option("--n", n, "target score");
    auto* pa_opt = app->add_option("--pa", pa, "P(A wins a rally on serve)");
    auto* pb_opt = app->add_option("--pb", pb, "P(B wins a rally on serve)");
    p_opt = app->add_option("--p", p, "no-server model: p_a = p, p_b = 1 - p");
    p_opt->excludes(pa_opt)->excludes(pb_opt);
    server_opt = app->add_option("--server", server, "first server A or B")
                     ->check(CLI::IsMember({"A", "B", "a", "b"}));
    sa_opt = app->add_option("--sa", sa, "probability that A serves first");
    sa_opt->excludes(server_opt);
    tiebreak_opt = app->add_option("--tiebreak", tiebreak, "set to l at (n-1, n-1)");
  }

  RallyProbs probs() const {
    if (p_opt->count()) return {p, 1.0 - p};
    return {pa, pb};
  }

  GameConfig config() const {
    GameConfig c;
    c.n = n;
    c.system = parse_system(system);
    if (tiebreak_opt->count()) c.tiebreak = tiebreak;
    if (sa_opt->count()) {
      c.sa = sa;
    } else {
      c.sa = parse_player(server) == Player::A ? 1.0 : 0.0;
    }
    return c;
  }

  std::optional<Player> fixed_server() const {
    if (sa_opt->count()) return std::nullopt;
    return parse_player(server);
  }
};

// Outcome mixture over the first server: probabilities weighted by s_a, the
// conditional moments combined by the law of total variance.
std::vector<Outcome> mixed_outcomes(const RallyProbs& probs, const GameConfig& config,
                                    std::optional<Player> server) {
  validate(probs, config, true);
  std::map<TerminalScore, std::array<double, 3>> acc;  // weight, first, second
  for (Player s : {Player::A, Player::B}) {
    const double w = server ? (*server == s ? 1.0 : 0.0) : (s == Player::A ? config.sa : 1.0 - config.sa);
    if (w == 0.0) continue;
    for (const Outcome& o : game_outcomes(probs, config, s)) {
      auto& a = acc[o.score];
      const double pw = w * o.probability;
      a[0] += pw;
      a[1] += pw * o.moments.mean;
      a[2] += pw * (o.moments.variance + o.moments.mean * o.moments.mean);
    }
  }
  std::vector<Outcome> out;
  for (const auto& [score, a] : acc) {
    if (!(a[0] > 0.0)) continue;
    const double mean = a[1] / a[0];
    out.push_back({score, a[0], {mean, std::max(0.0, a[2] / a[0] - mean * mean)}});
  }
  return out;
}

struct Pooled {
  double probability = 0.0;
  std::optional<Moments> moments;
};

Pooled pool(const std::vector<Outcome>& outcomes, std::function<bool(const Outcome&)> keep) {
  double w = 0.0, first = 0.0, second = 0.0;
  for (const Outcome& o : outcomes) {
    if (!keep(o)) continue;
    w += o.probability;
    first += o.probability * o.moments.mean;
    second += o.probability * (o.moments.variance + o.moments.mean * o.moments.mean);
  }
  Pooled p{w, std::nullopt};
  if (w > 0.0) {
    const double mean = first / w;
    p.moments = Moments{mean, std::max(0.0, second / w - mean * mean)};
  }
  return p;
}

std::vector<Cell> moment_cells(const std::optional<Moments>& m) {
  if (!m) return {std::monostate{}, std::monostate{}, std::monostate{}};
  return {m->mean, m->variance, std::sqrt(m->variance)};
}

OutputTable pmf_table(const DurationPMF& pmf) {
  OutputTable t({"duration", "probability", "cdf", "truncation_bound"});
  double cdf = 0.0;
  const auto masses = pmf.masses();
  for (std::size_t i = 0; i < masses.size(); ++i) {
    cdf += masses[i];
    t.add_row({static_cast<long long>(pmf.offset() + static_cast<int>(i)), masses[i], cdf,
               pmf.truncation_bound()});
  }
  return t;
}

OutputTable quantile_table(const DurationPMF& pmf, const std::vector<double>& levels,
                           QuantileMode mode) {
  OutputTable t({"level", "quantile"});
  for (double level : levels) t.add_row({level, quantile(pmf, level, mode)});
  return t;
}

QuantileMode parse_quantile_mode(const std::string& s) {
  return s == "interpolated" ? QuantileMode::Interpolated : QuantileMode::Standard;
}

// ---------------------------------------------------------------------------

OutputTable cmd_score_dist(const GameOpts& g) {
  const ScoreDistribution dist = game_score_distribution(g.probs(), g.config(), g.fixed_server());
  OutputTable t({"alpha", "beta", "last_scorer", "winner", "probability"});
  for (const ScoreEntry& e : dist.entries) {
    if (e.probability == 0.0) continue;  // impossible scores are omitted
    t.add_row({static_cast<long long>(e.score.alpha), static_cast<long long>(e.score.beta),
               cell_player(e.score.last_scorer), cell_player(e.score.last_scorer), e.probability});
  }
  return t;
}

struct DurationOpts {
  std::string what = "moments";
  std::string score;
  std::string winner;
  bool by_score = false;
  std::string levels = "0.1,0.25,0.5,0.75,0.9";
  std::string quantile_mode = "standard";
  double epsilon = 1e-12;
};

DurationPMF score_conditional_pmf(const RallyProbs& probs, const GameConfig& config,
                                  std::optional<Player> server, const TerminalScore& score,
                                  double epsilon) {
  validate(probs, config, true);
  DurationPMF acc;
  double total = 0.0;
  for (Player s : {Player::A, Player::B}) {
    const double w = server ? (*server == s ? 1.0 : 0.0) : (s == Player::A ? config.sa : 1.0 - config.sa);
    if (w == 0.0) continue;
    for (const OutcomePmf& o : game_outcome_pmfs(probs, config, s, epsilon)) {
      if (o.score != score) continue;
      acc.add_scaled(o.pmf, w * o.probability);
      total += w * o.probability;
    }
  }
  if (!(total > 1e-300)) throw ConditioningError("conditioning score " + to_string(score) + " has probability zero");
  return acc.scaled(1.0 / total);
}

OutputTable cmd_duration(const GameOpts& g, const DurationOpts& d) {
  const RallyProbs probs = g.probs();
  const GameConfig config = g.config();
  const auto server = g.fixed_server();
  std::optional<TerminalScore> score;
  std::optional<Player> winner;
  if (!d.score.empty()) score = parse_score(d.score);
  if (!d.winner.empty()) winner = parse_player(d.winner);
  if (score && winner) throw UsageError("--score and --winner are mutually exclusive");

  if (d.what == "moments") {
    const auto outcomes = mixed_outcomes(probs, config, server);
    if (d.by_score) {
      OutputTable t({"alpha", "beta", "last_scorer", "probability", "mean", "variance", "sd"});
      for (const Outcome& o : outcomes) {
        if (winner && o.score.last_scorer != *winner) continue;
        std::vector<Cell> row{static_cast<long long>(o.score.alpha),
                              static_cast<long long>(o.score.beta), cell_player(o.score.last_scorer),
                              o.probability};
        for (Cell& c : moment_cells(o.moments)) row.push_back(std::move(c));
        t.add_row(std::move(row));
      }
      return t;
    }
    OutputTable t({"condition", "probability", "mean", "variance", "sd"});
    auto add = [&](const std::string& label, const Pooled& p) {
      std::vector<Cell> row{label, p.probability};
      for (Cell& c : moment_cells(p.moments)) row.push_back(std::move(c));
      t.add_row(std::move(row));
    };
    if (score) {
      const Pooled p = pool(outcomes, [&](const Outcome& o) { return o.score == *score; });
      if (!p.moments) throw ConditioningError("conditioning score " + to_string(*score) + " has probability zero");
      add("score " + to_string(*score), p);
      return t;
    }
    for (const std::optional<Player>& w : {std::optional<Player>{}, std::optional<Player>{Player::A},
                                           std::optional<Player>{Player::B}}) {
      if (winner && w != winner) continue;
      add(w ? std::string("winner ") + to_char(*w) : "all",
          pool(outcomes, [&](const Outcome& o) { return !w || o.score.last_scorer == *w; }));
    }
    return t;
  }

  DurationPMF pmf = score ? score_conditional_pmf(probs, config, server, *score, d.epsilon)
                          : duration_pmf(probs, config, server, winner, d.epsilon);
  if (d.what == "pmf") return pmf_table(pmf);
  return quantile_table(pmf, parse_list(d.levels, "levels"), parse_quantile_mode(d.quantile_mode));
}

struct CompareOpts {
  int sideout_n = 15;
  int rallypoint_n = 21;
  std::string grid = "0.05:0.95:0.05";
  std::string tune;
};

// Side-out and rally-point aggregates for one A-game in the no-server model.
struct SystemRow {
  double win_a;
  Moments overall;
  std::array<std::optional<Moments>, 2> given;
};

SystemRow system_row(double p, ScoringSystem system, int n) {
  GameConfig c;
  c.n = n;
  c.system = system;
  c.sa = 1.0;
  const AggregateMoments agg = aggregate_moments({p, 1.0 - p}, c);
  const ServerAggregate& a = agg.by_server[0];
  return {a.win_prob[0], a.overall, a.given_winner};
}

double rally_point_win(double p, int n) {
  GameConfig c;
  c.n = n;
  c.system = ScoringSystem::RallyPoint;
  return rp_game_win_prob(Player::A, Player::A, {p, 1.0 - p}, c);
}

double sideout_win(double p, int n) {
  GameConfig c;
  c.n = n;
  return game_win_prob(Player::A, Player::A, {p, 1.0 - p}, c);
}

OutputTable cmd_compare(const CompareOpts& o) {
  const auto grid = parse_grid(o.grid);
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("grid points must lie in [0,1]");
  }
  if (!o.tune.empty()) {
    const auto [lo, hi] = parse_range(o.tune);
    if (lo < 1) throw DomainError("rally-point n must be >= 1");
    std::vector<double> so(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) so[i] = sideout_win(grid[i], o.sideout_n);
    struct Metrics {
      int n;
      double max_abs, mean_abs;
      std::optional<double> ratio_dev;
    };
    std::vector<Metrics> ms;
    for (int n = lo; n <= hi; ++n) {
      Metrics m{n, 0.0, 0.0, std::nullopt};
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rp = rally_point_win(grid[i], n);
        const double diff = std::abs(rp - so[i]);
        m.max_abs = std::max(m.max_abs, diff);
        m.mean_abs += diff / static_cast<double>(grid.size());
        if (grid[i] >= 0.5 && so[i] > 0.0) {
          m.ratio_dev = std::max(m.ratio_dev.value_or(0.0), std::abs(1.0 - rp / so[i]));
        }
      }
      ms.push_back(m);
    }
    auto argmin = [&](auto get) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < ms.size(); ++i) {
        if (get(ms[i]) < get(ms[best])) best = i;
      }
      return best;
    };
    const std::size_t b1 = argmin([](const Metrics& m) { return m.max_abs; });
    const std::size_t b2 = argmin([](const Metrics& m) { return m.mean_abs; });
    const std::size_t b3 = argmin([](const Metrics& m) { return m.ratio_dev.value_or(INFINITY); });
    OutputTable t({"rallypoint_n", "max_abs_diff", "mean_abs_diff", "max_abs_one_minus_ratio_p_ge_half",
                   "argmin_max_abs_diff", "argmin_mean_abs_diff", "argmin_ratio"});
    for (std::size_t i = 0; i < ms.size(); ++i) {
      t.add_row({static_cast<long long>(ms[i].n), ms[i].max_abs, ms[i].mean_abs, maybe(ms[i].ratio_dev),
                 static_cast<long long>(i == b1), static_cast<long long>(i == b2),
                 static_cast<long long>(i == b3)});
    }
    return t;
  }

  OutputTable t({"kind", "p", "so_win_A", "rp_win_A", "win_ratio", "so_mean", "so_sd", "rp_mean",
                 "rp_sd", "so_mean_Awin", "so_sd_Awin", "so_mean_Bwin", "so_sd_Bwin",
                 "rp_mean_Awin", "rp_sd_Awin", "rp_mean_Bwin", "rp_sd_Bwin"});
  auto mcells = [](const std::optional<Moments>& m) -> std::array<Cell, 2> {
    if (!m) return {std::monostate{}, std::monostate{}};
    return {m->mean, std::sqrt(m->variance)};
  };
  for (double p : grid) {
    const SystemRow so = system_row(p, ScoringSystem::SideOut, o.sideout_n);
    const SystemRow rp = system_row(p, ScoringSystem::RallyPoint, o.rallypoint_n);
    std::vector<Cell> row{std::string("exact"), p, so.win_a, rp.win_a};
    row.push_back(so.win_a > 0.0 ? Cell{rp.win_a / so.win_a} : Cell{std::monostate{}});
    row.insert(row.end(), {so.overall.mean, std::sqrt(so.overall.variance), rp.overall.mean,
                           std::sqrt(rp.overall.variance)});
    for (const auto* r : {&so, &rp}) {
      for (Player w : {Player::A, Player::B}) {
        const auto c = mcells(r->given[index(w)]);
        row.insert(row.end(), c.begin(), c.end());
      }
    }
    t.add_row(std::move(row));
  }
  for (LimitDirection dir : {LimitDirection::PToZero, LimitDirection::PToOne}) {
    const bool zero = dir == LimitDirection::PToZero;
    const Player likely = zero ? Player::B : Player::A;
    std::vector<Cell> row{std::string(zero ? "limit_p0" : "limit_p1"), zero ? 0.0 : 1.0,
                          zero ? 0.0 : 1.0, zero ? 0.0 : 1.0, std::monostate{}};
    for (auto [sys, n] : {std::pair{ScoringSystem::SideOut, o.sideout_n},
                          std::pair{ScoringSystem::RallyPoint, o.rallypoint_n}}) {
      const Moments m = limit_moments(sys, likely, dir, n);
      row.insert(row.end(), {m.mean, std::sqrt(m.variance)});
    }
    for (auto [sys, n] : {std::pair{ScoringSystem::SideOut, o.sideout_n},
                          std::pair{ScoringSystem::RallyPoint, o.rallypoint_n}}) {
      for (Player w : {Player::A, Player::B}) {
        const Moments m = limit_moments(sys, w, dir, n);
        row.insert(row.end(), {m.mean, std::sqrt(m.variance)});
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

struct SimulateOpts {
  std::size_t J = 1000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string records;
  std::string grid;
};

std::vector<Cell> report_cells(const RallyProbs& probs, const EstimatorReport& r) {
  std::vector<Cell> row{probs.pa,
                        probs.pb,
                        static_cast<long long>(r.J),
                        static_cast<long long>(r.wins[0]),
                        static_cast<long long>(r.wins[1]),
                        r.win_prob[0],
                        r.win_prob[1],
                        r.overall.mean,
                        std::sqrt(r.overall.variance)};
  for (const auto& m : r.given_winner) {
    row.push_back(m ? Cell{m->mean} : Cell{std::monostate{}});
    row.push_back(m ? Cell{std::sqrt(m->variance)} : Cell{std::monostate{}});
  }
  return row;
}

OutputTable cmd_simulate(const GameOpts& g, const SimulateOpts& s, unsigned threads) {
  const GameConfig config = g.config();
  const SeedSpec seed{s.seed, s.stream};
  OutputTable t({"p_a", "p_b", "J", "J_A", "J_B", "win_A", "win_B", "mean", "sd", "mean_Awin",
                 "sd_Awin", "mean_Bwin", "sd_Bwin"});
  if (s.J < 1) throw DomainError("J must be >= 1");
  if (!s.grid.empty()) {
    if (!s.records.empty()) throw UsageError("--records needs a single parameter point");
    std::vector<RallyProbs> pts;
    for (double p : parse_grid(s.grid)) pts.push_back({p, 1.0 - p});
    const auto reports = sweep(pts, config, s.J, seed, threads);
    for (std::size_t i = 0; i < pts.size(); ++i) t.add_row(report_cells(pts[i], reports[i]));
    return t;
  }
  const RallyProbs probs = g.probs();
  const auto games = simulate_games(probs, config, s.J, seed, threads);
  if (!s.records.empty()) {
    std::ofstream f(s.records);
    if (!f) throw IoError("cannot open '" + s.records + "' for writing");
    std::vector<GameRecord> recs;
    recs.reserve(games.size());
    for (const SimResult& r : games) recs.push_back({r.first_server, r.score, r.duration});
    write_records(f, recs);
    if (!f) throw IoError("write to '" + s.records + "' failed");
  }
  t.add_row(report_cells(probs, summarize(games)));
  return t;
}

struct EstimateOpts {
  std::string input;
  std::string mode = "score-duration";
  std::string model = "server";
};

OutputTable cmd_estimate(const EstimateOpts& e) {
  const auto records = read_records_file(e.input);
  if (records.empty()) throw DomainError("no records in '" + e.input + "'");
  const FitMode mode = e.mode == "score" ? FitMode::ScoreOnly : FitMode::ScoreDuration;
  const FitModel model = e.model == "noserver" ? FitModel::NoServer : FitModel::Server;
  const FitResult r = fit(records, mode, model);
  OutputTable t({"records", "mode", "model", "p_a", "p_b", "loglik", "converged", "boundary",
                 "evaluations"});
  t.add_row({static_cast<long long>(records.size()), e.mode, e.model, r.pa, r.pb, r.loglik,
             static_cast<long long>(r.converged), static_cast<long long>(r.boundary),
             static_cast<long long>(r.evaluations)});
  return t;
}

struct MatchOpts {
  int games_to_win = 2;
  std::string rule = "winner";
  std::string what = "summary";
  double epsilon = 1e-12;
  int matches = 1;
  std::string levels = "0.5,0.9";
  std::string quantile_mode = "standard";

  void attach(CLI::App* app) {
    app->add_option("--games-to-win", games_to_win, "games needed to win the match");
    app->add_option("--rule", rule, "first-server rule after game 1")
        ->check(CLI::IsMember({"winner", "alternate", "coin"}));
    app->add_option("--epsilon", epsilon, "truncation budget for duration PMFs");
  }
  MatchConfig config() const { return {games_to_win, parse_server_rule(rule)}; }
};

OutputTable cmd_match(const GameOpts& g, const MatchOpts& m) {
  const RallyProbs probs = g.probs();
  const GameConfig game = g.config();
  const MatchConfig match = m.config();
  const DurationPMF pmf = match_duration_pmf(probs, game, match, m.epsilon);
  if (m.what == "pmf") return pmf_table(pmf);
  OutputTable t({"rule", "games_to_win", "win_A", "win_B", "mean", "sd", "truncation_bound"});
  t.add_row({std::string(to_string(match.rule)), static_cast<long long>(match.games_to_win),
             match_win_prob(Player::A, probs, game, match), match_win_prob(Player::B, probs, game, match),
             match_expected_duration(probs, game, match), std::sqrt(pmf.variance()),
             pmf.truncation_bound()});
  return t;
}

OutputTable cmd_plan(const GameOpts& g, const MatchOpts& m) {
  if (m.matches < 1) throw DomainError("--matches must be >= 1");
  const DurationPMF one = match_duration_pmf(g.probs(), g.config(), m.config(), m.epsilon / m.matches);
  const DurationPMF total = total_duration_pmf(one, m.matches);
  OutputTable t({"matches", "level", "quantile", "mean", "truncation_bound"});
  const QuantileMode mode = parse_quantile_mode(m.quantile_mode);
  for (double level : parse_list(m.levels, "levels")) {
    t.add_row({static_cast<long long>(m.matches), level, quantile(total, level, mode), total.mean(),
               total.truncation_bound()});
  }
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated analysis of side-out and rally-point games", "rallyctl"};
  app.require_subcommand(1);
  std::string format = "csv";
  std::string out_path;
  unsigned threads = 0;
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "write the table here instead of stdout");
  app.add_option("--threads", threads, "worker threads for simulation (0 = all cores)");
  app.fallthrough();

  std::function<OutputTable()> action;

  GameOpts score_game;
  auto* score = app.add_subcommand("score-dist", "terminal score distribution");
  score_game.attach(score);
  score->callback([&] { action = [&] { return cmd_score_dist(score_game); }; });

  GameOpts dur_game;
  DurationOpts dur;
  auto* duration = app.add_subcommand("duration", "number of rallies: moments, PMF or quantiles");
  dur_game.attach(duration);
  duration->add_option("--what", dur.what, "moments, pmf or quantiles")
      ->check(CLI::IsMember({"moments", "pmf", "quantiles"}));
  duration->add_option("--score", dur.score, "condition on a terminal score alpha,beta,last");
  duration->add_option("--winner", dur.winner, "condition on the winner")
      ->check(CLI::IsMember({"A", "B", "a", "b"}));
  duration->add_flag("--by-score", dur.by_score, "moments for every terminal score");
  duration->add_option("--levels", dur.levels, "comma-separated quantile levels");
  duration->add_option("--quantile-mode", dur.quantile_mode, "standard or interpolated")
      ->check(CLI::IsMember({"standard", "interpolated"}));
  duration->add_option("--epsilon", dur.epsilon, "truncation budget for PMFs");
  duration->callback([&] { action = [&] { return cmd_duration(dur_game, dur); }; });

  CompareOpts cmp;
  auto* compare = app.add_subcommand("compare", "side-out versus rally-point in the no-server model");
  compare->add_option("--sideout-n", cmp.sideout_n, "side-out target score");
  compare->add_option("--rallypoint-n", cmp.rallypoint_n, "rally-point target score");
  compare->add_option("--p-grid", cmp.grid, "start:stop:step or comma list of p");
  compare->add_option("--tune", cmp.tune, "lo:hi range of rally-point n for the tuning table");
  compare->callback([&] { action = [&] { return cmd_compare(cmp); }; });

  GameOpts sim_game;
  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
  sim_game.attach(simulate);
  simulate->add_option("--J", sim.J, "replications");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--stream", sim.stream, "stream index");
  simulate->add_option("--records", sim.records, "write simulated games as JSON lines");
  simulate->add_option("--p-grid", sim.grid, "sweep the no-server model over p");
  simulate->callback([&] { action = [&] { return cmd_simulate(sim_game, sim, threads); }; });

  EstimateOpts est;
  auto* estimate = app.add_subcommand("estimate", "maximum-likelihood fit from game records");
  estimate->add_option("--input", est.input, "JSON-lines game records")->required();
  estimate->add_option("--mode", est.mode, "score or score-duration")
      ->check(CLI::IsMember({"score", "score-duration"}));
  estimate->add_option("--model", est.model, "server or noserver")
      ->check(CLI::IsMember({"server", "noserver"}));
  estimate->callback([&] { action = [&] { return cmd_estimate(est); }; });

  GameOpts match_game;
  MatchOpts mopt;
  auto* match = app.add_subcommand("match", "match-winning probability and duration");
  match_game.attach(match);
  mopt.attach(match);
  match->add_option("--what", mopt.what, "summary or pmf")->check(CLI::IsMember({"summary", "pmf"}));
  match->callback([&] { action = [&] { return cmd_match(match_game, mopt); }; });

  GameOpts plan_game;
  MatchOpts popt;
  auto* plan = app.add_subcommand("plan", "quantiles of the total rallies over several matches");
  plan_game.attach(plan);
  popt.attach(plan);
  plan->add_option("--matches", popt.matches, "number of independent matches");
  plan->add_option("--levels", popt.levels, "comma-separated quantile levels");
  plan->add_option("--quantile-mode", popt.quantile_mode, "standard or interpolated")
      ->check(CLI::IsMember({"standard", "interpolated"}));
  plan->callback([&] { action = [&] { return cmd_plan(plan_game, popt); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const OutputTable table = action();
    const TableFormat fmt = parse_format(format);
    if (out_path.empty()) {
      table.write(out, fmt);
    } else {
      std::ofstream f(out_path);
      if (!f) throw IoError("cannot open '" + out_path + "' for writing");
      table.write(f, fmt);
      if (!f) throw IoError("write to '" + out_path + "' failed");
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace rally::cli
