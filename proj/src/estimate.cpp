#include "rally/estimate.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>

#include "rally/duration.hpp"

namespace rally {

namespace {

// A record seen from its first server: `a` points for the server, `b` for
// the receiver, and delta = 1 when the receiver scored last.
struct Compiled {
  bool server_is_a;
  int a;
  int b;
  int delta;
  std::vector<double> poly;  // score-only: coefficients in q
  long long j = -1;          // score-duration: exchange index
  double log_h = 0.0;
};

Compiled compile(const GameRecord& rec, std::size_t idx, bool need_duration) {
  const TerminalScore& s = rec.score;
  if (s.alpha < 0 || s.beta < 0) throw InfeasibleData(idx, "negative score");
  const int win = s.points(s.last_scorer);
  const int lose = s.points(other(s.last_scorer));
  if (win < 1 || win <= lose) {
    throw InfeasibleData(idx, "last scorer must finish with strictly more points");
  }
  const TerminalScore v = rec.first_server == Player::A ? s : s.swapped();
  Compiled c{rec.first_server == Player::A, v.alpha, v.beta, v.last_scorer == Player::B ? 1 : 0,
             {}, -1, 0.0};
  const GammaBounds g = GammaBounds::of(v.alpha, v.beta);
  if (c.delta == 0) {
    c.poly.assign(static_cast<std::size_t>(g.gamma1 + 1), 0.0);
    for (int r = g.gamma0; r <= g.gamma1; ++r) {
      c.poly[static_cast<std::size_t>(r)] = binom(v.alpha, r) * binom(v.beta - 1, r - 1);
    }
  } else {
    c.poly.assign(static_cast<std::size_t>(std::max(g.gamma2 + 1, 0)), 0.0);
    for (int r = 1; r <= g.gamma2 + 1; ++r) {
      c.poly[static_cast<std::size_t>(r - 1)] = binom(v.alpha, r - 1) * binom(v.beta - 1, r - 1);
    }
  }
  if (need_duration) {
    if (!rec.duration) throw InfeasibleData(idx, "duration missing");
    const long long extra = *rec.duration - v.alpha - v.beta - c.delta;
    if (extra < 0) throw InfeasibleData(idx, "duration shorter than the points scored");
    if (extra % 2 != 0) throw InfeasibleData(idx, "duration has the wrong parity for this score");
    c.j = extra / 2;
    if (c.j > std::numeric_limits<int>::max()) throw InfeasibleData(idx, "duration too large");
    const double h = h_coefficient(v.alpha, v.beta, v.last_scorer, static_cast<int>(c.j));
    if (!(h > 0.0)) throw InfeasibleData(idx, "duration has zero probability for this score");
    c.log_h = std::log(h);
  }
  return c;
}

std::vector<Compiled> compile_all(std::span<const GameRecord> records, bool need_duration) {
  if (records.empty()) throw DomainError("no records");
  std::vector<Compiled> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.push_back(compile(records[i], i, need_duration));
  }
  return out;
}

void check_params(double pa, double pb) {
  if (!(pa > 0.0 && pa < 1.0 && pb > 0.0 && pb < 1.0)) {
    throw DomainError("likelihood parameters must lie in (0,1)");
  }
}

double horner(const std::vector<double>& poly, double x) {
  double acc = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double eval_score(const std::vector<Compiled>& cs, double pa, double pb) {
  const double q = (1.0 - pa) * (1.0 - pb);
  const double log1mq = std::log1p(-q);
  double total = 0.0;
  for (const Compiled& c : cs) {
    const double ps = c.server_is_a ? pa : pb;
    const double pr = c.server_is_a ? pb : pa;
    total += c.a * std::log(ps) + c.b * std::log(pr) - (c.a + c.b) * log1mq +
             std::log(horner(c.poly, q));
    if (c.delta) total += std::log1p(-ps);
  }
  return total;
}

// The joint law factors as p_s^a p_r^b q_s^delta q^j H(j), so the whole
// sample reduces to four exponents and a constant.
struct Sufficient {
  double n_pa = 0, n_pb = 0, n_qa = 0, n_qb = 0, constant = 0;
};

Sufficient sufficient(const std::vector<Compiled>& cs) {
  Sufficient s;
  for (const Compiled& c : cs) {
    const double j = static_cast<double>(c.j);
    if (c.server_is_a) {
      s.n_pa += c.a;
      s.n_pb += c.b;
      s.n_qa += c.delta;
    } else {
      s.n_pb += c.a;
      s.n_pa += c.b;
      s.n_qb += c.delta;
    }
    s.n_qa += j;
    s.n_qb += j;
    s.constant += c.log_h;
  }
  return s;
}

double xlog(double n, double p) { return n == 0.0 ? 0.0 : n * std::log(p); }

double eval_sufficient(const Sufficient& s, double pa, double pb) {
  return xlog(s.n_pa, pa) + xlog(s.n_pb, pb) + xlog(s.n_qa, 1.0 - pa) + xlog(s.n_qb, 1.0 - pb) +
         s.constant;
}

struct Objective {
  const std::vector<Compiled>* compiled = nullptr;
  Sufficient suff;
  FitMode mode;
  FitModel model;
  double delta;
  // A serve probability the data says nothing about; held at .5.
  std::optional<double> fixed_pa{}, fixed_pb{};
  int evaluations = 0;

  // Folds the real line onto [delta, 1 - delta]; smooth at the edges, so
  // boundary maxima are ordinary stationary points in x.
  double to_prob(double x) const { return delta + (1.0 - 2.0 * delta) * 0.5 * (1.0 + std::sin(x)); }
  double from_prob(double p) const { return std::asin(2.0 * (p - delta) / (1.0 - 2.0 * delta) - 1.0); }
  std::pair<double, double> params(const gsl_vector* x) const {
    std::size_t i = 0;
    const double pa = fixed_pa ? *fixed_pa : to_prob(gsl_vector_get(x, i++));
    const double pb = model == FitModel::NoServer ? 1.0 - pa
                      : fixed_pb                  ? *fixed_pb
                                                  : to_prob(gsl_vector_get(x, i++));
    return {pa, pb};
  }
  double loglik(double pa, double pb) const {
    return mode == FitMode::ScoreOnly ? eval_score(*compiled, pa, pb)
                                      : eval_sufficient(suff, pa, pb);
  }
};

double negative_loglik(const gsl_vector* x, void* data) {
  auto* obj = static_cast<Objective*>(data);
  ++obj->evaluations;
  const auto [pa, pb] = obj->params(x);
  const double ll = obj->loglik(pa, pb);
  return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
}

struct StartResult {
  double pa, pb, loglik;
  bool converged;
  int evaluations;
};

StartResult run_start(Objective& obj, const std::vector<double>& start, const FitOptions& opt) {
  const std::size_t dim = start.size();
  gsl_multimin_function f{&negative_loglik, dim, &obj};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, obj.from_prob(start[i]));
    gsl_vector_set(step, i, 0.5);
  }
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  obj.evaluations = 0;
  gsl_multimin_fminimizer_set(m, &f, x, step);
  bool converged = false;
  while (obj.evaluations < opt.max_evaluations) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), opt.tolerance) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  const auto [pa, pb] = obj.params(gsl_multimin_fminimizer_x(m));
  StartResult r{pa, pb, obj.loglik(pa, pb), converged, obj.evaluations};
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return r;
}

}  // namespace

double loglik_score(std::span<const GameRecord> records, double pa, double pb) {
  check_params(pa, pb);
  return eval_score(compile_all(records, false), pa, pb);
}

double loglik_score_duration(std::span<const GameRecord> records, double pa, double pb) {
  check_params(pa, pb);
  return eval_sufficient(sufficient(compile_all(records, true)), pa, pb);
}

FitResult fit(std::span<const GameRecord> records, FitMode mode, FitModel model,
              const FitOptions& options) {
  if (!(options.delta > 0.0 && options.delta < 0.25)) throw DomainError("delta must lie in (0, .25)");
  const auto compiled = compile_all(records, mode == FitMode::ScoreDuration);
  Objective obj{&compiled, {}, mode, model, options.delta};
  if (mode == FitMode::ScoreDuration) {
    obj.suff = sufficient(compiled);
    // The joint likelihood is flat in p_s when no rally was served by s.
    if (model == FitModel::Server) {
      if (obj.suff.n_pa + obj.suff.n_qa == 0.0) obj.fixed_pa = 0.5;
      if (obj.suff.n_pb + obj.suff.n_qb == 0.0) obj.fixed_pb = 0.5;
    }
  }

  gsl_set_error_handler_off();
  const std::vector<double> grid{0.25, 0.5, 0.75};
  std::vector<std::vector<double>> starts;
  const std::size_t dim = model == FitModel::NoServer ? 1 : 2 - obj.fixed_pa.has_value() - obj.fixed_pb.has_value();
  for (double a : grid) {
    if (dim == 1) {
      starts.push_back({a});
    } else {
      for (double b : grid) starts.push_back({a, b});
    }
  }

  std::optional<StartResult> best;
  int total_evals = 0;
  for (const auto& s : starts) {
    const StartResult r = run_start(obj, s, options);
    total_evals += r.evaluations;
    if (!r.converged) continue;
    if (!best || r.loglik > best->loglik) best = r;
  }
  if (!best) {
    throw NonConvergence("no start converged within " + std::to_string(options.max_evaluations) +
                         " evaluations");
  }
  FitResult out;
  out.pa = best->pa;
  out.pb = best->pb;
  out.loglik = best->loglik;
  out.converged = true;
  out.evaluations = total_evals;
  auto pinned = [&](double p) { return p <= 2.0 * options.delta || p >= 1.0 - 2.0 * options.delta; };
  out.boundary = pinned(out.pa) || pinned(out.pb);
  return out;
}

std::vector<GameRecord> swap_labels(std::span<const GameRecord> records) {
  std::vector<GameRecord> out;
  out.reserve(records.size());
  for (const GameRecord& r : records) {
    out.push_back({other(r.first_server), r.score.swapped(), r.duration});
  }
  return out;
}

}  // namespace rally
