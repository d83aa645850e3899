// Acceptance run: one PASS/FAIL line per criterion, each timed against its
// runtime limit. Reports for the determinism check land in
// ./acceptance_reports.

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/cuboctahedron.hpp"
#include "oracles/exact.hpp"
#include "oracles/expr_eval.hpp"
#include "oracles/polynomial.hpp"
#include "oracles/random_assembly.hpp"
#include "oracles/random_lp.hpp"
#include "oracles/rational_lp.hpp"
#include "oracles/rotation_systems.hpp"
#include "oracles/voronoi.hpp"
#include "rigor/assembly.hpp"
#include "rigor/assembly_io.hpp"
#include "rigor/evaluator.hpp"
#include "rigor/geom.hpp"
#include "rigor/graphgen.hpp"
#include "rigor/lp.hpp"
#include "rigor/prover.hpp"
#include "rigor/report.hpp"

using namespace rigor;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_int_distribution<int> scale(-8, 8);
  double a = std::ldexp(u(rng), scale(rng)), b = std::ldexp(u(rng), scale(rng));
  if (a > b) std::swap(a, b);
  return Interval(a, b);
}

double sample(std::mt19937_64& rng, const Interval& a) {
  const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::clamp(a.lo() + t * (a.hi() - a.lo()), a.lo(), a.hi());
}

Outcome containment_fuzz() {
  std::mt19937_64 rng(101);
  long violations = 0, checks = 0;
  auto check = [&](bool ok) {
    ++checks;
    violations += !ok;
  };
  for (int k = 0; k < 100000; ++k) {
    const Interval a = random_interval(rng), b = random_interval(rng);
    const double x = sample(rng, a), y = sample(rng, b);
    const mpq_class ex = oracle::exact(x), ey = oracle::exact(y);
    check(oracle::contains(a + b, ex + ey));
    check(oracle::contains(a - b, ex - ey));
    check(oracle::contains(a * b, ex * ey));
    if (!b.contains_zero()) check(oracle::contains(a / b, ex / ey));
    check(oracle::contains(sqr(a), ex * ex));
    check(oracle::contains(-a, mpq_class(-ex)));
    check(oracle::contains(pow_int(a, 3), ex * ex * ex));
    check(oracle::contains(atan_interval(a), oracle::big_atan(x)));
    if (a.hi() >= 0.0) {
      const double z = std::max(x, 0.0);
      check(oracle::contains(sqrt_interval(a).value, oracle::big_sqrt(z)));
    }
  }
  return {violations == 0, std::to_string(checks) + " containments over 1e5 samples, " + std::to_string(violations) +
                               " violations"};
}

// ---------------------------------------------------------------- 2

bool near(const Interval& iv, double v, double tol) { return iv.lo() - tol <= v && v <= iv.hi() + tol; }

Outcome derivative_soundness() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> ar(1, 6);
  int checked = 0, skipped = 0;
  long grad_bad = 0, hess_bad = 0;
  while (checked < 1000) {
    const int n = ar(rng);
    const Expr e = parse_expr(oracle::random_expr_text(rng, n, 6), n);
    CompileOptions opts;
    opts.max_depth = 100000;
    Evaluator ev;
    try {
      ev = compile(e, n, opts);
    } catch (const CompileError&) {
      ++skipped;
      continue;
    }
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    std::vector<Interval> pb;
    for (double v : x) pb.emplace_back(v);
    const auto g = ev.germ(pb);
    const auto h = ev.hessian(pb);
    const double fx = oracle::eval(e, x);
    const double scale = 1 + std::fabs(fx);
    for (int i = 0; i < n; ++i) {
      const double s = 1e-5;
      auto xp = x, xm = x;
      xp[i] += s;
      xm[i] -= s;
      const double fd = (oracle::eval(e, xp) - oracle::eval(e, xm)) / (2 * s);
      grad_bad += !near(g.Df[i], fd, 1e-6 * scale);
      for (int j = 0; j < n; ++j) {
        auto fd2 = [&](double t) {
          auto pp = x, pm = x, mp = x, mm = x;
          pp[i] += t, pp[j] += t;
          pm[i] += t, pm[j] -= t;
          mp[i] -= t, mp[j] += t;
          mm[i] -= t, mm[j] -= t;
          return (oracle::eval(e, pp) - oracle::eval(e, pm) - oracle::eval(e, mp) + oracle::eval(e, mm)) / (4 * t * t);
        };
        // Richardson extrapolation cancels the t^2 error term.
        const double t = 1e-3;
        const double est = (4 * fd2(t / 2) - fd2(t)) / 3;
        hess_bad += !near(h[i * n + j], est, 1e-4 * scale);
      }
    }
    ++checked;
  }
  return {grad_bad == 0 && hess_bad == 0,
          std::to_string(checked) + " expressions (arity 1-6, depth 6), " + std::to_string(grad_bad) +
              " gradient and " + std::to_string(hess_bad) + " Hessian mismatches, " + std::to_string(skipped) +
              " skipped at compile"};
}

// ---------------------------------------------------------------- 3

struct PolyTask {
  oracle::Polynomial poly;  // includes the shift
  std::vector<std::pair<double, double>> box;
};

std::vector<PolyTask> polynomial_tasks(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> ar(1, 3), corner(-8, 8), shift(-20, 30);
  std::vector<PolyTask> out;
  for (int k = 0; k < 200; ++k) {
    PolyTask t;
    const int n = ar(rng);
    t.poly = oracle::random_polynomial(rng, n, 5, 3);
    for (int i = 0; i < n; ++i) {
      int a = corner(rng), b = corner(rng);
      if (a == b) b = a + 1;
      if (a > b) std::swap(a, b);
      t.box.emplace_back(a / 4.0, b / 4.0);
    }
    // Centre the maximum near zero: sampled max plus a shift of −0.31..0.47.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double best = -INFINITY;
    std::vector<double> x(n);
    for (int s = 0; s < 400; ++s) {
      for (int i = 0; i < n; ++i) x[i] = t.box[i].first + unit(rng) * (t.box[i].second - t.box[i].first);
      best = std::max(best, t.poly.eval(x));
    }
    const long c = static_cast<long>(std::ceil(best * 64)) + shift(rng);
    t.poly.terms.push_back({-c, 64, std::vector<int>(n, 0)});
    out.push_back(t);
  }
  return out;
}

ProofTask as_task(const PolyTask& t) {
  ProofTask task;
  const int n = t.poly.arity;
  task.expr = parse_expr(t.poly.text(), n);
  std::vector<Interval> dims;
  for (const auto& [lo, hi] : t.box) dims.emplace_back(lo, hi);
  task.domain = Box(dims);
  return task;
}

ProverConfig poly_config() {
  ProverConfig cfg;
  cfg.max_cells = 100000;
  return cfg;
}

std::string prover_report(const std::vector<PolyTask>& tasks, const std::vector<ProofReport>& reports,
                          std::uint64_t seed) {
  RunManifest m;
  m.subcommand = "acceptance prover-soundness";
  m.seed = seed;
  m.config = {{"tasks", tasks.size()}, {"max_cells", poly_config().max_cells}};
  Json res = Json::array();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Json j = encode(reports[i], 20);
    j["f"] = tasks[i].poly.text();
    res.push_back(j);
  }
  return render_report(m, res);
}

/// Exact check that p < 0 on the grid with `per_axis` points per axis.
long grid_violations(const PolyTask& t, int per_axis) {
  const int n = t.poly.arity;
  int max_exp = 0;
  for (const auto& m : t.poly.terms) {
    for (int e : m.exps) max_exp = std::max(max_exp, e);
  }
  // powers[i][g][k] = x_i(g)^k
  std::vector<std::vector<std::vector<double>>> powers(n);
  std::vector<std::vector<double>> coords(n);
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < per_axis; ++g) {
      const double lo = t.box[i].first, hi = t.box[i].second;
      const double x = g + 1 == per_axis ? hi : lo + (hi - lo) * g / (per_axis - 1);
      coords[i].push_back(x);
      std::vector<double> pw(max_exp + 1, 1.0);
      for (int k = 1; k <= max_exp; ++k) pw[k] = pw[k - 1] * x;
      powers[i].push_back(pw);
    }
  }
  long bad = 0;
  std::vector<int> idx(n, 0);
  for (;;) {
    double s = 0.0;
    for (const auto& m : t.poly.terms) {
      double v = static_cast<double>(m.num) / m.den;
      for (int i = 0; i < n; ++i) v *= powers[i][idx[i]][m.exps[i]];
      s += v;
    }
    if (s > -1e-9) {
      std::vector<mpq_class> q;
      for (int i = 0; i < n; ++i) q.push_back(oracle::exact(coords[i][idx[i]]));
      bad += t.poly.eval_exact(q) >= 0;
    }
    int i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) break;
  }
  return bad;
}

std::string g_report3;

Outcome prover_soundness() {
  const std::uint64_t seed = 303;
  const auto tasks = polynomial_tasks(seed);
  std::vector<ProofReport> reports;
  int proven = 0;
  long unsound = 0;
  for (const auto& t : tasks) {
    reports.push_back(prove_negative(as_task(t), poly_config()));
    if (reports.back().status != ProofStatus::Proven) continue;
    ++proven;
    const int n = t.poly.arity;
    const int per_axis = n == 1 ? 1000000 : n == 2 ? 1000 : 100;
    unsound += grid_violations(t, per_axis) > 0;
  }
  g_report3 = prover_report(tasks, reports, seed);
  return {unsound == 0 && proven > 0, std::to_string(proven) + " of 200 tasks Proven, each grid-checked at 1e6 points; " +
                                          std::to_string(unsound) + " unsound"};
}

// ---------------------------------------------------------------- 4

ProofTask text_task(const std::string& f, std::vector<Interval> dom) {
  ProofTask t;
  t.expr = parse_expr(f, static_cast<int>(dom.size()));
  t.domain = Box(std::move(dom));
  return t;
}

Outcome prover_capability() {
  const auto six = prove_negative(text_task("x0*x0+x1*x1+x2*x2+x3*x3+x4*x4+x5*x5 - 7", std::vector<Interval>(6, Interval(0, 1))));
  const auto two = prove_negative(text_task("x0*x0 - 2", {Interval(-1, 1)}));
  const auto diag = prove_negative(text_task("x0*x0 - 2*x0*x1 + x1*x1", {Interval(0, 1), Interval(0, 1)}));
  const bool ok = six.status == ProofStatus::Proven && two.status == ProofStatus::Proven &&
                  diag.status == ProofStatus::Undecided;
  return {ok, std::string("six squares ") + to_string(six.status) + ", x^2-2 " + to_string(two.status) +
                  ", (x-y)^2 " + to_string(diag.status)};
}

// ---------------------------------------------------------------- 5

Outcome lp_soundness() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> noise(-0.1, 0.1);
  std::vector<double> gaps;
  int unsound = 0, fuzz_unsound = 0;
  for (int k = 0; k < 500; ++k) {
    const auto lp = oracle::random_lp(rng, 20, 20);
    const auto opt = oracle::solve_exact(lp.exact);
    if (!opt) return {false, "oracle failed on a feasible LP"};
    auto s = solve_approx(lp.problem);
    const auto cert = certify_upper_bound(lp.problem, clamp_dual(lp.problem, s.y, s.z));
    unsound += !(mpq_class(cert.bound) >= opt->value);
    const double o = opt->value.get_d();
    gaps.push_back((cert.bound - o) / (1 + std::fabs(o)));
    for (double& v : s.y) v += noise(rng);
    for (double& v : s.z) v += noise(rng);
    const auto fuzzed = certify_upper_bound(lp.problem, clamp_dual(lp.problem, s.y, s.z));
    fuzz_unsound += !(mpq_class(fuzzed.bound) >= opt->value);
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  const double median = gaps[gaps.size() / 2];
  return {unsound == 0 && fuzz_unsound == 0 && median <= 1e-6,
          "500 LPs: " + std::to_string(unsound) + " unsound, " + std::to_string(fuzz_unsound) +
              " unsound after 0.1 dual noise, median relative gap " + fmt("%.3g", median)};
}

// ---------------------------------------------------------------- 6

Outcome augmentation() {
  std::mt19937_64 rng(606);
  int good = 0;
  for (int k = 0; k < 100; ++k) {
    const auto lp = oracle::random_lp(rng, 8, 8, true);
    const auto opt = oracle::solve_exact(lp.exact);
    if (!opt) return {false, "oracle failed"};
    const mpq_class K = opt->value - mpq_class(1 + k % 5, 3);
    // Augmented LP rebuilt from the exact data; the library's rows must enclose it.
    oracle::RationalLp a;
    const std::size_t n = lp.exact.c.size();
    a.c = lp.exact.c;
    a.c.push_back(K);
    a.lo = lp.exact.lo;
    a.lo.push_back(0);
    a.hi = lp.exact.hi;
    a.hi.push_back(1);
    for (std::size_t i = 0; i < lp.exact.Aineq.size(); ++i) {
      auto row = lp.exact.Aineq[i];
      row.push_back(lp.exact.bineq[i]);
      a.Aineq.push_back(row);
      a.bineq.push_back(lp.exact.bineq[i]);
    }
    for (std::size_t i = 0; i < lp.exact.Aeq.size(); ++i) {
      auto row = lp.exact.Aeq[i];
      row.push_back(lp.exact.beq[i]);
      a.Aeq.push_back(row);
      a.beq.push_back(lp.exact.beq[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      oracle::QVec up(n + 1, 0), down(n + 1, 0);
      up[j] = 1;
      up[n] = lp.exact.hi[j];
      down[j] = -1;
      down[n] = -lp.exact.lo[j];
      a.Aineq.push_back(up);
      a.bineq.push_back(lp.exact.hi[j]);
      a.Aineq.push_back(down);
      a.bineq.push_back(-lp.exact.lo[j]);
    }
    const auto lib = augment_with_t(lp.problem, oracle::enclose(K));
    bool enclosed = lib.Aineq.size() == a.Aineq.size() + 2 && lib.Aeq.size() == a.Aeq.size();
    const std::size_t m = lp.exact.Aineq.size();
    for (std::size_t i = 0; enclosed && i < m; ++i) {
      for (std::size_t j = 0; j <= n; ++j) enclosed = enclosed && oracle::contains(lib.Aineq[i][j], a.Aineq[i][j]);
      enclosed = enclosed && oracle::contains(lib.bineq[i], a.bineq[i]);
    }
    // Bound rows use the endpoints of the variable enclosures.
    for (std::size_t j = 0; enclosed && j < n; ++j) {
      enclosed = lib.Aineq[m + 2 * j][n] == Interval(lp.problem.var_bounds[j].hi()) &&
                 lib.Aineq[m + 2 * j + 1][n] == Interval(-lp.problem.var_bounds[j].lo());
    }
    for (std::size_t i = 0; enclosed && i < a.Aeq.size(); ++i) {
      for (std::size_t j = 0; j <= n; ++j) enclosed = enclosed && oracle::contains(lib.Aeq[i][j], a.Aeq[i][j]);
    }
    const auto aug = oracle::solve_exact(a);
    good += enclosed && aug && aug->value == opt->value && aug->x[n] == 0;
  }
  return {good == 100, std::to_string(good) + " of 100 augmented optima equal M with t = 0"};
}

// ---------------------------------------------------------------- 7

AssemblyProblem toy() {
  AssemblyProblem p;
  p.domains.push_back({"D", {"x"}, Box({Interval(0, 1)}), {parse_expr("x0 - x0*x0", 1)}});
  p.A = {{"1"}};
  p.b = {"1"};
  p.c = {"1"};
  return p;
}

struct DualityRun {
  bool toy_certified = false;
  bool toy_refuted = false;
  int certified = 0;
  std::vector<oracle::RandomAssembly> problems;
  std::vector<std::string> bounds;  // certified M per problem, empty if none
  std::string report;
};

DualityRun duality_run(std::uint64_t seed) {
  DualityRun run;
  Json res;
  const auto p = toy();
  const auto cert = fit_dual(p, {"1"}, "1", default_test_points(p, {}));
  const auto v = verify_duality(p, cert);
  run.toy_certified = v.certified;
  res["toy_M1"] = encode(v);
  try {
    fit_dual(p, {"1"}, "0.9", default_test_points(p, {}));
    res["toy_M0.9"] = "candidate found";
  } catch (const NoCandidate& e) {
    run.toy_refuted = true;
    res["toy_M0.9"] = std::string("no candidate: ") + e.what();
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Json trials = Json::array();
  for (int trial = 0; trial < 50; ++trial) {
    const auto ra = oracle::random_assembly(rng);
    run.problems.push_back(ra);
    run.bounds.emplace_back();
    const std::size_t n = ra.problem.num_globals();
    std::vector<double> x(n), best_x(n, 0.0);
    double best = ra.feasible(best_x) ? ra.value(best_x) : -INFINITY;
    for (int s = 0; s < 2000; ++s) {
      for (auto& e : x) e = u(rng);
      if (ra.feasible(x) && ra.value(x) > best) best = ra.value(x), best_x = x;
    }
    Json tj = {{"trial", trial}, {"certified", false}};
    if (std::isfinite(best)) {
      std::vector<std::string> xs;
      for (double e : best_x) xs.push_back(format_double(e));
      for (double slack : {0.0, 0.25, 1.0}) {
        const std::string M = format_double(best + slack);
        try {
          const auto c = fit_dual(ra.problem, xs, M, default_test_points(ra.problem, {}));
          ProverConfig cfg;
          cfg.max_cells = 20000;
          if (!verify_duality(ra.problem, c, cfg).certified) continue;
          tj = {{"trial", trial}, {"certified", true}, {"M", M}, {"t0", c.t0}};
          run.bounds.back() = M;
          ++run.certified;
          break;
        } catch (const NoCandidate&) {
        }
      }
    }
    trials.push_back(tj);
  }
  res["random"] = trials;
  RunManifest m;
  m.subcommand = "acceptance nonlinear-duality";
  m.seed = seed;
  run.report = render_report(m, res);
  return run;
}

std::string g_report7;

Outcome nonlinear_duality() {
  const DualityRun run = duality_run(707);
  g_report7 = run.report;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int beaten = 0;
  for (std::size_t k = 0; k < run.problems.size(); ++k) {
    if (run.bounds[k].empty()) continue;
    const auto& ra = run.problems[k];
    const double bound = std::stod(run.bounds[k]);
    std::mt19937_64 brute(1000 + k);
    std::vector<double> x(ra.problem.num_globals());
    double seen = -INFINITY;
    for (int s = 0; s < 1000000; ++s) {
      for (auto& e : x) e = u(brute);
      if (ra.feasible(x)) seen = std::max(seen, ra.value(x));
    }
    beaten += seen > bound;
  }
  return {run.toy_certified && run.toy_refuted && beaten == 0 && run.certified > 0,
          std::string("toy M=1 ") + (run.toy_certified ? "certified" : "NOT certified") + ", M=0.9 " +
              (run.toy_refuted ? "refused" : "NOT refused") + "; " + std::to_string(run.certified) +
              " of 50 random problems certified, " + std::to_string(beaten) + " beaten by 1e6-point brute force"};
}

// ---------------------------------------------------------------- 8

Outcome voronoi() {
  const auto p = read_assembly_problem_file(RIGOR_DATA_DIR "/voronoi6.asm");
  const auto stored = read_certificate_file(RIGOR_DATA_DIR "/voronoi6.cert");
  if (stored.problem_digest != assembly_digest(p)) return {false, "certificate digest mismatch"};
  const auto v = verify_duality(p, stored.certificate);
  const double M = std::stod(stored.certificate.M);
  const double two_pi = 2 * std::acos(-1.0);
  long feasible = 0, above = 0;
  for (int ys = 0; ys < 64; ++ys) {
    double y[6];
    for (int i = 0; i < 6; ++i) y[i] = (ys >> i) & 1 ? 2.1 : 2.0;
    for (int as = 0; as < 3125; ++as) {
      double alpha[6], sum = 0.0;
      for (int i = 0, k = as; i < 5; ++i, k /= 5) sum += alpha[i] = 0.9 + 0.075 * (k % 5);
      alpha[5] = two_pi - sum;
      if (alpha[5] < 0.9 || alpha[5] > 1.2) continue;
      double value = 0.0;
      bool in_box = true;
      for (int i = 0; i < 6; ++i) {
        const double A = oracle::kite_area(y[i], y[(i + 1) % 6], alpha[i]);
        in_box = in_box && A >= 0.45 && A <= 0.8;
        value -= A;
      }
      if (!in_box) continue;
      ++feasible;
      above += value > M;
    }
  }
  return {v.certified && above == 0 && feasible > 0,
          std::string("shipped certificate ") + (v.certified ? "verifies" : "does NOT verify") + " (M = " +
              stored.certificate.M + "); " + std::to_string(feasible) + " grid assemblies, " + std::to_string(above) +
              " above M"};
}

// ---------------------------------------------------------------- 9

const std::vector<std::string> kCuboctahedronScript = {
    "q 0+1", "q 0+1", "q 0+2", "q 0+1", "q 0+2", "q 0+1", "q 3+0 4+0 0+0",
    "q 3+0 4+0 0+0", "q 3+0 4+0 0+0", "close", "close", "close", "close",
};

oracle::FaceList face_list(const DecoratedGraph& g) {
  oracle::FaceList f;
  f.n = g.vertices;
  for (const auto& face : g.faces) f.faces.push_back(face.cycle);
  return f;
}

struct GraphRun {
  bool three = false, tetra = false, brute = false;
  std::string report;
};

GraphRun graph_run() {
  GraphRun run;
  Json res;
  GeneratorConfig cfg;
  cfg.N = 3;
  const auto three = generate(cfg);
  run.three = three.complete && three.terminals.size() == 1;
  res["N3"] = encode(three);
  cfg.N = 4;
  cfg.prune = PruneSpec::parse("all-triangles").predicate();
  const auto tetra = generate(cfg);
  DecoratedGraph k4;
  k4.vertices = 4;
  for (const auto& c : std::vector<std::vector<int>>{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}) {
    k4.faces.push_back({c, FaceAttr::Unmodifiable});
  }
  run.tetra = tetra.complete && tetra.terminals.size() == 1 && tetra.canonical[0] == canonical_form(k4);
  res["N4_all_triangles"] = encode(tetra);
  run.brute = true;
  for (int N = 3; N <= 5; ++N) {
    GeneratorConfig full;
    full.N = N;
    const auto r = generate(full);
    std::set<std::string> got;
    for (const auto& g : r.terminals) got.insert(oracle::iso_key(face_list(g)));
    run.brute = run.brute && r.complete && got.size() == r.terminals.size() && got == oracle::plane_graph_classes(N);
    res["N" + std::to_string(N) + "_full"] = encode(r);
  }
  RunManifest m;
  m.subcommand = "acceptance graph-enumeration";
  run.report = render_report(m, res);
  return run;
}

std::string g_report9;

Outcome graph_enumeration() {
  const GraphRun run = graph_run();
  g_report9 = run.report;
  DecoratedGraph target;
  target.vertices = 12;
  target.seed_size = 4;
  for (const auto& c : oracle::cuboctahedron_faces()) target.faces.push_back({c, FaceAttr::Unmodifiable});
  const DecoratedGraph g = replay(4, kCuboctahedronScript);
  const bool iso = g.is_terminal() && canonical_form(g) == canonical_form(target);
  // Each refinement fixes exactly one face, so the step count is forced.
  bool one_per_step = true;
  DecoratedGraph cur = seed_graph(4);
  auto fixed = [](const DecoratedGraph& h) {
    return std::count_if(h.faces.begin(), h.faces.end(), [](const Face& f) { return f.attr == FaceAttr::Unmodifiable; });
  };
  for (const auto& step : kCuboctahedronScript) {
    const auto before = fixed(cur);
    cur = refine(cur, Refinement::parse(step));
    one_per_step = one_per_step && fixed(cur) == before + 1;
  }
  const long needed = static_cast<long>(target.faces.size()) - fixed(seed_graph(4));
  const bool eleven = iso && kCuboctahedronScript.size() == 11;
  std::string detail = std::string("N=3 ") + (run.three ? "1 class" : "WRONG") + ", N=4 all-triangles " +
                       (run.tetra ? "tetrahedron" : "WRONG") + ", N<=5 brute force " +
                       (run.brute ? "matches" : "DIFFERS") + "; derivation to the cuboctahedron " +
                       (iso ? "reached" : "NOT reached") + " in " + std::to_string(kCuboctahedronScript.size()) +
                       " steps, required 11";
  if (one_per_step) {
    detail += " (unattainable: every step fixes one face, seed has 1 fixed face, target has " +
              std::to_string(target.faces.size()) + ", so " + std::to_string(needed) + " steps)";
  }
  return {run.three && run.tetra && run.brute && eleven, detail};
}

// ---------------------------------------------------------------- 10

Outcome simplex_example() {
  const Interval e = sqrt_interval(Interval(8.0)).value;
  const GeomVerdict v = check_simplex_interior_point({e, e, e, e, e, e}, Interval(2.0));
  oracle::Big three(3.0), want(2.0);
  mpfr_sqrt(three.get(), three.get(), MPFR_RNDN);
  mpfr_div(want.get(), want.get(), three.get(), MPFR_RNDN);
  const bool ok = v.kind == VerdictKind::NoSuchConfiguration && v.witness && oracle::contains(*v.witness, want) &&
                  v.witness->width() <= 1e-10 && v.witness->hi() < 2.0;
  return {ok, std::string(to_string(v.kind)) + ", fourth-vertex distance " +
                  (v.witness ? format_interval(*v.witness) : std::string("none")) + " (width " +
                  fmt("%.2g", v.witness ? v.witness->width() : NAN) + ") vs 2/sqrt(3)"};
}

// ---------------------------------------------------------------- 11

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::current_path() / "acceptance_reports";
  fs::create_directories(dir);
  if (g_report3.empty() || g_report7.empty() || g_report9.empty()) return {false, "criteria 3, 7, 9 did not run"};
  const auto tasks = polynomial_tasks(303);
  std::vector<ProofReport> reports;
  for (const auto& t : tasks) reports.push_back(prove_negative(as_task(t), poly_config()));
  const std::string again3 = prover_report(tasks, reports, 303);
  const std::string again7 = duality_run(707).report;
  const std::string again9 = graph_run().report;
  int same = 0;
  const std::pair<const std::string*, const std::string*> pairs[] = {
      {&g_report3, &again3}, {&g_report7, &again7}, {&g_report9, &again9}};
  const char* names[] = {"criterion3", "criterion7", "criterion9"};
  for (int k = 0; k < 3; ++k) {
    std::ofstream(dir / (std::string(names[k]) + ".json"), std::ios::binary) << *pairs[k].first;
    std::ofstream(dir / (std::string(names[k]) + ".rerun.json"), std::ios::binary) << *pairs[k].second;
    same += without_wall_time(*pairs[k].first) == without_wall_time(*pairs[k].second);
  }
  return {same == 3, std::to_string(same) + " of 3 reports byte-identical on rerun (wall time excluded)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "interval containment fuzz", 10, containment_fuzz},
      {2, "gradient/Hessian soundness", 60, derivative_soundness},
      {3, "prover soundness vs grid oracle", 300, prover_soundness},
      {4, "prover capability", 30, prover_capability},
      {5, "LP certificate soundness", 120, lp_soundness},
      {6, "augmentation lemma", 60, augmentation},
      {7, "nonlinear duality end-to-end", 300, nonlinear_duality},
      {8, "Voronoi example", 120, voronoi},
      {9, "graph enumeration", 120, graph_enumeration},
      {10, "simplex example", 1, simplex_example},
      {11, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %-32s %8.2fs (limit %gs%s)  %s\n", c.id, pass ? "PASS" : "FAIL", c.name, s,
                c.limit_s, in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
