#include "rigor/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

namespace rigor {

std::size_t AssemblyProblem::num_globals() const {
  std::size_t n = 0;
  for (const auto& d : domains) n += d.vars.size();
  return n;
}

std::size_t AssemblyProblem::offset(std::size_t d) const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < d; ++k) n += domains.at(k).vars.size();
  return n;
}

std::pair<std::size_t, std::size_t> AssemblyProblem::locate(std::size_t i) const {
  for (std::size_t d = 0; d < domains.size(); ++d) {
    if (i < domains[d].vars.size()) return {d, i};
    i -= domains[d].vars.size();
  }
  throw DimensionMismatch("global variable index out of range");
}

void AssemblyProblem::validate() const {
  if (domains.empty()) throw Error("assembly problem has no domains");
  for (const auto& d : domains) {
    if (d.box.size() != d.vars.size()) {
      throw DimensionMismatch("domain " + d.id + ": box has " + std::to_string(d.box.size()) + " components for " +
                              std::to_string(d.vars.size()) + " variables");
    }
    for (const auto& phi : d.constraints) {
      if (phi.max_var_index() >= static_cast<int>(d.vars.size())) {
        throw DimensionMismatch("domain " + d.id + ": constraint uses an undeclared slot");
      }
    }
  }
  const std::size_t n = num_globals();
  if (c.size() != n) throw DimensionMismatch("objective length differs from the number of global variables");
  if (A.size() != b.size()) throw DimensionMismatch("row count differs from right-hand side length");
  for (const auto& row : A) {
    if (row.size() != n) throw DimensionMismatch("row length differs from the number of global variables");
    for (const auto& v : row) from_decimal_string(v);
  }
  for (const auto& v : b) from_decimal_string(v);
  for (const auto& v : c) from_decimal_string(v);
}

namespace {

Interval dec(const std::string& s) { return from_decimal_string(s); }

Expr num(const std::string& s) {
  const Interval v = dec(s);
  if (v == Interval(0.0)) return Expr::integer(0);
  if (v == Interval(1.0)) return Expr::integer(1);
  return Expr::constant(s);
}

bool is_zero_text(const std::string& s) { return dec(s) == Interval(0.0); }

/// Decimal text whose exact value is ≥ x.
std::string decimal_at_least(double x) {
  for (;;) {
    const std::string s = format_double(x);
    if (dec(s).lo() >= x) return s;
    x = round::next_up(x);
  }
}

/// Rounds a fitted multiplier to `digits` significant digits, flushing tiny and
/// negative values to zero.
std::string snap(double v, double scale, int digits) {
  if (!(v > 1e-12 * std::max(1.0, scale))) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return format_double(std::strtod(buf, nullptr));
}

std::vector<Interval> enclose(const std::vector<std::string>& v) {
  std::vector<Interval> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(dec(s));
  return out;
}

Interval dot(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  Interval s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// M + d·t0 − c·x* − w·(b − A x*)
Interval global_slack(const AssemblyProblem& p, const DualityCertificate& cert) {
  const std::vector<Interval> xs = enclose(cert.x_star);
  Interval g = dec(cert.M) + Interval(static_cast<double>(p.domains.size())) * dec(cert.t0) - dot(enclose(p.c), xs);
  for (const auto& row : cert.rows) g -= dec(row.w) * (dec(row.rhs) - dot(enclose(row.coefficients), xs));
  return g;
}

}  // namespace

LpProblem relax_linear(const AssemblyProblem& p, const std::vector<LinearCut>& cuts, const ProverConfig& cfg) {
  p.validate();
  const std::size_t n = p.num_globals();
  LpProblem lp;
  lp.c = enclose(p.c);
  for (const auto& d : p.domains) {
    for (const auto& iv : d.box.dims()) lp.var_bounds.push_back(iv);
  }
  for (std::size_t k = 0; k < p.A.size(); ++k) {
    lp.Aineq.push_back(enclose(p.A[k]));
    lp.bineq.push_back(dec(p.b[k]));
  }
  for (const auto& cut : cuts) {
    if (cut.domain >= p.domains.size()) throw DimensionMismatch("cut " + cut.id + " names an unknown domain");
    const LocalDomain& d = p.domains[cut.domain];
    if (cut.coefficients.size() != d.vars.size()) {
      throw DimensionMismatch("cut " + cut.id + " has the wrong number of coefficients");
    }
    Expr e = -num(cut.offset);
    for (std::size_t j = 0; j < d.vars.size(); ++j) {
      if (!is_zero_text(cut.coefficients[j])) e = e + num(cut.coefficients[j]) * Expr::variable(static_cast<int>(j));
    }
    ProofTask task;
    task.expr = e;
    task.domain = d.box;
    task.strict = false;
    task.constraints = d.constraints;
    ProofReport rep = prove_negative(task, cfg);
    if (rep.status != ProofStatus::Proven) throw CutRejected(cut.id, std::move(rep));
    std::vector<Interval> row(n, Interval(0.0));
    const std::size_t off = p.offset(cut.domain);
    for (std::size_t j = 0; j < d.vars.size(); ++j) row[off + j] = dec(cut.coefficients[j]);
    lp.Aineq.push_back(std::move(row));
    lp.bineq.push_back(dec(cut.offset));
  }
  return lp;
}

std::vector<std::vector<std::vector<double>>> default_test_points(const AssemblyProblem& p, const FitOptions& opts) {
  std::vector<std::vector<std::vector<double>>> out;
  for (std::size_t d = 0; d < p.domains.size(); ++d) {
    const Box& box = p.domains[d].box;
    const std::size_t k = box.size();
    std::vector<std::vector<double>> pts;
    const std::size_t corners = k >= 63 ? opts.max_corners : std::min<std::size_t>(std::size_t{1} << k, opts.max_corners);
    for (std::size_t m = 0; m < corners; ++m) {
      std::vector<double> x(k);
      for (std::size_t j = 0; j < k; ++j) x[j] = (j < 63 && (m >> j) & 1) ? box[j].hi() : box[j].lo();
      pts.push_back(std::move(x));
    }
    pts.push_back(box.center());
    std::mt19937_64 rng(opts.seed + d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t s = 0; s < opts.random_points; ++s) {
      std::vector<double> x(k);
      for (std::size_t j = 0; j < k; ++j) x[j] = std::clamp(box[j].lo() + u(rng) * (box[j].hi() - box[j].lo()), box[j].lo(), box[j].hi());
      pts.push_back(std::move(x));
    }
    out.push_back(std::move(pts));
  }
  return out;
}

DualityCertificate fit_dual(const AssemblyProblem& p, const std::vector<std::string>& x_star, const std::string& M,
                            const std::vector<std::vector<std::vector<double>>>& test_points, const FitOptions& opts) {
  p.validate();
  const std::size_t n = p.num_globals();
  const std::size_t nd = p.domains.size();
  if (x_star.size() != n) throw DimensionMismatch("x* length differs from the number of global variables");
  if (test_points.size() != nd) throw DimensionMismatch("test points must be given per domain");
  const std::vector<Interval> xs = enclose(x_star);
  std::vector<double> xm(n);
  for (std::size_t i = 0; i < n; ++i) xm[i] = xs[i].mid();
  const std::vector<Interval> cv = enclose(p.c);

  DualityCertificate cert;
  cert.M = M;
  cert.x_star = x_star;
  cert.binding_tolerance = opts.binding_tolerance;
  cert.seed = opts.seed;
  cert.random_points = opts.random_points;
  for (std::size_t k = 0; k < p.A.size(); ++k) {
    const Interval bk = dec(p.b[k]);
    const double res = (dot(enclose(p.A[k]), xs) - bk).mid();
    if (std::fabs(res) <= opts.binding_tolerance * (1.0 + bk.mag())) {
      cert.rows.push_back({k, p.A[k], p.b[k], res, "0"});
    }
  }

  // LP columns: t, then r per (domain, constraint), then w per retained row.
  std::vector<std::size_t> r_col(nd);
  std::size_t cols = 1;
  for (std::size_t d = 0; d < nd; ++d) {
    r_col[d] = cols;
    cols += p.domains[d].constraints.size();
  }
  const std::size_t w_col = cols;
  cols += cert.rows.size();

  LpProblem lp;
  lp.c.assign(cols, Interval(0.0));
  lp.c[0] = Interval(1.0);
  lp.var_bounds.assign(cols, Interval(0.0, opts.multiplier_cap));
  lp.var_bounds[0] = Interval(-1e6, 1e6);
  std::vector<std::vector<double>> arow(cert.rows.size());
  for (std::size_t k = 0; k < cert.rows.size(); ++k) {
    for (const auto& s : cert.rows[k].coefficients) arow[k].push_back(dec(s).mid());
  }
  for (std::size_t d = 0; d < nd; ++d) {
    const LocalDomain& dom = p.domains[d];
    const std::size_t off = p.offset(d);
    std::vector<Evaluator> phis;
    for (const auto& phi : dom.constraints) phis.push_back(compile(phi, static_cast<int>(dom.vars.size())));
    std::size_t used = 0;
    for (const auto& x : test_points[d]) {
      if (x.size() != dom.vars.size()) throw DimensionMismatch("test point has the wrong dimension");
      std::vector<Interval> pt;
      for (double v : x) pt.emplace_back(v);
      std::vector<Interval> row(cols, Interval(0.0));
      row[0] = Interval(1.0);
      bool ok = true;
      for (std::size_t f = 0; f < phis.size() && ok; ++f) {
        try {
          row[r_col[d] + f] = Interval(phis[f].value(pt).mid());
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok) continue;
      double rhs = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) rhs -= cv[off + j].mid() * (x[j] - xm[off + j]);
      for (std::size_t k = 0; k < cert.rows.size(); ++k) {
        double a = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) a += arow[k][off + j] * (xm[off + j] - x[j]);
        row[w_col + k] = Interval(a);
      }
      lp.Aineq.push_back(std::move(row));
      lp.bineq.emplace_back(rhs);
      ++used;
    }
    if (used == 0) throw NoCandidate("domain " + dom.id + " has no usable test points");
  }
  // M + d·t − c·x* − w·(b − A x*) ≥ 0
  {
    std::vector<Interval> row(cols, Interval(0.0));
    row[0] = Interval(-static_cast<double>(nd));
    for (std::size_t k = 0; k < cert.rows.size(); ++k) row[w_col + k] = Interval(-cert.rows[k].residual);
    double rhs = dec(M).mid();
    for (std::size_t i = 0; i < n; ++i) rhs -= cv[i].mid() * xm[i];
    lp.Aineq.push_back(std::move(row));
    lp.bineq.emplace_back(rhs);
  }
  ApproxSolution sol;
  try {
    sol = solve_approx(lp);
  } catch (const NoProgress& e) {
    throw NoCandidate(std::string("test-point LP failed: ") + e.what());
  }
  double scale = 0.0;
  for (double v : sol.x) scale = std::max(scale, std::fabs(v));
  const std::size_t test_rows = lp.Aineq.size() - 1;

  // Tries the coarsest rounding of the multipliers that still satisfies every
  // test-point row with t = t0.
  for (int digits = 1; digits <= 12; ++digits) {
    cert.r.clear();
    for (std::size_t d = 0; d < nd; ++d) {
      std::vector<std::string> r;
      for (std::size_t f = 0; f < p.domains[d].constraints.size(); ++f) {
        r.push_back(snap(sol.x[r_col[d] + f], scale, digits));
      }
      cert.r.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < cert.rows.size(); ++k) cert.rows[k].w = snap(sol.x[w_col + k], scale, digits);

    // t0 = smallest value with M + d·t0 − c·x* − w·(b − A x*) ≥ 0
    Interval need = dot(cv, xs) - dec(M);
    for (const auto& row : cert.rows) need += dec(row.w) * (dec(row.rhs) - dot(enclose(row.coefficients), xs));
    need = need / Interval(static_cast<double>(nd));
    cert.t0 = decimal_at_least(need.hi());
    while (global_slack(p, cert).lo() < 0.0) cert.t0 = decimal_at_least(round::next_up(dec(cert.t0).hi()));

    std::vector<double> y(cols);
    y[0] = dec(cert.t0).mid();
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t f = 0; f < cert.r[d].size(); ++f) y[r_col[d] + f] = dec(cert.r[d][f]).mid();
    }
    for (std::size_t k = 0; k < cert.rows.size(); ++k) y[w_col + k] = dec(cert.rows[k].w).mid();
    bool ok = true;
    for (std::size_t i = 0; i < test_rows && ok; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < cols; ++j) lhs += lp.Aineq[i][j].mid() * y[j];
      const double rhs = lp.bineq[i].mid();
      ok = lhs <= rhs + 1e-9 * (1.0 + std::fabs(rhs) + std::fabs(lhs));
    }
    if (ok) return cert;
  }
  throw NoCandidate("no multipliers satisfy the test points with t = t0");
}

Expr domain_inequality(const AssemblyProblem& p, const DualityCertificate& cert, std::size_t d) {
  const LocalDomain& dom = p.domains.at(d);
  const std::size_t off = p.offset(d);
  Expr g = Expr::integer(0);
  for (std::size_t j = 0; j < dom.vars.size(); ++j) {
    const std::string& cj = p.c[off + j];
    if (is_zero_text(cj)) continue;
    g = g + num(cj) * (Expr::variable(static_cast<int>(j)) - num(cert.x_star[off + j]));
  }
  for (std::size_t f = 0; f < dom.constraints.size(); ++f) {
    const std::string& r = cert.r.at(d).at(f);
    if (!is_zero_text(r)) g = g + num(r) * dom.constraints[f];
  }
  for (const auto& row : cert.rows) {
    if (is_zero_text(row.w)) continue;
    Expr lin = Expr::integer(0);
    bool any = false;
    for (std::size_t j = 0; j < dom.vars.size(); ++j) {
      const std::string& a = row.coefficients.at(off + j);
      if (is_zero_text(a)) continue;
      lin = lin + num(a) * (num(cert.x_star[off + j]) - Expr::variable(static_cast<int>(j)));
      any = true;
    }
    if (any) g = g + num(row.w) * lin;
  }
  return g + num(cert.t0);
}

DualityVerdict verify_duality(const AssemblyProblem& p, const DualityCertificate& cert, const ProverConfig& cfg) {
  p.validate();
  DualityVerdict v;
  const std::size_t n = p.num_globals();
  const std::size_t nd = p.domains.size();
  auto reject = [&](std::string why) {
    v.reason = std::move(why);
    return v;
  };
  if (cert.x_star.size() != n) return reject("x* has the wrong length");
  if (cert.r.size() != nd) return reject("r must list one vector per domain");
  for (std::size_t d = 0; d < nd; ++d) {
    if (cert.r[d].size() != p.domains[d].constraints.size()) return reject("r has the wrong length for domain " + p.domains[d].id);
    for (const auto& r : cert.r[d]) {
      if (dec(r).lo() < 0.0) return reject("negative multiplier r in domain " + p.domains[d].id);
    }
  }
  const std::vector<Interval> xs = enclose(cert.x_star);
  for (const auto& row : cert.rows) {
    if (row.index >= p.A.size()) return reject("retained row index out of range");
    if (row.coefficients != p.A[row.index] || row.rhs != p.b[row.index]) {
      return reject("retained row " + std::to_string(row.index) + " differs from the problem");
    }
    if (dec(row.w).lo() < 0.0) return reject("negative multiplier w on row " + std::to_string(row.index));
    const Interval bk = dec(row.rhs);
    const Interval res = dot(enclose(row.coefficients), xs) - bk;
    if (res.mig() > cert.binding_tolerance * (1.0 + bk.mag())) {
      return reject("row " + std::to_string(row.index) + " is not binding at x*");
    }
  }
  v.global_check = global_slack(p, cert).lo() >= 0.0;

  v.domains.resize(nd);
  auto run = [&](std::size_t d, unsigned threads) {
    ProofTask task;
    task.expr = domain_inequality(p, cert, d);
    task.domain = p.domains[d].box;
    task.strict = false;
    ProverConfig c = cfg;
    c.threads = threads;
    v.domains[d] = {d, prove_negative(task, c)};
  };
  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1 || nd == 1) {
    for (std::size_t d = 0; d < nd; ++d) run(d, threads);
  } else {
    std::vector<std::thread> pool;
    const unsigned inner = std::max(1u, threads / static_cast<unsigned>(nd));
    for (std::size_t d = 0; d < nd; ++d) pool.emplace_back(run, d, inner);
    for (auto& t : pool) t.join();
  }
  v.certified = v.global_check;
  for (const auto& dv : v.domains) v.certified = v.certified && dv.report.status == ProofStatus::Proven;
  if (!v.global_check) {
    v.reason = "global inequality M + d·t0 − c·x* − w·(b − A x*) ≥ 0 fails";
  } else {
    for (const auto& dv : v.domains) {
      if (dv.report.status != ProofStatus::Proven) {
        v.reason = "domain " + p.domains[dv.domain].id + ": " + to_string(dv.report.status);
        break;
      }
    }
  }
  return v;
}

std::pair<AssemblyProblem, AssemblyProblem> branch(const AssemblyProblem& p, std::size_t d, std::size_t slot) {
  if (d >= p.domains.size() || slot >= p.domains[d].box.size()) throw BranchError("branch target out of range");
  if (p.domains[d].box[slot].is_point()) {
    throw BranchError("component " + p.domains[d].vars[slot] + " of domain " + p.domains[d].id + " is degenerate");
  }
  auto [lo, hi] = p.domains[d].box.bisect(slot);
  std::pair<AssemblyProblem, AssemblyProblem> out{p, p};
  out.first.domains[d].box = std::move(lo);
  out.second.domains[d].box = std::move(hi);
  return out;
}

namespace {

void branch_rec(const AssemblyProblem& p, const std::vector<std::string>& x_star, const std::string& M,
                const FitOptions& fit, const ProverConfig& cfg, int depth, BranchResult& out) {
  std::vector<std::string> xs = x_star;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto [d, j] = p.locate(i);
    const Interval& iv = p.domains[d].box[j];
    const double v = dec(xs[i]).mid();
    if (v < iv.lo()) xs[i] = format_double(iv.lo());
    if (v > iv.hi()) xs[i] = format_double(iv.hi());
  }
  BranchLeaf leaf;
  for (const auto& d : p.domains) leaf.boxes.push_back(d.box);
  try {
    DualityCertificate cert = fit_dual(p, xs, M, default_test_points(p, fit), fit);
    const DualityVerdict v = verify_duality(p, cert, cfg);
    leaf.certified = v.certified;
    leaf.reason = v.reason;
    leaf.certificate = std::move(cert);
  } catch (const NoCandidate& e) {
    leaf.reason = e.what();
  }
  if (leaf.certified || depth <= 0) {
    out.leaves.push_back(std::move(leaf));
    return;
  }
  std::size_t bd = 0, bs = 0;
  double best = -1.0;
  for (std::size_t d = 0; d < p.domains.size(); ++d) {
    for (std::size_t j = 0; j < p.domains[d].box.size(); ++j) {
      const double w = p.domains[d].box[j].hi() - p.domains[d].box[j].lo();
      if (w > best) {
        best = w;
        bd = d;
        bs = j;
      }
    }
  }
  if (best <= 0.0) {
    out.leaves.push_back(std::move(leaf));
    return;
  }
  auto [a, b] = branch(p, bd, bs);
  branch_rec(a, x_star, M, fit, cfg, depth - 1, out);
  branch_rec(b, x_star, M, fit, cfg, depth - 1, out);
}

}  // namespace

BranchResult certify_by_branching(const AssemblyProblem& p, const std::vector<std::string>& x_star,
                                  const std::string& M, const FitOptions& fit, const ProverConfig& cfg,
                                  int max_depth) {
  p.validate();
  BranchResult r;
  branch_rec(p, x_star, M, fit, cfg, max_depth, r);
  r.certified = true;
  for (const auto& l : r.leaves) r.certified = r.certified && l.certified;
  return r;
}

}  // namespace rigor
