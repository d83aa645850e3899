#include "rigor/lp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rigor {

void LpProblem::validate() const {
  const std::size_t n = num_vars();
  if (var_bounds.size() != n) throw DimensionMismatch("var_bounds length differs from objective length");
  if (Aeq.size() != beq.size()) throw DimensionMismatch("Aeq row count differs from beq length");
  if (Aineq.size() != bineq.size()) throw DimensionMismatch("Aineq row count differs from bineq length");
  for (const auto& row : Aeq) {
    if (row.size() != n) throw DimensionMismatch("Aeq row length differs from variable count");
  }
  for (const auto& row : Aineq) {
    if (row.size() != n) throw DimensionMismatch("Aineq row length differs from variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!var_bounds[j].is_finite()) throw Error("variable " + std::to_string(j) + " has an infinite bound");
  }
}

DualSolution clamp_dual(const LpProblem& p, std::vector<double> y, std::vector<double> z) {
  if (y.size() != p.Aeq.size() || z.size() != p.Aineq.size()) {
    throw DimensionMismatch("dual has " + std::to_string(y.size()) + "+" + std::to_string(z.size()) +
                            " entries, problem has " + std::to_string(p.Aeq.size()) + "+" +
                            std::to_string(p.Aineq.size()) + " rows");
  }
  DualSolution d;
  for (double& v : z) {
    if (std::isnan(v)) throw Error("NaN in dual vector");
    if (v < 0.0) {
      v = 0.0;
      d.clamped = true;
    }
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error("non-finite entry in dual vector y");
  }
  d.y = std::move(y);
  d.z = std::move(z);
  return d;
}

BoundCertificate certify_upper_bound(const LpProblem& p, const DualSolution& d) {
  p.validate();
  if (d.y.size() != p.Aeq.size() || d.z.size() != p.Aineq.size()) {
    throw DimensionMismatch("dual dimensions do not match the problem");
  }
  const std::size_t n = p.num_vars();
  std::vector<Interval> delta = p.c;
  Interval total(0.0);
  for (std::size_t k = 0; k < p.Aeq.size(); ++k) {
    if (d.y[k] == 0.0) continue;
    const Interval yk(d.y[k]);
    for (std::size_t j = 0; j < n; ++j) delta[j] -= yk * p.Aeq[k][j];
    total += yk * p.beq[k];
  }
  for (std::size_t k = 0; k < p.Aineq.size(); ++k) {
    if (!(d.z[k] >= 0.0)) throw Error("dual z must be nonnegative; clamp it first");
    if (d.z[k] == 0.0) continue;
    const Interval zk(d.z[k]);
    for (std::size_t j = 0; j < n; ++j) delta[j] -= zk * p.Aineq[k][j];
    total += zk * p.bineq[k];
  }
  Interval dsum(0.0);
  for (std::size_t j = 0; j < n; ++j) dsum += delta[j] * p.var_bounds[j];
  BoundCertificate cert;
  cert.D = dsum.hi();
  cert.bound = (dsum + total).hi();
  for (const auto& r : delta) cert.residual_max_norm = std::max(cert.residual_max_norm, r.mag());
  cert.residual = std::move(delta);
  cert.digest = input_digest(p);
  return cert;
}

LpProblem augment_with_t(const LpProblem& p, const Interval& K) {
  p.validate();
  const std::size_t n = p.num_vars();
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.var_bounds[j].contains(0.0)) {
      throw AugmentationError("0 is outside the bounds " + format_interval(p.var_bounds[j]) + " of variable " +
                              std::to_string(j) + "; translate the variables first");
    }
  }
  LpProblem q;
  q.c = p.c;
  q.c.push_back(K);
  q.var_bounds = p.var_bounds;
  q.var_bounds.emplace_back(0.0, 1.0);
  for (std::size_t k = 0; k < p.Aeq.size(); ++k) {
    auto row = p.Aeq[k];
    row.push_back(p.beq[k]);
    q.Aeq.push_back(std::move(row));
    q.beq.push_back(p.beq[k]);
  }
  for (std::size_t k = 0; k < p.Aineq.size(); ++k) {
    auto row = p.Aineq[k];
    row.push_back(p.bineq[k]);
    q.Aineq.push_back(std::move(row));
    q.bineq.push_back(p.bineq[k]);
  }
  const Interval zero(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const Interval u(p.var_bounds[j].hi());
    const Interval l(p.var_bounds[j].lo());
    std::vector<Interval> up(n + 1, zero);
    up[j] = Interval(1.0);
    up[n] = u;
    q.Aineq.push_back(std::move(up));
    q.bineq.push_back(u);
    std::vector<Interval> down(n + 1, zero);
    down[j] = Interval(-1.0);
    down[n] = -l;
    q.Aineq.push_back(std::move(down));
    q.bineq.push_back(-l);
  }
  std::vector<Interval> t_up(n + 1, zero);
  t_up[n] = Interval(1.0);
  q.Aineq.push_back(std::move(t_up));
  q.bineq.emplace_back(1.0);
  std::vector<Interval> t_down(n + 1, zero);
  t_down[n] = Interval(-1.0);
  q.Aineq.push_back(std::move(t_down));
  q.bineq.emplace_back(0.0);
  return q;
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const double pv = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= pv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  /// Reduced costs c_B B⁻¹ a_j − cost_j (maximization), with the objective
  /// value in the last slot.
  std::vector<double> reduced(const std::vector<double>& cost) {
    std::vector<double> r(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = -cost[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) r[j] += cb * at(i, j);
    }
    return r;
  }

  /// Maximizes cost over the current basic feasible solution. Columns with
  /// blocked[j] never enter.
  int optimize(const std::vector<double>& cost, const std::vector<char>& blocked, const SolveOptions& opts,
               int& iterations) {
    int stall = 0;
    double last = -std::numeric_limits<double>::infinity();
    for (;;) {
      if (iterations >= opts.max_iterations) throw NoProgress("simplex iteration limit reached");
      const std::vector<double> r = reduced(cost);
      const bool bland = stall > 50;
      std::size_t enter = cols_;
      double best = -opts.tolerance;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (blocked[j] || r[j] >= -opts.tolerance) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (r[j] < best) {
          best = r[j];
          enter = j;
        }
      }
      if (enter == cols_) return 0;
      std::size_t leave = rows_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= opts.tolerance) continue;
        const double q = rhs(i) / a;
        if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && leave < rows_ && basis_[i] < basis_[leave])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave == rows_) throw NoProgress("problem is unbounded");
      pivot(leave, enter);
      ++iterations;
      if (r[cols_] > last + opts.tolerance) {
        last = r[cols_];
        stall = 0;
      } else {
        ++stall;
      }
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

ApproxSolution solve_approx(const LpProblem& p, const SolveOptions& opts) {
  p.validate();
  const std::size_t n = p.num_vars();
  const std::size_t me = p.Aeq.size();
  const std::size_t mi = p.Aineq.size();
  std::vector<double> lo(n);
  for (std::size_t j = 0; j < n; ++j) lo[j] = p.var_bounds[j].lo();

  // Rows: equalities, inequalities, upper bounds on the shifted variables.
  struct Row {
    std::vector<double> a;
    double b;
    bool eq;
  };
  std::vector<Row> rows;
  auto shifted = [&](const std::vector<Interval>& a, const Interval& b, bool eq) {
    Row r{std::vector<double>(n), b.mid(), eq};
    for (std::size_t j = 0; j < n; ++j) {
      r.a[j] = a[j].mid();
      r.b -= r.a[j] * lo[j];
    }
    rows.push_back(std::move(r));
  };
  for (std::size_t k = 0; k < me; ++k) shifted(p.Aeq[k], p.beq[k], true);
  for (std::size_t k = 0; k < mi; ++k) shifted(p.Aineq[k], p.bineq[k], false);
  for (std::size_t j = 0; j < n; ++j) {
    Row r{std::vector<double>(n, 0.0), p.var_bounds[j].hi() - lo[j], false};
    r.a[j] = 1.0;
    rows.push_back(std::move(r));
  }

  const std::size_t R = rows.size();
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  std::vector<long> slack_col(R, -1);
  std::vector<long> art_col(R, -1);
  std::vector<char> negated(R, 0);
  for (std::size_t i = 0; i < R; ++i) {
    if (!rows[i].eq) slack_col[i] = static_cast<long>(n + n_slack++);
    negated[i] = rows[i].b < 0.0;
  }
  for (std::size_t i = 0; i < R; ++i) {
    if (rows[i].eq || negated[i]) art_col[i] = static_cast<long>(n + n_slack + n_art++);
  }
  const std::size_t C = n + n_slack + n_art;
  Tableau tab(R, C);
  for (std::size_t i = 0; i < R; ++i) {
    const double s = negated[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = s * rows[i].a[j];
    if (slack_col[i] >= 0) tab.at(i, slack_col[i]) = s;
    if (art_col[i] >= 0) tab.at(i, art_col[i]) = 1.0;
    tab.rhs(i) = s * rows[i].b;
    tab.basis()[i] = art_col[i] >= 0 ? static_cast<std::size_t>(art_col[i]) : static_cast<std::size_t>(slack_col[i]);
  }

  int iterations = 0;
  std::vector<char> is_art(C, 0);
  for (std::size_t j = n + n_slack; j < C; ++j) is_art[j] = 1;
  if (n_art > 0) {
    std::vector<double> cost(C, 0.0);
    double scale = 1.0;
    for (std::size_t j = n + n_slack; j < C; ++j) cost[j] = -1.0;
    for (std::size_t i = 0; i < R; ++i) scale += std::fabs(tab.rhs(i));
    tab.optimize(cost, std::vector<char>(C, 0), opts, iterations);
    if (tab.reduced(cost)[C] < -1e-7 * scale) throw NoProgress("problem is infeasible");
    for (std::size_t i = 0; i < R; ++i) {
      if (!is_art[tab.basis()[i]]) continue;
      std::size_t best = C;
      for (std::size_t j = 0; j < n + n_slack; ++j) {
        if (std::fabs(tab.at(i, j)) > 1e-9 && (best == C || std::fabs(tab.at(i, j)) > std::fabs(tab.at(i, best)))) {
          best = j;
        }
      }
      if (best < C) tab.pivot(i, best);
    }
  }
  std::vector<double> cost(C, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.c[j].mid();
  tab.optimize(cost, is_art, opts, iterations);

  ApproxSolution sol;
  sol.iterations = iterations;
  sol.x = lo;
  for (std::size_t i = 0; i < R; ++i) {
    if (tab.basis()[i] < n) sol.x[tab.basis()[i]] += tab.rhs(i);
  }
  const std::vector<double> r = tab.reduced(cost);
  sol.y.resize(me);
  for (std::size_t k = 0; k < me; ++k) sol.y[k] = (negated[k] ? -1.0 : 1.0) * r[art_col[k]];
  sol.z.resize(mi);
  for (std::size_t k = 0; k < mi; ++k) sol.z[k] = r[slack_col[me + k]];
  for (std::size_t j = 0; j < n; ++j) sol.objective += cost[j] * sol.x[j];
  return sol;
}

std::string input_digest(const LpProblem& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  };
  auto feed_vec = [&](const char* tag, const std::vector<Interval>& v) {
    feed(tag);
    for (const auto& x : v) feed(format_interval(x));
  };
  feed("n " + std::to_string(p.num_vars()));
  feed_vec("c", p.c);
  feed_vec("bounds", p.var_bounds);
  for (const auto& row : p.Aeq) feed_vec("eq", row);
  feed_vec("beq", p.beq);
  for (const auto& row : p.Aineq) feed_vec("ineq", row);
  feed_vec("bineq", p.bineq);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rigor
