#pragma once

// Exact LP oracle: max c·x s.t. Aeq x = beq, Aineq x ≤ bineq, l ≤ x ≤ u,
// solved by a two-phase tableau simplex over rationals with Bland's rule
// (no cycling, no tolerances).

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace oracle {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

struct RationalLp {
  QMat Aeq;
  QVec beq;
  QMat Aineq;
  QVec bineq;
  QVec c;
  QVec lo;
  QVec hi;
};

struct RationalOptimum {
  mpq_class value;
  QVec x;
};

inline std::optional<RationalOptimum> solve_exact(const RationalLp& p) {
  const std::size_t n = p.c.size();
  // shifted variables s = x − lo ≥ 0; rows: eq, ineq, s_j ≤ hi_j − lo_j
  struct Row {
    QVec a;
    mpq_class b;
    bool eq;
  };
  std::vector<Row> rows;
  auto add = [&](const QVec& a, const mpq_class& b, bool eq) {
    Row r{a, b, eq};
    for (std::size_t j = 0; j < n; ++j) r.b -= a[j] * p.lo[j];
    rows.push_back(r);
  };
  for (std::size_t k = 0; k < p.Aeq.size(); ++k) add(p.Aeq[k], p.beq[k], true);
  for (std::size_t k = 0; k < p.Aineq.size(); ++k) add(p.Aineq[k], p.bineq[k], false);
  for (std::size_t j = 0; j < n; ++j) {
    QVec a(n, 0);
    a[j] = 1;
    add(a, p.hi[j], false);
  }
  const std::size_t R = rows.size();
  // columns: n structural, one slack per inequality row, one artificial per row
  std::size_t ns = 0;
  for (const auto& r : rows) ns += r.eq ? 0 : 1;
  const std::size_t C = n + ns + R;
  QMat T(R, QVec(C + 1, 0));
  std::vector<std::size_t> basis(R);
  std::size_t s = n;
  for (std::size_t i = 0; i < R; ++i) {
    const int sign = rows[i].b < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) T[i][j] = sign * rows[i].a[j];
    if (!rows[i].eq) T[i][s++] = sign;
    T[i][n + ns + i] = 1;
    T[i][C] = sign * rows[i].b;
    basis[i] = n + ns + i;
  }
  auto pivot = [&](std::size_t r, std::size_t c) {
    const mpq_class pv = T[r][c];
    for (auto& v : T[r]) v /= pv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || T[i][c] == 0) continue;
      const mpq_class f = T[i][c];
      for (std::size_t j = 0; j <= C; ++j) T[i][j] -= f * T[r][j];
    }
    basis[r] = c;
  };
  // maximize cost·columns; returns false when unbounded
  auto run = [&](const QVec& cost, std::size_t allowed) {
    for (;;) {
      std::size_t enter = C;
      for (std::size_t j = 0; j < allowed && enter == C; ++j) {
        mpq_class r = -cost[j];
        for (std::size_t i = 0; i < R; ++i) r += cost[basis[i]] * T[i][j];
        if (r < 0) enter = j;
      }
      if (enter == C) return true;
      std::size_t leave = R;
      mpq_class best;
      for (std::size_t i = 0; i < R; ++i) {
        if (T[i][enter] <= 0) continue;
        const mpq_class q = T[i][C] / T[i][enter];
        if (leave == R || q < best || (q == best && basis[i] < basis[leave])) {
          leave = i;
          best = q;
        }
      }
      if (leave == R) return false;
      pivot(leave, enter);
    }
  };
  QVec phase1(C, 0);
  for (std::size_t i = 0; i < R; ++i) phase1[n + ns + i] = -1;
  run(phase1, C);
  mpq_class infeas = 0;
  for (std::size_t i = 0; i < R; ++i) {
    if (basis[i] >= n + ns) infeas += T[i][C];
  }
  if (infeas != 0) return std::nullopt;
  for (std::size_t i = 0; i < R; ++i) {
    if (basis[i] < n + ns) continue;
    for (std::size_t j = 0; j < n + ns; ++j) {
      if (T[i][j] != 0) {
        pivot(i, j);
        break;
      }
    }
  }
  QVec cost(C, 0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.c[j];
  if (!run(cost, n + ns)) return std::nullopt;
  RationalOptimum opt;
  opt.x = p.lo;
  for (std::size_t i = 0; i < R; ++i) {
    if (basis[i] < n) opt.x[basis[i]] += T[i][C];
  }
  opt.value = 0;
  for (std::size_t j = 0; j < n; ++j) opt.value += p.c[j] * opt.x[j];
  return opt;
}

}  // namespace oracle
