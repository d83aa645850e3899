#pragma once

// Random feasible LPs with small rational data, produced both exactly (for
// the rational oracle) and as interval enclosures (for the library).

#include <random>

#include "oracles/exact.hpp"
#include "oracles/rational_lp.hpp"
#include "rigor/lp.hpp"

namespace oracle {

inline rigor::Interval enclose(const mpq_class& q) {
  const rigor::Interval num(mpz_class(q.get_num()).get_d());
  const rigor::Interval den(mpz_class(q.get_den()).get_d());
  return num / den;
}

struct RandomLp {
  RationalLp exact;
  rigor::LpProblem problem;
};

inline rigor::LpProblem enclose(const RationalLp& e) {
  rigor::LpProblem p;
  auto vec = [](const QVec& v) {
    std::vector<rigor::Interval> out;
    for (const auto& q : v) out.push_back(enclose(q));
    return out;
  };
  for (const auto& row : e.Aeq) p.Aeq.push_back(vec(row));
  p.beq = vec(e.beq);
  for (const auto& row : e.Aineq) p.Aineq.push_back(vec(row));
  p.bineq = vec(e.bineq);
  p.c = vec(e.c);
  for (std::size_t j = 0; j < e.lo.size(); ++j) p.var_bounds.emplace_back(enclose(e.lo[j]).lo(), enclose(e.hi[j]).hi());
  return p;
}

/// Feasible by construction: a random interior point x0 fixes b = A x0 + slack.
/// With zero_in_bounds every variable range contains 0.
inline RandomLp random_lp(std::mt19937_64& rng, int max_n, int max_m, bool zero_in_bounds = false) {
  std::uniform_int_distribution<int> nd(1, max_n), md(1, max_m), eqd(0, 2);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9), pos(1, 9);
  auto rat = [&] {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  const int n = nd(rng);
  const int m = md(rng);
  const int me = std::min(eqd(rng), n - 1);
  RationalLp e;
  QVec x0(n);
  for (int j = 0; j < n; ++j) {
    mpq_class lo = rat(), hi = rat();
    if (lo > hi) std::swap(lo, hi);
    if (zero_in_bounds) {
      if (lo > 0) lo = 0;
      if (hi < 0) hi = 0;
    }
    if (lo == hi) hi += 1;
    e.lo.push_back(lo);
    e.hi.push_back(hi);
    mpq_class t(pos(rng), 10);
    t.canonicalize();
    x0[j] = lo + t * (hi - lo);
    e.c.push_back(rat());
  }
  auto row = [&] {
    QVec a(n);
    for (auto& v : a) v = rat();
    mpq_class ax = 0;
    for (int j = 0; j < n; ++j) ax += a[j] * x0[j];
    return std::make_pair(a, ax);
  };
  for (int k = 0; k < m; ++k) {
    auto [a, ax] = row();
    mpq_class slack(pos(rng) - 1, den(rng));
    slack.canonicalize();
    e.Aineq.push_back(a);
    e.bineq.push_back(ax + slack);
  }
  for (int k = 0; k < me; ++k) {
    auto [a, ax] = row();
    e.Aeq.push_back(a);
    e.beq.push_back(ax);
  }
  return {e, enclose(e)};
}

}  // namespace oracle
