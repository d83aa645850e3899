#pragma once

// Rigorous LP upper bounds from approximate duals.
//
// Problems have the form  max c·x  s.t.  Aeq x = beq,  Aineq x ≤ bineq,
// x ∈ var_bounds. Data are interval enclosures of the (decimal) input, so a
// certificate holds for the exact problem the file describes.

#include <cstdint>
#include <string>
#include <vector>

#include "rigor/error.hpp"
#include "rigor/interval.hpp"

namespace rigor {

class AugmentationError : public Error {
 public:
  using Error::Error;
};

class NoProgress : public Error {
 public:
  using Error::Error;
};

using IntervalMatrix = std::vector<std::vector<Interval>>;

struct LpProblem {
  IntervalMatrix Aeq;
  std::vector<Interval> beq;
  IntervalMatrix Aineq;
  std::vector<Interval> bineq;
  std::vector<Interval> c;
  std::vector<Interval> var_bounds;

  std::size_t num_vars() const { return c.size(); }
  /// Throws DimensionMismatch on inconsistent sizes and Error on a
  /// non-finite or missing variable bound.
  void validate() const;
};

struct DualSolution {
  std::vector<double> y;  // equality rows, free
  std::vector<double> z;  // inequality rows, ≥ 0
  bool clamped = false;
};

struct BoundCertificate {
  double bound = 0.0;
  /// Upper bound of δ·x over the variable box.
  double D = 0.0;
  /// δ = c − y·Aeq − z·Aineq.
  std::vector<Interval> residual;
  double residual_max_norm = 0.0;
  std::string digest;
};

/// Zeroes negative z entries; y is passed through.
DualSolution clamp_dual(const LpProblem& p, std::vector<double> y, std::vector<double> z);

/// Valid upper bound on the primal optimum for any z ≥ 0 and any y.
BoundCertificate certify_upper_bound(const LpProblem& p, const DualSolution& d);

/// Adds a variable t ∈ [0,1] with objective coefficient K: inequality rows
/// become A x + b t ≤ b, equality rows A′x + b′t = b′, and each variable
/// bound l ≤ x ≤ u becomes the rows x ≤ u(1−t), −x ≤ −l(1−t). Rows t ≤ 1 and
/// −t ≤ 0 are appended last. Throws AugmentationError unless 0 lies in
/// every variable bound.
LpProblem augment_with_t(const LpProblem& p, const Interval& K);

struct ApproxSolution {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  double objective = 0.0;
  int iterations = 0;
};

struct SolveOptions {
  int max_iterations = 50000;
  double tolerance = 1e-9;
};

/// Dense two-phase simplex on the midpoints of the data. No rigor claim.
/// Throws NoProgress when infeasible, unbounded or out of iterations.
ApproxSolution solve_approx(const LpProblem& p, const SolveOptions& opts = {});

/// FNV-1a 64-bit digest of the problem's canonical text, as 16 hex digits.
std::string input_digest(const LpProblem& p);

}  // namespace rigor
