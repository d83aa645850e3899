#pragma once

// Linear assembly problems: nonlinear local domains linked by global linear
// rows, with LP relaxation and nonlinear-duality certificates.
//
// Global variables are the domain variables in declaration order (domain 0's
// slots first). Matrix, right-hand side and objective entries are kept as
// decimal text and enclosed on use.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigor/expr.hpp"
#include "rigor/lp.hpp"
#include "rigor/prover.hpp"
#include "rigor/taylor.hpp"

namespace rigor {

class CutRejected : public Error {
 public:
  CutRejected(std::string cut_id, ProofReport report)
      : Error("cut " + cut_id + " could not be verified"), cut_id_(std::move(cut_id)), report_(std::move(report)) {}
  const std::string& cut_id() const { return cut_id_; }
  const ProofReport& report() const { return report_; }

 private:
  std::string cut_id_;
  ProofReport report_;
};

class NoCandidate : public Error {
 public:
  using Error::Error;
};

class BranchError : public Error {
 public:
  using Error::Error;
};

struct LocalDomain {
  std::string id;
  std::vector<std::string> vars;
  Box box;
  /// Each φ is read as φ(x) ≥ 0, over local slots x0..x{k-1}.
  std::vector<Expr> constraints;
};

struct AssemblyProblem {
  std::vector<LocalDomain> domains;
  std::vector<std::vector<std::string>> A;  // rows over the global variables
  std::vector<std::string> b;
  std::vector<std::string> c;

  std::size_t num_globals() const;
  /// (domain, slot) of global variable i.
  std::pair<std::size_t, std::size_t> locate(std::size_t i) const;
  /// Index of the first global variable of domain d.
  std::size_t offset(std::size_t d) const;
  void validate() const;
};

struct LinearCut {
  std::string id;
  std::size_t domain = 0;
  std::vector<std::string> coefficients;  // over the domain's slots
  std::string offset;                     // cut: coefficients·x ≤ offset
};

/// LP whose feasible set contains the assembly feasible set: box bounds,
/// the linear rows, and every cut after prover verification on box ∩ Φ_D.
LpProblem relax_linear(const AssemblyProblem& p, const std::vector<LinearCut>& cuts,
                       const ProverConfig& cfg = {});

struct RetainedRow {
  std::size_t index = 0;
  std::vector<std::string> coefficients;
  std::string rhs;
  double residual = 0.0;  // A x* − b, nearest rounding
  std::string w;
};

struct DualityCertificate {
  std::string M;
  std::vector<std::string> x_star;
  std::vector<std::vector<std::string>> r;  // per domain, per constraint
  std::vector<RetainedRow> rows;
  std::string t0;
  double binding_tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::size_t random_points = 0;
};

struct FitOptions {
  double binding_tolerance = 1e-8;
  std::size_t random_points = 64;
  std::uint64_t seed = 1;
  std::size_t max_corners = 1024;
  double multiplier_cap = 1e4;
};

/// Corners (at most max_corners), the center and random_points seeded
/// uniform samples of every domain box.
std::vector<std::vector<std::vector<double>>> default_test_points(const AssemblyProblem& p, const FitOptions& opts);

/// Fits r, w and t by LP over the test points, then replaces t by the
/// smallest t0 satisfying the global inequality. Throws NoCandidate when the
/// finite LP is infeasible or a domain has no test points.
DualityCertificate fit_dual(const AssemblyProblem& p, const std::vector<std::string>& x_star, const std::string& M,
                            const std::vector<std::vector<std::vector<double>>>& test_points,
                            const FitOptions& opts = {});

struct DomainVerdict {
  std::size_t domain = 0;
  ProofReport report;
};

struct DualityVerdict {
  bool certified = false;
  bool global_check = false;  // M + d·t0 − c·x* − w·(b − A x*) ≥ 0
  std::vector<DomainVerdict> domains;
  std::string reason;
};

/// The per-domain expression whose nonpositivity over the box is required.
Expr domain_inequality(const AssemblyProblem& p, const DualityCertificate& cert, std::size_t d);

/// Checks the certificate structure (signs, sizes, retained rows within
/// tolerance), the global inequality, and proves every domain inequality
/// (non-strict, margin 0). Domains run concurrently when cfg.threads > 1.
DualityVerdict verify_duality(const AssemblyProblem& p, const DualityCertificate& cert, const ProverConfig& cfg = {});

/// Bisects component `slot` of domain `d`. Throws BranchError when it is
/// degenerate.
std::pair<AssemblyProblem, AssemblyProblem> branch(const AssemblyProblem& p, std::size_t d, std::size_t slot);

struct BranchLeaf {
  std::vector<Box> boxes;  // one per domain
  bool certified = false;
  std::optional<DualityCertificate> certificate;
  std::string reason;
};

struct BranchResult {
  bool certified = false;
  std::vector<BranchLeaf> leaves;
};

/// Fit-and-verify with widest-component bisection on failure, down to
/// max_depth. x* is projected into each child's boxes.
BranchResult certify_by_branching(const AssemblyProblem& p, const std::vector<std::string>& x_star,
                                  const std::string& M, const FitOptions& fit, const ProverConfig& cfg,
                                  int max_depth);

}  // namespace rigor
