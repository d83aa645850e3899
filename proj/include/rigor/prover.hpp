#pragma once

// Adaptive subdivision prover for f ≤ −margin (or f < −margin) over a box.

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "rigor/evaluator.hpp"
#include "rigor/expr.hpp"
#include "rigor/taylor.hpp"

namespace rigor {

struct ProofTask {
  Expr expr;
  Box domain;
  double margin = 0.0;
  /// true: certify f < −margin on every cell; false: f ≤ −margin.
  bool strict = true;
  /// Optional side conditions φ(x) ≥ 0. The claim is only required where all
  /// of them can hold; a cell on which some φ is certified negative is
  /// discharged.
  std::vector<Expr> constraints;
};

enum class SplitRule { Widest };

struct ProverConfig {
  std::size_t max_cells = 1'000'000;
  int max_depth = 60;
  double min_width = 1e-9;
  SplitRule split = SplitRule::Widest;
  /// Report a cell as soon as f at its center already violates the claim.
  bool stop_at_counterexample = true;
  unsigned threads = 1;
  /// Keep every terminal cell (as its represented, pre-reduction box).
  bool record_leaves = false;
};

enum class ProofStatus { Proven, Undecided, EvaluationFailure };

struct ProofReport {
  ProofStatus status = ProofStatus::Proven;
  std::vector<Box> undecided;  // includes the unprocessed frontier
  std::vector<Box> failures;
  std::size_t cells_processed = 0;
  int max_depth_reached = 0;
  double best_upper_bound_seen = -std::numeric_limits<double>::infinity();
  std::vector<Box> leaves;

  /// The cells belonging to the status (empty when Proven).
  const std::vector<Box>& cells() const {
    return status == ProofStatus::EvaluationFailure ? failures : undecided;
  }
};

/// Throws Error when the task is malformed (margin < 0, negative or
/// non-finite, arity mismatch, invalid config).
ProofReport prove_negative(const ProofTask& task, const ProverConfig& cfg = {});

/// Collapses every component on which ∂f has a certified strict sign to the
/// endpoint where f is larger.
Box reduce_cell(const Evaluator& ev, const Box& cell);

/// min(Taylor bound, natural interval bound) of f over the box, or
/// std::nullopt when neither can be evaluated.
std::optional<double> cell_upper_bound(const Evaluator& ev, const Box& box);

const char* to_string(ProofStatus s);

}  // namespace rigor
