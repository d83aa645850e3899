#pragma once

// Compiled interval evaluators.
//
// compile() differentiates the expression symbolically (first and second
// partials), merges all resulting trees into one instruction list with
// structural common-subexpression sharing, and records which instructions
// each query needs. Queries then run that list over interval boxes.

#include <span>
#include <string>
#include <vector>

#include "rigor/expr.hpp"
#include "rigor/interval.hpp"

namespace rigor {

class CompileError : public Error {
 public:
  using Error::Error;
};

/// Interval value plus interval gradient: f + Σ Df[i]·(x_i - c_i).
struct TaylorGerm {
  Interval f;
  std::vector<Interval> Df;
};

struct CompileOptions {
  std::size_t max_depth = 256;
};

class Evaluator {
 public:
  int arity() const { return arity_; }
  const Expr& expr() const { return expr_; }

  /// Natural interval extension of f over the box.
  Interval value(std::span<const Interval> box) const;
  /// Forward-mode germ over the box (value and gradient enclosures).
  TaylorGerm germ(std::span<const Interval> box) const;
  /// Enclosure of ∂f/∂x_i over the box from the symbolic partial.
  Interval partial(std::span<const Interval> box, int i) const;
  /// Enclosures of all symbolic second partials over the box, as a dense
  /// row-major arity × arity symmetric matrix.
  std::vector<Interval> hessian(std::span<const Interval> box) const;

  /// Human-readable listing of the instruction list.
  std::string dump() const;

  std::size_t instruction_count() const { return code_.size(); }

  struct Instr {
    NodeKind op;
    int a = -1;
    int b = -1;
    int k = 0;  // Var index or Pow exponent
    Interval constant;
    std::string text;  // constant decimal text
  };

 private:
  friend Evaluator compile(const Expr& e, int arity, const CompileOptions& opts);

  void run(const std::vector<int>& program, std::span<const Interval> box,
           std::vector<Interval>& slots) const;
  void check_box(std::span<const Interval> box) const;

  Expr expr_;
  int arity_ = 0;
  std::vector<Instr> code_;
  int f_slot_ = -1;
  std::vector<int> d1_slots_;
  std::vector<int> d2_slots_;  // row-major arity × arity
  std::vector<int> value_program_;
  std::vector<std::vector<int>> partial_programs_;
  std::vector<int> hessian_program_;
};

/// Throws CompileError when the expression is deeper than opts.max_depth or
/// uses a variable index ≥ arity.
Evaluator compile(const Expr& e, int arity, const CompileOptions& opts = {});

}  // namespace rigor
