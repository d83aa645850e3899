#pragma once

// Plain double evaluation of expression trees, written independently of the
// library's evaluator, plus a generator of random well-defined expressions.

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigor/expr.hpp"

namespace oracle {

inline double eval(const rigor::Expr& e, const std::vector<double>& x) {
  using rigor::NodeKind;
  const auto& k = e.children();
  switch (e.kind()) {
    case NodeKind::Constant: return std::stod(e.constant_text());
    case NodeKind::Var: return x.at(e.var_index());
    case NodeKind::Neg: return -eval(k[0], x);
    case NodeKind::Add: return eval(k[0], x) + eval(k[1], x);
    case NodeKind::Sub: return eval(k[0], x) - eval(k[1], x);
    case NodeKind::Mul: return eval(k[0], x) * eval(k[1], x);
    case NodeKind::Div: return eval(k[0], x) / eval(k[1], x);
    case NodeKind::Pow: return std::pow(eval(k[0], x), e.exponent());
    case NodeKind::Sqrt: return std::sqrt(eval(k[0], x));
    case NodeKind::Atan: return std::atan(eval(k[0], x) / eval(k[1], x));
  }
  throw std::logic_error("unknown node");
}

/// Random expression text of bounded depth that is defined and smooth
/// everywhere: square roots and denominators are kept ≥ 1.
inline std::string random_expr_text(std::mt19937_64& rng, int arity, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_int_distribution<int> var(0, arity - 1);
  std::uniform_int_distribution<int> small(1, 5);
  auto sub = [&] { return random_expr_text(rng, arity, depth - 1); };
  switch (pick(rng)) {
    case 0: return "x" + std::to_string(var(rng));
    case 1: return std::to_string(small(rng)) + ".5";
    case 2: return "(" + sub() + " + " + sub() + ")";
    case 3: return "(" + sub() + " - " + sub() + ")";
    case 4: return "(" + sub() + " * " + sub() + ")";
    case 5: return "(" + sub() + " / (1 + pow(" + sub() + ", 2)))";
    case 6: return "pow(" + sub() + ", " + std::to_string(small(rng) % 3 + 2) + ")";
    case 7: return "sqrt(1 + pow(" + sub() + ", 2))";
    case 8: return "atan(" + sub() + ", 1 + pow(" + sub() + ", 2))";
    default: return "-" + sub();
  }
}

}  // namespace oracle
