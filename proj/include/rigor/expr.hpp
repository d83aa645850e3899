#pragma once

// Expression trees over variables x0..x{n-1}, with symbolic differentiation.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := numeral | 'x' digits | '(' expr ')'
//            | 'sqrt' '(' expr ')' | 'atan' '(' expr ',' expr ')'
//            | 'pow' '(' expr ',' ['-'] digits ')'
//
// atan(a, b) denotes atan(a / b), not the quadrant-aware atan2.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rigor/error.hpp"

namespace rigor {

enum class NodeKind { Constant, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Atan };

class Expr {
 public:
  struct Node;

  /// The constant 0.
  Expr();
  /// Constant given by its decimal text; conversion happens at evaluation.
  static Expr constant(std::string decimal_text);
  static Expr integer(std::int64_t value);
  static Expr variable(int index);

  NodeKind kind() const;
  const std::string& constant_text() const;  // Constant only
  int var_index() const;                     // Var only
  int exponent() const;                      // Pow only
  const std::vector<Expr>& children() const;

  /// Integer value when this is an integer literal constant.
  std::optional<std::int64_t> integer_value() const;
  bool is_zero() const;
  bool is_one() const;

  std::size_t depth() const;
  /// Largest variable index used, or -1.
  int max_var_index() const;
  std::string to_string() const;

  /// Node identity, stable for the lifetime of the expression.
  const Node* id() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Expr make_node(NodeKind, std::vector<Expr>, int);
};

// Constructors that fold integer constants and drop 0/1 identities. No other
// rewriting is performed.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, int k);
Expr sqrt(const Expr& a);
Expr atan(const Expr& numerator, const Expr& denominator);

/// Parses `text`; every variable index must be below `arity`. Throws
/// ParseError with the byte offset of the offending token.
Expr parse_expr(std::string_view text, int arity);

/// Symbolic partial derivative with respect to x_var.
Expr differentiate(const Expr& e, int var);

}  // namespace rigor
