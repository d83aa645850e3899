#include "rigor/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace rigor {

struct Expr::Node {
  NodeKind kind;
  std::string text;  // Constant
  int index = 0;     // Var index or Pow exponent
  std::vector<Expr> kids;
};

Expr make_node(NodeKind kind, std::vector<Expr> kids, int index) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->index = index;
  n->kids = std::move(kids);
  return Expr(std::move(n));
}

Expr Expr::constant(std::string decimal_text) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->text = std::move(decimal_text);
  return Expr(std::move(n));
}

Expr::Expr() : Expr(constant("0")) {}

Expr Expr::integer(std::int64_t value) { return constant(std::to_string(value)); }

Expr Expr::variable(int index) {
  if (index < 0) throw Error("negative variable index");
  return make_node(NodeKind::Var, {}, index);
}

NodeKind Expr::kind() const { return node_->kind; }
const std::string& Expr::constant_text() const { return node_->text; }
int Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }

std::optional<std::int64_t> Expr::integer_value() const {
  if (node_->kind != NodeKind::Constant) return std::nullopt;
  const std::string& t = node_->text;
  if (t.empty()) return std::nullopt;
  std::size_t start = t[0] == '-' ? 1 : 0;
  if (start == t.size()) return std::nullopt;
  for (std::size_t i = start; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return std::nullopt;
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

bool Expr::is_zero() const {
  auto v = integer_value();
  return v && *v == 0;
}

bool Expr::is_one() const {
  auto v = integer_value();
  return v && *v == 1;
}

std::size_t Expr::depth() const {
  std::size_t d = 0;
  for (const auto& k : node_->kids) d = std::max(d, k.depth());
  return d + 1;
}

int Expr::max_var_index() const {
  int m = node_->kind == NodeKind::Var ? node_->index : -1;
  for (const auto& k : node_->kids) m = std::max(m, k.max_var_index());
  return m;
}

std::string Expr::to_string() const {
  const auto& k = node_->kids;
  switch (node_->kind) {
    case NodeKind::Constant: return node_->text;
    case NodeKind::Var: return "x" + std::to_string(node_->index);
    case NodeKind::Neg: return "(-" + k[0].to_string() + ")";
    case NodeKind::Add: return "(" + k[0].to_string() + " + " + k[1].to_string() + ")";
    case NodeKind::Sub: return "(" + k[0].to_string() + " - " + k[1].to_string() + ")";
    case NodeKind::Mul: return "(" + k[0].to_string() + " * " + k[1].to_string() + ")";
    case NodeKind::Div: return "(" + k[0].to_string() + " / " + k[1].to_string() + ")";
    case NodeKind::Pow:
      return "pow(" + k[0].to_string() + ", " + std::to_string(node_->index) + ")";
    case NodeKind::Sqrt: return "sqrt(" + k[0].to_string() + ")";
    case NodeKind::Atan: return "atan(" + k[0].to_string() + ", " + k[1].to_string() + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Folding constructors.

namespace {

constexpr std::int64_t kFoldLimit = std::int64_t{1} << 53;

std::optional<Expr> fold(std::optional<std::int64_t> a, std::optional<std::int64_t> b, char op) {
  if (!a || !b) return std::nullopt;
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case '+': overflow = __builtin_add_overflow(*a, *b, &r); break;
    case '-': overflow = __builtin_sub_overflow(*a, *b, &r); break;
    case '*': overflow = __builtin_mul_overflow(*a, *b, &r); break;
    default: return std::nullopt;
  }
  if (overflow || r >= kFoldLimit || r <= -kFoldLimit) return std::nullopt;
  return Expr::integer(r);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (auto f = fold(a.integer_value(), b.integer_value(), '+')) return *f;
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return make_node(NodeKind::Add, {a, b}, 0);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (auto f = fold(a.integer_value(), b.integer_value(), '-')) return *f;
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return make_node(NodeKind::Sub, {a, b}, 0);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (auto f = fold(a.integer_value(), b.integer_value(), '*')) return *f;
  if (a.is_zero() || b.is_zero()) return Expr::integer(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return make_node(NodeKind::Mul, {a, b}, 0);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero() && !b.is_zero()) return Expr::integer(0);
  if (b.is_one()) return a;
  return make_node(NodeKind::Div, {a, b}, 0);
}

Expr operator-(const Expr& a) {
  if (auto v = a.integer_value(); v && *v > -kFoldLimit && *v < kFoldLimit) {
    return Expr::integer(-*v);
  }
  return make_node(NodeKind::Neg, {a}, 0);
}

Expr pow(const Expr& a, int k) {
  if (k == 0) return Expr::integer(1);
  if (k == 1) return a;
  if (auto v = a.integer_value(); v && k > 0) {
    std::int64_t r = 1;
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      ok = !__builtin_mul_overflow(r, *v, &r) && r < kFoldLimit && r > -kFoldLimit;
    }
    if (ok) return Expr::integer(r);
  }
  return make_node(NodeKind::Pow, {a}, k);
}

Expr sqrt(const Expr& a) { return make_node(NodeKind::Sqrt, {a}, 0); }

Expr atan(const Expr& numerator, const Expr& denominator) {
  return make_node(NodeKind::Atan, {numerator, denominator}, 0);
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

class Parser {
 public:
  Parser(std::string_view text, int arity) : s_(text), arity_(arity) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("syntax error at offset " + std::to_string(pos_) + ": " + msg, pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < s_.size() ? "expected '" + std::string(1, c) + "'"
                            : "expected '" + std::string(1, c) + "' before end of input");
    }
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = make_node(NodeKind::Add, {e, term()}, 0);
      } else if (accept('-')) {
        e = make_node(NodeKind::Sub, {e, term()}, 0);
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make_node(NodeKind::Mul, {e, unary()}, 0);
      } else if (accept('/')) {
        e = make_node(NodeKind::Div, {e, unary()}, 0);
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return make_node(NodeKind::Neg, {unary()}, 0);
    return primary();
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected an operand before end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return numeral();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      const std::string_view id = identifier();
      if (id == "sqrt") {
        expect('(');
        Expr a = expr();
        expect(')');
        return make_node(NodeKind::Sqrt, {a}, 0);
      }
      if (id == "atan") {
        expect('(');
        Expr a = expr();
        expect(',');
        Expr b = expr();
        expect(')');
        return make_node(NodeKind::Atan, {a, b}, 0);
      }
      if (id == "pow") {
        expect('(');
        Expr a = expr();
        expect(',');
        const int k = integer_literal();
        expect(')');
        return make_node(NodeKind::Pow, {a}, k);
      }
      if (id.size() >= 2 && id[0] == 'x' &&
          std::all_of(id.begin() + 1, id.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        int index = 0;
        auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), index);
        if (ec != std::errc() || index >= arity_) {
          pos_ = start;
          fail("undeclared variable '" + std::string(id) + "' (arity " + std::to_string(arity_) + ")");
        }
        return Expr::variable(index);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr numeral() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t d0 = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - d0;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed numeral");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    return Expr::constant(std::string(s_.substr(start, pos_ - start)));
  }

  int integer_literal() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    int k = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("pow exponent must be an integer literal");
    }
    return k;
  }

  std::string_view s_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int arity) { return Parser(text, arity).parse(); }

// ---------------------------------------------------------------------------

Expr differentiate(const Expr& e, int var) {
  const auto& k = e.children();
  switch (e.kind()) {
    case NodeKind::Constant: return Expr::integer(0);
    case NodeKind::Var: return Expr::integer(e.var_index() == var ? 1 : 0);
    case NodeKind::Neg: return -differentiate(k[0], var);
    case NodeKind::Add: return differentiate(k[0], var) + differentiate(k[1], var);
    case NodeKind::Sub: return differentiate(k[0], var) - differentiate(k[1], var);
    case NodeKind::Mul: {
      const Expr da = differentiate(k[0], var);
      const Expr db = differentiate(k[1], var);
      return da * k[1] + k[0] * db;
    }
    case NodeKind::Div: {
      const Expr da = differentiate(k[0], var);
      const Expr db = differentiate(k[1], var);
      return (da * k[1] - k[0] * db) / pow(k[1], 2);
    }
    case NodeKind::Pow: {
      const int n = e.exponent();
      return Expr::integer(n) * pow(k[0], n - 1) * differentiate(k[0], var);
    }
    case NodeKind::Sqrt: return differentiate(k[0], var) / (Expr::integer(2) * e);
    case NodeKind::Atan: {
      // d atan(a/b) = (a'b - b'a) / (b² + a²)
      const Expr& a = k[0];
      const Expr& b = k[1];
      const Expr num = differentiate(a, var) * b - differentiate(b, var) * a;
      return num / (pow(b, 2) + pow(a, 2));
    }
  }
  return Expr::integer(0);
}

}  // namespace rigor
