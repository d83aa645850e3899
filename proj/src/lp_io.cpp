#include "rigor/lp_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace rigor {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, 0, line);
}

std::size_t parse_index(const std::string& t, std::size_t limit, std::size_t line, const char* what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(t, &pos);
  } catch (const std::exception&) {
    fail(line, std::string("expected ") + what + " index, got '" + t + "'");
  }
  if (pos != t.size() || t[0] == '-') fail(line, std::string("expected ") + what + " index, got '" + t + "'");
  if (v >= limit) fail(line, std::string(what) + " index " + t + " out of range");
  return v;
}

Interval parse_value(const std::string& t, std::size_t line) {
  Interval v;
  try {
    v = parse_interval_literal(t);
  } catch (const Error& e) {
    fail(line, std::string("bad value '") + t + "': " + e.what());
  }
  if (!v.is_finite()) fail(line, "values must be finite");
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

LpProblem read_lp_problem(std::istream& in) {
  LpProblem p;
  enum class Section { None, Obj, Eq, Ineq, Bounds, Done } sec = Section::None;
  bool have_vars = false;
  std::size_t n = 0;
  std::vector<char> bounded;
  std::string line;
  std::size_t lineno = 0;
  auto need_vars = [&](std::size_t ln) {
    if (!have_vars) fail(ln, "VARS must come first");
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto tk = tokens(line);
    if (tk.empty()) continue;
    if (sec == Section::Done) fail(lineno, "content after END");
    const std::string& head = tk[0];
    if (head == "VARS") {
      if (have_vars) fail(lineno, "duplicate VARS");
      if (tk.size() != 2) fail(lineno, "expected 'VARS n'");
      n = parse_index(tk[1], std::size_t(-1), lineno, "variable count");
      have_vars = true;
      p.c.assign(n, Interval(0.0));
      p.var_bounds.assign(n, Interval(0.0));
      bounded.assign(n, 0);
      continue;
    }
    if (head == "OBJ" || head == "BOUNDS" || head == "END") {
      need_vars(lineno);
      if (tk.size() != 1) fail(lineno, "unexpected tokens after " + head);
      sec = head == "OBJ" ? Section::Obj : head == "BOUNDS" ? Section::Bounds : Section::Done;
      continue;
    }
    if (head == "EQ" || head == "INEQ") {
      need_vars(lineno);
      if (tk.size() != 2) fail(lineno, "expected '" + head + " m'");
      const std::size_t m = parse_index(tk[1], std::size_t(-1), lineno, "row count");
      auto& A = head == "EQ" ? p.Aeq : p.Aineq;
      auto& b = head == "EQ" ? p.beq : p.bineq;
      if (!A.empty()) fail(lineno, "duplicate " + head + " section");
      A.assign(m, std::vector<Interval>(n, Interval(0.0)));
      b.assign(m, Interval(0.0));
      sec = head == "EQ" ? Section::Eq : Section::Ineq;
      continue;
    }
    switch (sec) {
      case Section::None: fail(lineno, "expected a section keyword, got '" + head + "'");
      case Section::Obj: {
        if (tk.size() != 2) fail(lineno, "expected 'column value'");
        p.c[parse_index(tk[0], n, lineno, "column")] = parse_value(tk[1], lineno);
        break;
      }
      case Section::Eq:
      case Section::Ineq: {
        auto& A = sec == Section::Eq ? p.Aeq : p.Aineq;
        auto& b = sec == Section::Eq ? p.beq : p.bineq;
        if (tk.size() != 3) fail(lineno, "expected 'row column value' or 'rhs row value'");
        if (tk[0] == "rhs") {
          b[parse_index(tk[1], b.size(), lineno, "row")] = parse_value(tk[2], lineno);
        } else {
          const std::size_t i = parse_index(tk[0], A.size(), lineno, "row");
          A[i][parse_index(tk[1], n, lineno, "column")] = parse_value(tk[2], lineno);
        }
        break;
      }
      case Section::Bounds: {
        if (tk.size() != 2) fail(lineno, "expected 'column lo..hi'");
        const std::size_t j = parse_index(tk[0], n, lineno, "column");
        Interval iv;
        try {
          iv = parse_interval_literal(tk[1]);
        } catch (const Error& e) {
          fail(lineno, std::string("bad interval '") + tk[1] + "': " + e.what());
        }
        if (!iv.is_finite()) fail(lineno, "variable bounds must be finite");
        p.var_bounds[j] = iv;
        bounded[j] = 1;
        break;
      }
      case Section::Done: break;
    }
  }
  if (!have_vars) fail(lineno, "missing VARS");
  if (sec != Section::Done) fail(lineno, "missing END");
  for (std::size_t j = 0; j < n; ++j) {
    if (!bounded[j]) fail(lineno, "variable " + std::to_string(j) + " has no BOUNDS entry");
  }
  p.validate();
  return p;
}

LpProblem read_lp_problem_file(const std::string& path) {
  auto in = open(path);
  return read_lp_problem(in);
}

void write_lp_problem(std::ostream& out, const LpProblem& p) {
  const std::size_t n = p.num_vars();
  out << "VARS " << n << "\nOBJ\n";
  for (std::size_t j = 0; j < n; ++j) {
    if (p.c[j] != Interval(0.0)) out << j << " " << format_interval(p.c[j]) << "\n";
  }
  auto block = [&](const char* name, const IntervalMatrix& A, const std::vector<Interval>& b) {
    out << name << " " << A.size() << "\n";
    for (std::size_t i = 0; i < A.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (A[i][j] != Interval(0.0)) out << i << " " << j << " " << format_interval(A[i][j]) << "\n";
      }
      if (b[i] != Interval(0.0)) out << "rhs " << i << " " << format_interval(b[i]) << "\n";
    }
  };
  block("EQ", p.Aeq, p.beq);
  block("INEQ", p.Aineq, p.bineq);
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) out << j << " " << format_interval(p.var_bounds[j]) << "\n";
  out << "END\n";
}

RawDual read_dual(std::istream& in) {
  RawDual d;
  bool seen_y = false;
  bool seen_z = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk[0] != "y" && tk[0] != "z") fail(lineno, "expected a line starting with 'y' or 'z'");
    bool& seen = tk[0] == "y" ? seen_y : seen_z;
    if (seen) fail(lineno, "duplicate '" + tk[0] + "' line");
    seen = true;
    auto& v = tk[0] == "y" ? d.y : d.z;
    for (std::size_t k = 1; k < tk.size(); ++k) {
      try {
        v.push_back(read_binary64(tk[k]));
      } catch (const Error& e) {
        fail(lineno, std::string("bad number '") + tk[k] + "': " + e.what());
      }
    }
  }
  return d;
}

RawDual read_dual_file(const std::string& path) {
  auto in = open(path);
  return read_dual(in);
}

void write_dual(std::ostream& out, const std::vector<double>& y, const std::vector<double>& z) {
  out << "y";
  for (double v : y) out << " " << format_double(v);
  out << "\nz";
  for (double v : z) out << " " << format_double(v);
  out << "\n";
}

}  // namespace rigor
