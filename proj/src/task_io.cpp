#include "rigor/task_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rigor/digest.hpp"

namespace rigor {

ProofTask read_task(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  auto fail = [&](const std::string& msg) -> void { throw ParseError("line " + std::to_string(line) + ": " + msg, 0, line); };
  int arity = -1;
  std::string f_text, margin_text;
  std::size_t f_line = 0, domain_line = 0;
  std::vector<std::pair<std::string, std::size_t>> constraints;
  std::vector<Interval> domain;
  bool strict = true, have_domain = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = raw.substr(0, raw.find('#'));
    std::istringstream ss(text);
    std::string key;
    if (!(ss >> key)) continue;
    std::string rest;
    std::getline(ss, rest);
    const auto first = rest.find_first_not_of(" \t");
    rest = first == std::string::npos ? "" : rest.substr(first, rest.find_last_not_of(" \t\r") - first + 1);
    if (key == "arity") {
      if (arity >= 0) fail("arity declared twice");
      try {
        std::size_t used = 0;
        arity = std::stoi(rest, &used);
        if (used != rest.size() || arity < 1) throw std::invalid_argument("arity");
      } catch (const std::exception&) {
        fail("arity must be a positive integer");
      }
    } else if (key == "f") {
      if (!f_text.empty()) fail("f declared twice");
      if (rest.empty()) fail("empty expression");
      f_text = rest;
      f_line = line;
    } else if (key == "domain") {
      if (have_domain) fail("domain declared twice");
      std::istringstream parts(rest);
      for (std::string lit; parts >> lit;) {
        try {
          domain.push_back(parse_interval_literal(lit));
        } catch (const Error& e) {
          fail("bad interval '" + lit + "': " + e.what());
        }
        if (!domain.back().is_finite()) fail("domain intervals must be finite");
      }
      have_domain = true;
      domain_line = line;
    } else if (key == "margin") {
      if (!margin_text.empty()) fail("margin declared twice");
      margin_text = rest;
      if (margin_text.empty()) fail("missing margin");
    } else if (key == "strict") {
      if (rest == "yes" || rest == "true") {
        strict = true;
      } else if (rest == "no" || rest == "false") {
        strict = false;
      } else {
        fail("strict takes yes or no");
      }
    } else if (key == "constraint") {
      if (rest.empty()) fail("empty constraint");
      constraints.emplace_back(rest, line);
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (arity < 0) fail("missing 'arity'");
  if (f_text.empty()) fail("missing 'f'");
  if (!have_domain) fail("missing 'domain'");
  if (domain.size() != static_cast<std::size_t>(arity)) {
    line = domain_line;
    fail("domain has " + std::to_string(domain.size()) + " intervals, arity is " + std::to_string(arity));
  }
  ProofTask t;
  auto parse = [&](const std::string& s, std::size_t at) {
    try {
      return parse_expr(s, arity);
    } catch (const ParseError& e) {
      line = at;
      fail(e.what());
    }
    return Expr();
  };
  t.expr = parse(f_text, f_line);
  for (const auto& [c, at] : constraints) t.constraints.push_back(parse(c, at));
  t.domain = Box(domain);
  if (!margin_text.empty()) {
    try {
      t.margin = read_binary64(margin_text);
    } catch (const Error& e) {
      fail(std::string("bad margin: ") + e.what());
    }
    if (!(t.margin >= 0.0) || std::isinf(t.margin)) fail("margin must be finite and non-negative");
  }
  t.strict = strict;
  return t;
}

ProofTask read_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_task(in);
}

void write_task(std::ostream& out, const ProofTask& t) {
  out << "arity " << t.domain.size() << '\n';
  out << "f " << t.expr.to_string() << '\n';
  out << "domain";
  for (const auto& d : t.domain.dims()) out << ' ' << format_interval(d);
  out << '\n';
  out << "margin " << format_double(t.margin) << '\n';
  out << "strict " << (t.strict ? "yes" : "no") << '\n';
  for (const auto& c : t.constraints) out << "constraint " << c.to_string() << '\n';
}

std::string task_digest(const ProofTask& t) {
  std::ostringstream s;
  write_task(s, t);
  return fnv1a_hex(s.str());
}

}  // namespace rigor
