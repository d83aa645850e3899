#include "rigor/assembly_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "rigor/digest.hpp"

namespace rigor {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, 0, line);
}

std::vector<std::string> tokens(const std::string& body) {
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

/// Applies `rename` to every identifier that is not a function name.
template <class F>
std::string rename_identifiers(const std::string& text, F rename) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      out.append(text, i, j - i);
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      const std::string id = text.substr(i, j - i);
      out += (id == "sqrt" || id == "atan" || id == "pow") ? id : rename(id);
      i = j;
    } else {
      out += ch;
      ++i;
    }
  }
  return out;
}

std::string check_decimal(const std::string& t, std::size_t line) {
  try {
    from_decimal_string(t);
  } catch (const Error& e) {
    fail(line, "bad decimal '" + t + "': " + e.what());
  }
  return t;
}

std::string negate(const std::string& t) {
  if (from_decimal_string(t) == Interval(0.0)) return t;
  if (t[0] == '-') return t.substr(1);
  if (t[0] == '+') return "-" + t.substr(1);
  return "-" + t;
}

struct PendingRow {
  std::vector<std::pair<std::string, std::string>> terms;
  std::string rhs;
  std::size_t line;
};

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

AssemblyProblem read_assembly_problem(std::istream& in) {
  AssemblyProblem p;
  std::vector<std::vector<std::optional<Interval>>> boxes;
  std::vector<PendingRow> rows;
  std::vector<std::pair<std::string, std::string>> objective;
  std::size_t objective_line = 0;
  bool in_domain = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = raw.substr(0, raw.find('#'));
    const auto tok = tokens(body);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "domain") {
      if (in_domain) fail(line, "missing 'end' before new domain");
      if (tok.size() != 2) fail(line, "expected 'domain <id>'");
      for (const auto& d : p.domains) {
        if (d.id == tok[1]) fail(line, "duplicate domain " + tok[1]);
      }
      if (tok[1].find('.') != std::string::npos) fail(line, "domain ids may not contain '.'");
      p.domains.push_back({tok[1], {}, {}, {}});
      boxes.emplace_back();
      in_domain = true;
    } else if (kw == "vars" || kw == "box" || kw == "phi" || kw == "end") {
      if (!in_domain) fail(line, "'" + kw + "' outside a domain block");
      LocalDomain& d = p.domains.back();
      auto& box = boxes.back();
      if (kw == "vars") {
        if (!d.vars.empty()) fail(line, "variables already declared");
        if (tok.size() < 2) fail(line, "expected at least one variable");
        for (std::size_t i = 1; i < tok.size(); ++i) {
          const std::string& v = tok[i];
          if (v == "sqrt" || v == "atan" || v == "pow" || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_')) {
            fail(line, "bad variable name '" + v + "'");
          }
          for (const auto& w : d.vars) {
            if (w == v) fail(line, "duplicate variable " + v);
          }
          d.vars.push_back(v);
        }
        box.assign(d.vars.size(), std::nullopt);
      } else if (kw == "box") {
        if (tok.size() != 3) fail(line, "expected 'box <var> <lo..hi>'");
        std::size_t j = 0;
        while (j < d.vars.size() && d.vars[j] != tok[1]) ++j;
        if (j == d.vars.size()) fail(line, "unknown variable " + tok[1]);
        Interval iv;
        try {
          iv = parse_interval_literal(tok[2]);
        } catch (const Error& e) {
          fail(line, "bad interval '" + tok[2] + "': " + e.what());
        }
        if (!iv.is_finite()) fail(line, "box bounds must be finite");
        box[j] = iv;
      } else if (kw == "phi") {
        if (d.vars.empty()) fail(line, "'phi' before 'vars'");
        const std::string text = body.substr(body.find("phi") + 3);
        const std::string slots = rename_identifiers(text, [&](const std::string& id) {
          for (std::size_t j = 0; j < d.vars.size(); ++j) {
            if (d.vars[j] == id) return "x" + std::to_string(j);
          }
          fail(line, "unknown variable '" + id + "' in phi");
        });
        try {
          d.constraints.push_back(parse_expr(slots, static_cast<int>(d.vars.size())));
        } catch (const ParseError& e) {
          fail(line, std::string("bad phi: ") + e.what());
        }
      } else {
        if (tok.size() != 1) fail(line, "unexpected text after 'end'");
        if (d.vars.empty()) fail(line, "domain " + d.id + " declares no variables");
        std::vector<Interval> dims;
        for (std::size_t j = 0; j < d.vars.size(); ++j) {
          if (!box[j]) fail(line, "no box for " + d.id + "." + d.vars[j]);
          dims.push_back(*box[j]);
        }
        d.box = Box(std::move(dims));
        in_domain = false;
      }
    } else if (kw == "objective") {
      if (in_domain) fail(line, "'objective' inside a domain block");
      if (tok.size() % 2 == 0) fail(line, "expected '<domain.var> <value>' pairs");
      for (std::size_t i = 1; i < tok.size(); i += 2) objective.emplace_back(tok[i], check_decimal(tok[i + 1], line));
      objective_line = line;
    } else if (kw == "row") {
      if (in_domain) fail(line, "'row' inside a domain block");
      PendingRow row;
      row.line = line;
      std::size_t i = 1;
      while (i + 1 < tok.size() && tok[i] != "<=" && tok[i] != ">=" && tok[i] != "=") {
        row.terms.emplace_back(tok[i], check_decimal(tok[i + 1], line));
        i += 2;
      }
      if (i + 2 != tok.size()) fail(line, "expected '<terms> <=|>=|= <rhs>'");
      row.rhs = check_decimal(tok[i + 1], line);
      const std::string rel = tok[i];
      if (rel == ">=") {
        for (auto& t : row.terms) t.second = negate(t.second);
        row.rhs = negate(row.rhs);
        rows.push_back(row);
      } else {
        rows.push_back(row);
        if (rel == "=") {
          for (auto& t : row.terms) t.second = negate(t.second);
          row.rhs = negate(row.rhs);
          rows.push_back(row);
        }
      }
    } else {
      fail(line, "unknown keyword '" + kw + "'");
    }
  }
  if (in_domain) fail(line, "missing 'end'");
  if (p.domains.empty()) fail(line, "no domains");

  std::map<std::string, std::size_t> global;
  for (std::size_t d = 0, k = 0; d < p.domains.size(); ++d) {
    for (const auto& v : p.domains[d].vars) global[p.domains[d].id + "." + v] = k++;
  }
  const std::size_t n = global.size();
  auto resolve = [&](const std::string& name, std::size_t at) {
    auto it = global.find(name);
    if (it == global.end()) fail(at, "unknown global variable " + name);
    return it->second;
  };
  p.c.assign(n, "0");
  std::vector<bool> seen(n, false);
  for (const auto& [name, v] : objective) {
    const std::size_t i = resolve(name, objective_line);
    if (seen[i]) fail(objective_line, "objective repeats " + name);
    seen[i] = true;
    p.c[i] = v;
  }
  for (const auto& row : rows) {
    std::vector<std::string> a(n, "0");
    std::vector<bool> used(n, false);
    for (const auto& [name, v] : row.terms) {
      const std::size_t i = resolve(name, row.line);
      if (used[i]) fail(row.line, "row repeats " + name);
      used[i] = true;
      a[i] = v;
    }
    p.A.push_back(std::move(a));
    p.b.push_back(row.rhs);
  }
  return p;
}

AssemblyProblem read_assembly_problem_file(const std::string& path) {
  auto in = open(path);
  return read_assembly_problem(in);
}

void write_assembly_problem(std::ostream& out, const AssemblyProblem& p) {
  std::vector<std::string> names;
  for (const auto& d : p.domains) {
    out << "domain " << d.id << "\n  vars";
    for (const auto& v : d.vars) {
      out << ' ' << v;
      names.push_back(d.id + "." + v);
    }
    out << '\n';
    for (std::size_t j = 0; j < d.vars.size(); ++j) out << "  box " << d.vars[j] << ' ' << format_interval(d.box[j]) << '\n';
    for (const auto& phi : d.constraints) {
      out << "  phi "
          << rename_identifiers(phi.to_string(),
                                [&](const std::string& id) { return d.vars.at(std::stoul(id.substr(1))); })
          << '\n';
    }
    out << "end\n";
  }
  out << "objective";
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (from_decimal_string(p.c[i]) != Interval(0.0)) out << ' ' << names[i] << ' ' << p.c[i];
  }
  out << '\n';
  for (std::size_t k = 0; k < p.A.size(); ++k) {
    out << "row";
    for (std::size_t i = 0; i < p.A[k].size(); ++i) {
      if (from_decimal_string(p.A[k][i]) != Interval(0.0)) out << ' ' << names[i] << ' ' << p.A[k][i];
    }
    out << " <= " << p.b[k] << '\n';
  }
}

std::string assembly_digest(const AssemblyProblem& p) {
  std::ostringstream ss;
  write_assembly_problem(ss, p);
  return fnv1a_hex(ss.str());
}

void write_certificate(std::ostream& out, const AssemblyProblem& p, const DualityCertificate& cert) {
  json j;
  j["schema"] = kCertificateSchema;
  j["problem_digest"] = assembly_digest(p);
  j["M"] = cert.M;
  j["x_star"] = cert.x_star;
  json r = json::array();
  for (std::size_t d = 0; d < cert.r.size(); ++d) {
    r.push_back({{"domain", d < p.domains.size() ? p.domains[d].id : std::to_string(d)}, {"values", cert.r[d]}});
  }
  j["r"] = r;
  json rows = json::array();
  for (const auto& row : cert.rows) {
    rows.push_back({{"index", row.index},
                    {"coefficients", row.coefficients},
                    {"rhs", row.rhs},
                    {"residual", row.residual},
                    {"w", row.w}});
  }
  j["rows"] = rows;
  j["t0"] = cert.t0;
  j["binding_tolerance"] = cert.binding_tolerance;
  j["seed"] = cert.seed;
  j["random_points"] = cert.random_points;
  out << j.dump(2) << '\n';
}

StoredCertificate read_certificate(std::istream& in) {
  StoredCertificate s;
  try {
    const json j = json::parse(in);
    if (j.at("schema").get<std::string>() != kCertificateSchema) {
      throw ParseError("unsupported certificate schema " + j.at("schema").get<std::string>(), 0);
    }
    s.problem_digest = j.at("problem_digest").get<std::string>();
    DualityCertificate& c = s.certificate;
    c.M = j.at("M").get<std::string>();
    c.x_star = j.at("x_star").get<std::vector<std::string>>();
    for (const auto& r : j.at("r")) c.r.push_back(r.at("values").get<std::vector<std::string>>());
    for (const auto& row : j.at("rows")) {
      c.rows.push_back({row.at("index").get<std::size_t>(), row.at("coefficients").get<std::vector<std::string>>(),
                        row.at("rhs").get<std::string>(), row.at("residual").get<double>(),
                        row.at("w").get<std::string>()});
    }
    c.t0 = j.at("t0").get<std::string>();
    c.binding_tolerance = j.at("binding_tolerance").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.random_points = j.at("random_points").get<std::size_t>();
    auto check = [](const std::string& t) {
      try {
        from_decimal_string(t);
      } catch (const Error& e) {
        throw ParseError("bad decimal '" + t + "' in certificate: " + e.what(), 0);
      }
    };
    check(c.M);
    check(c.t0);
    for (const auto& v : c.x_star) check(v);
    for (const auto& r : c.r) {
      for (const auto& v : r) check(v);
    }
    for (const auto& row : c.rows) {
      check(row.w);
      check(row.rhs);
      for (const auto& v : row.coefficients) check(v);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what(), 0);
  }
  return s;
}

StoredCertificate read_certificate_file(const std::string& path) {
  auto in = open(path);
  return read_certificate(in);
}

}  // namespace rigor
