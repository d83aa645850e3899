#include "rigor/geom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rigor {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(const Interval& s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
Interval dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Interval norm(const Vec3& a) { return sqrt_interval(sqr(a[0]) + sqr(a[1]) + sqr(a[2])).value; }
Vec3 point(double x, double y, double z) { return {Interval(x), Interval(y), Interval(z)}; }

namespace {

Vec3 scaled(const Vec3& a, const Interval& inv) { return {a[0] / inv, a[1] / inv, a[2] / inv}; }

/// Unit vector along a; throws DegenerateAxis when |a| may vanish.
Vec3 unit(const Vec3& a, const char* what) {
  const Interval n = norm(a);
  if (!(n.lo() > 0.0)) throw DegenerateAxis(what);
  return scaled(a, n);
}

Interval root(const Interval& sq, const char* what) {
  if (sq.hi() < 0.0) throw PivotInfeasible(what);
  return sqrt_interval(sq).value;
}

}  // namespace

std::size_t PointConfig::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw Error("no point labelled " + label);
}

Interval PointConfig::distance(std::size_t i, std::size_t j) const { return norm(coords.at(i) - coords.at(j)); }

PointConfig pivot(const PointConfig& config, std::size_t p1, std::size_t p2, std::size_t q, std::size_t third,
                  const Interval& target, int side) {
  const Vec3& A = config.coords.at(p1);
  const Vec3& Q = config.coords.at(q);
  const Vec3& T = config.coords.at(third);
  const Vec3 n = unit(config.coords.at(p2) - A, "pivot axis endpoints coincide");
  const Vec3 c = A + dot(Q - A, n) * n;
  const Interval rho = norm(Q - c);
  if (!(rho.lo() > 0.0)) throw DegenerateAxis("moving point lies on the pivot axis");
  const Vec3 tc = T - c;
  const Vec3 w = tc - dot(tc, n) * n;
  const Interval R = norm(w);
  if (!(R.lo() > 0.0)) throw PivotInfeasible("target point lies on the pivot axis");
  const Vec3 e1 = scaled(w, R);
  const Vec3 e2 = cross(n, e1);
  // |q − T|² = |c − T|² + ρ² − 2xR with q − c = x·e1 + y·e2.
  const Interval x = (dot(tc, tc) + sqr(rho) - sqr(target)) / (Interval(2.0) * R);
  const Interval y = root(sqr(rho) - sqr(x), "target distance is not reached on the pivot circle");
  if (side == 0) {
    const Interval y0 = dot(Q - c, e2);
    side = y0.hi() < 0.0 ? -1 : 1;
  }
  PointConfig out = config;
  out.coords[q] = c + x * e1 + (Interval(static_cast<double>(side)) * y) * e2;
  return out;
}

Vec3 trilaterate(const Vec3& a, const Vec3& b, const Vec3& c, const Interval& d0, const Interval& d1,
                 const Interval& d2, int side) {
  const Vec3 ab = b - a, ac = c - a;
  const Interval d = norm(ab);
  const Vec3 ex = unit(ab, "reference points coincide");
  const Interval i = dot(ex, ac);
  const Vec3 ey = unit(ac - i * ex, "reference points are collinear");
  const Vec3 ez = cross(ex, ey);
  const Interval j = dot(ey, ac);
  const Interval two(2.0);
  const Interval x = (sqr(d0) - sqr(d1) + sqr(d)) / (two * d);
  const Interval y = (sqr(d0) - sqr(d2) + sqr(i) + sqr(j)) / (two * j) - (i / j) * x;
  const Interval z = root(sqr(d0) - sqr(x) - sqr(y), "the three spheres do not meet");
  return a + x * ex + y * ey + (Interval(static_cast<double>(side)) * z) * ez;
}

PointConfig rigid_realization(const std::vector<std::string>& labels, const std::vector<std::vector<Interval>>& d) {
  const std::size_t n = labels.size();
  if (n < 2 || d.size() != n) throw Error("rigid_realization needs at least two points and a full distance table");
  for (const auto& row : d) {
    if (row.size() != n) throw Error("distance table must be square");
  }
  PointConfig out;
  out.labels = labels;
  out.coords.push_back(point(0, 0, 0));
  out.coords.push_back({d[0][1], Interval(0.0), Interval(0.0)});
  if (n == 2) return out;
  const Interval x = (sqr(d[0][1]) + sqr(d[0][2]) - sqr(d[1][2])) / (Interval(2.0) * d[0][1]);
  const Interval y = root(sqr(d[0][2]) - sqr(x), "the first three distances violate the triangle inequality");
  out.coords.push_back({x, y, Interval(0.0)});
  for (std::size_t k = 3; k < n; ++k) {
    const auto& p = out.coords;
    const Vec3 up = trilaterate(p[0], p[1], p[2], d[0][k], d[1][k], d[2][k], 1);
    if (k == 3) {
      out.coords.push_back(up);
      continue;
    }
    const Vec3 down = trilaterate(p[0], p[1], p[2], d[0][k], d[1][k], d[2][k], -1);
    const bool up_ok = intersect(norm(up - p[3]), d[3][k]).has_value();
    const bool down_ok = intersect(norm(down - p[3]), d[3][k]).has_value();
    if (!up_ok && !down_ok) throw PivotInfeasible("distances to point 3 are inconsistent for " + labels[k]);
    out.coords.push_back(up_ok ? up : down);
  }
  return out;
}

Interval cayley_menger(const std::array<Interval, 6>& e) {
  const Interval a = sqr(e[0]), b = sqr(e[1]), c = sqr(e[2]), d = sqr(e[3]), f = sqr(e[4]), g = sqr(e[5]);
  const Interval Z(0.0), O(1.0);
  const std::array<std::array<Interval, 5>, 5> m{{{Z, O, O, O, O},
                                                  {O, Z, a, b, c},
                                                  {O, a, Z, d, f},
                                                  {O, b, d, Z, g},
                                                  {O, c, f, g, Z}}};
  // Laplace expansion over permutations.
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  Interval det(0.0);
  do {
    int inversions = 0;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) inversions += perm[i] > perm[j];
    }
    Interval term(1.0);
    for (int i = 0; i < 5; ++i) term = term * m[i][perm[i]];
    det = inversions % 2 ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

const char* to_string(VerdictKind k) {
  return k == VerdictKind::NoSuchConfiguration ? "NoSuchConfiguration" : "Inconclusive";
}

namespace {

GeomVerdict inconclusive(std::string why) {
  GeomVerdict v;
  v.reason = std::move(why);
  return v;
}

void require_positive(const Interval& x, const char* what) {
  if (!(x.lo() > 0.0) || !x.is_finite()) throw DomainError(std::string(what) + " must be positive and finite");
}

GeomVerdict judge(const Interval& d, const Interval& r, PointConfig config) {
  GeomVerdict v;
  v.witness = d;
  v.config = std::move(config);
  if (d.hi() < r.lo()) {
    v.kind = VerdictKind::NoSuchConfiguration;
    v.reason = "the extremal point is closer than r to the remaining vertex";
  } else {
    v.reason = "the extremal configuration meets every bound";
  }
  return v;
}

}  // namespace

GeomVerdict check_simplex_interior_point(const std::array<Interval, 6>& edges, const Interval& r) {
  for (const auto& e : edges) require_positive(e, "edge bounds");
  if (!(r.lo() >= 0.0) || !r.is_finite()) throw DomainError("r must be finite and non-negative");
  const std::array<Interval, 6>& caps = edges;
  const Interval cm = cayley_menger(caps);
  if (cm.hi() < 0.0) {
    GeomVerdict v;
    v.kind = VerdictKind::NoSuchConfiguration;
    v.reason = "Unrealizable: the Cayley-Menger determinant of the capped edges is negative";
    v.witness = cm;
    return v;
  }
  if (!(cm.lo() > 0.0)) return inconclusive("realizability of the capped simplex is undecided");
  const std::vector<std::vector<Interval>> d{{Interval(0.0), caps[0], caps[1], caps[2]},
                                             {caps[0], Interval(0.0), caps[3], caps[4]},
                                             {caps[1], caps[3], Interval(0.0), caps[5]},
                                             {caps[2], caps[4], caps[5], Interval(0.0)}};
  PointConfig s = rigid_realization({"v0", "v1", "v2", "v3"}, d);
  Vec3 q;
  try {
    q = trilaterate(s.coords[0], s.coords[1], s.coords[2], r, r, r, 1);
  } catch (const PivotInfeasible&) {
    return inconclusive("no point is at distance r from three vertices");
  }
  s.labels.push_back("q");
  s.coords.push_back(q);
  const Interval d3 = s.distance(4, 3);
  return judge(d3, r, std::move(s));
}

GeomVerdict check_face_escape(const std::array<Interval, 3>& edges, const Interval& r) {
  for (const auto& e : edges) require_positive(e, "edge bounds");
  if (!(r.lo() >= 0.0) || !r.is_finite()) throw DomainError("r must be finite and non-negative");
  const Interval &a = edges[0], &b = edges[1], &c = edges[2];
  // 16·area² by Heron's formula.
  const Interval heron = (a + b + c) * (b + c - a) * (a + c - b) * (a + b - c);
  if (heron.hi() < 0.0) {
    GeomVerdict v;
    v.kind = VerdictKind::NoSuchConfiguration;
    v.reason = "Unrealizable: the capped edges violate the triangle inequality";
    v.witness = heron;
    return v;
  }
  if (!(heron.lo() > 0.0)) return inconclusive("realizability of the capped triangle is undecided");
  PointConfig t = rigid_realization({"v0", "v1", "v2"}, {{Interval(0.0), a, b}, {a, Interval(0.0), c}, {b, c, Interval(0.0)}});
  const Interval x = a / Interval(2.0);
  const Interval ysq = sqr(r) - sqr(x);
  if (ysq.hi() < 0.0) return inconclusive("no point is at distance r from two vertices");
  t.labels.push_back("q");
  t.coords.push_back({x, sqrt_interval(ysq).value, Interval(0.0)});
  const Interval d2 = t.distance(3, 2);
  return judge(d2, r, std::move(t));
}

GeomVerdict check_segment_through_triangle(const Interval& r1, const Interval& r2, const Interval& r3) {
  require_positive(r1, "r1");
  if (!(r2.lo() >= 0.0) || !(r3.lo() >= 0.0)) throw DomainError("r2 and r3 must be non-negative");
  if (!r3.is_finite()) throw DomainError("r3 must be finite");
  // Equilateral triangle on the circle of radius r1; endpoints at distance
  // exactly r3 from all three vertices, one on each side.
  const Interval& R = r1;
  const Interval half = R / Interval(2.0);
  const Interval h = R * sqrt_interval(Interval(3.0)).value / Interval(2.0);
  PointConfig c;
  c.labels = {"v0", "v1", "v2"};
  c.coords = {{R, Interval(0.0), Interval(0.0)}, {-half, h, Interval(0.0)}, {-half, -h, Interval(0.0)}};
  const Interval& d = r3;
  Vec3 top, bottom;
  try {
    top = trilaterate(c.coords[0], c.coords[1], c.coords[2], d, d, d, 1);
    bottom = trilaterate(c.coords[0], c.coords[1], c.coords[2], d, d, d, -1);
  } catch (const PivotInfeasible&) {
    return inconclusive("no endpoint is at distance r3 from every vertex");
  }
  c.labels.push_back("e0");
  c.labels.push_back("e1");
  c.coords.push_back(top);
  c.coords.push_back(bottom);
  GeomVerdict v;
  v.witness = c.distance(3, 4);
  v.config = std::move(c);
  if (r2.is_finite() && v.witness->lo() > r2.hi()) {
    v.kind = VerdictKind::NoSuchConfiguration;
    v.reason = "the shortest admissible segment is longer than r2";
  } else {
    v.reason = "a segment of length at most r2 is not excluded";
  }
  return v;
}

void DistanceSpec::validate() const {
  const std::size_t n = labels.size();
  if (dmin.size() != n || dmax.size() != n) throw Error("distance tables must match the labels");
  for (std::size_t i = 0; i < n; ++i) {
    if (dmin[i].size() != n || dmax[i].size() != n) throw Error("distance tables must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dmin[i][j] != dmin[j][i] || dmax[i][j] != dmax[j][i]) throw Error("distance tables must be symmetric");
      if (!(dmin[i][j] >= 0.0) || std::isinf(dmin[i][j])) throw Error("dmin must be finite and non-negative");
      if (!(dmax[i][j] >= dmin[i][j])) throw Error("dmin exceeds dmax for " + labels[i] + " " + labels[j]);
    }
  }
}

DistanceSpec read_distance_spec(std::istream& in) {
  DistanceSpec s;
  std::string raw;
  std::size_t line = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(line) + ": " + msg, 0, line); };
  auto value = [&](const std::string& t) {
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    try {
      return read_binary64(t);
    } catch (const Error& e) {
      fail("bad distance '" + t + "': " + e.what());
    }
    return 0.0;
  };
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ss(raw.substr(0, raw.find('#')));
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "points") {
      if (!s.labels.empty()) fail("points declared twice");
      s.labels.assign(tok.begin() + 1, tok.end());
      const std::size_t n = s.labels.size();
      if (n < 2) fail("at least two points are needed");
      s.dmin.assign(n, std::vector<double>(n, 0.0));
      s.dmax.assign(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
      continue;
    }
    if (s.labels.empty()) fail("'points' must come first");
    if (tok.size() != 4) fail("expected '<label> <label> <dmin> <dmax>'");
    auto find = [&](const std::string& l) {
      auto it = std::find(s.labels.begin(), s.labels.end(), l);
      if (it == s.labels.end()) fail("unknown point " + l);
      return static_cast<std::size_t>(it - s.labels.begin());
    };
    const std::size_t i = find(tok[0]), j = find(tok[1]);
    if (i == j) fail("a pair needs two different points");
    const double lo = value(tok[2]), hi = value(tok[3]);
    if (std::isinf(lo) || lo < 0.0) fail("dmin must be finite and non-negative");
    if (!(hi >= lo)) fail("dmin exceeds dmax");
    s.dmin[i][j] = s.dmin[j][i] = lo;
    s.dmax[i][j] = s.dmax[j][i] = hi;
  }
  if (s.labels.empty()) throw ParseError("no 'points' line", 0, line);
  return s;
}

DistanceSpec read_distance_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_distance_spec(in);
}

void write_distance_spec(std::ostream& out, const DistanceSpec& s) {
  out << "points";
  for (const auto& l : s.labels) out << ' ' << l;
  out << '\n';
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < s.labels.size(); ++j) {
      out << s.labels[i] << ' ' << s.labels[j] << ' ' << format_double(s.dmin[i][j]) << ' '
          << (std::isinf(s.dmax[i][j]) ? std::string("inf") : format_double(s.dmax[i][j])) << '\n';
    }
  }
}

Linking line_links_triangle(const Vec3& o, const Vec3& q, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  const Vec3 u = q - o, a = p1 - o, b = p2 - o, c = p3 - o;
  const Interval d[3] = {dot(u, cross(a, b)), dot(u, cross(b, c)), dot(u, cross(c, a))};
  const bool all_pos = d[0].lo() > 0.0 && d[1].lo() > 0.0 && d[2].lo() > 0.0;
  const bool all_neg = d[0].hi() < 0.0 && d[1].hi() < 0.0 && d[2].hi() < 0.0;
  if (all_pos || all_neg) return Linking::Linked;
  const bool may_pos = d[0].hi() > 0.0 && d[1].hi() > 0.0 && d[2].hi() > 0.0;
  const bool may_neg = d[0].lo() < 0.0 && d[1].lo() < 0.0 && d[2].lo() < 0.0;
  if (!may_pos && !may_neg) return Linking::NotLinked;
  return Linking::Unknown;
}

namespace {

struct Cell {
  std::array<Interval, 9> v;  // x1 | x2 y2 | x3 y3 z3 | xq yq zq
};

std::array<Vec3, 5> points_of(const Cell& c) {
  const Interval Z(0.0);
  return {Vec3{Z, Z, Z}, Vec3{c.v[0], Z, Z}, Vec3{c.v[1], c.v[2], Z}, Vec3{c.v[3], c.v[4], c.v[5]},
          Vec3{c.v[6], c.v[7], c.v[8]}};
}

enum class CellState { Excluded, Feasible, Open };

CellState classify(const Cell& c, const DistanceSpec& s) {
  const auto p = points_of(c);
  bool certain = true;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      const Vec3 d = p[i] - p[j];
      const Interval d2 = sqr(d[0]) + sqr(d[1]) + sqr(d[2]);
      const Interval lo2 = sqr(Interval(s.dmin[i][j]));
      if (d2.hi() < lo2.lo()) return CellState::Excluded;
      if (d2.lo() < lo2.hi()) certain = false;
      if (!std::isinf(s.dmax[i][j])) {
        const Interval hi2 = sqr(Interval(s.dmax[i][j]));
        if (d2.lo() > hi2.hi()) return CellState::Excluded;
        if (d2.hi() > hi2.lo()) certain = false;
      }
    }
  }
  const Linking l = line_links_triangle(p[0], p[4], p[1], p[2], p[3]);
  if (l == Linking::NotLinked) return CellState::Excluded;
  return certain && l == Linking::Linked ? CellState::Feasible : CellState::Open;
}

}  // namespace

GeomVerdict check_linked_line(const DistanceSpec& spec, const SweepOptions& opts) {
  spec.validate();
  if (spec.labels.size() != 5) throw Error("the linked-line problem has exactly five points");
  const std::size_t n = 5;
  // Shortest-path upper bounds and the lower bounds they imply.
  std::vector<std::vector<double>> U = spec.dmax, L = spec.dmin;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) U[i][j] = std::min(U[i][j], round::add_up(U[i][k], U[k][j]));
      }
    }
  }
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || k == i || k == j || std::isinf(U[k][j])) continue;
          L[i][j] = std::max(L[i][j], round::sub_down(L[i][k], U[k][j]));
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (L[i][j] > U[i][j]) {
        GeomVerdict v;
        v.kind = VerdictKind::NoSuchConfiguration;
        v.reason = "triangle inequality: " + spec.labels[i] + "-" + spec.labels[j] + " needs at least " +
                   format_double(L[i][j]) + " but every path allows at most " + format_double(U[i][j]);
        v.witness = Interval(U[i][j]);
        return v;
      }
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (std::isinf(U[0][k])) return inconclusive("distance from " + spec.labels[0] + " to " + spec.labels[k] + " is unbounded");
  }
  Cell root;
  root.v[0] = Interval(L[0][1], U[0][1]);
  root.v[1] = Interval(-U[0][2], U[0][2]);
  root.v[2] = Interval(0.0, U[0][2]);
  for (int k = 0; k < 3; ++k) root.v[3 + k] = Interval(k == 2 ? 0.0 : -U[0][3], U[0][3]);
  for (int k = 0; k < 3; ++k) root.v[6 + k] = Interval(-U[0][4], U[0][4]);

  std::vector<Cell> stack{root};
  std::size_t cells = 0;
  while (!stack.empty()) {
    if (++cells > opts.max_cells) return inconclusive("sweep budget exhausted after " + std::to_string(opts.max_cells) + " cells");
    const Cell c = stack.back();
    stack.pop_back();
    const CellState st = classify(c, spec);
    if (st == CellState::Excluded) continue;
    Cell centre = c;
    for (auto& x : centre.v) x = Interval(x.mid());
    if (st == CellState::Feasible || classify(centre, spec) == CellState::Feasible) {
      GeomVerdict v = inconclusive("a feasible linked configuration exists");
      const auto p = points_of(st == CellState::Feasible ? c : centre);
      v.config = PointConfig{spec.labels, {p.begin(), p.end()}};
      return v;
    }
    std::size_t widest = 0;
    for (std::size_t k = 1; k < 9; ++k) {
      if (c.v[k].width() > c.v[widest].width()) widest = k;
    }
    if (c.v[widest].width() < opts.min_width) return inconclusive("an undecided cell reached the minimum width");
    const double m = c.v[widest].mid();
    Cell a = c, b = c;
    a.v[widest] = Interval(c.v[widest].lo(), m);
    b.v[widest] = Interval(m, c.v[widest].hi());
    stack.push_back(b);
    stack.push_back(a);
  }
  GeomVerdict v;
  v.kind = VerdictKind::NoSuchConfiguration;
  v.reason = "every cell of the sweep violates a distance or linking constraint (" + std::to_string(cells) + " cells)";
  return v;
}

}  // namespace rigor
