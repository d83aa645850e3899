#pragma once

// Rigorous coordinates for small point configurations: pivots, rigid
// realizations and nonexistence checks.
//
// Frames are fixed as point 0 at the origin, point 1 on the positive first
// axis and point 2 in the upper half of the first coordinate plane.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rigor/interval.hpp"

namespace rigor {

class PivotInfeasible : public Error {
 public:
  using Error::Error;
};

class DegenerateAxis : public Error {
 public:
  using Error::Error;
};

using Vec3 = std::array<Interval, 3>;

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(const Interval& s, const Vec3& a);
Interval dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
Interval norm(const Vec3& a);
Vec3 point(double x, double y, double z);

struct PointConfig {
  std::vector<std::string> labels;
  std::vector<Vec3> coords;

  std::size_t index(const std::string& label) const;
  Interval distance(std::size_t i, std::size_t j) const;
};

/// Rotates point q about the line through p1, p2 until its distance to
/// `third` lies in `target`. Of the two solutions the one on the side of q's
/// current position is taken (side = +1 or -1 forces one).
PointConfig pivot(const PointConfig& config, std::size_t p1, std::size_t p2, std::size_t q, std::size_t third,
                  const Interval& target, int side = 0);

/// A point at distances d0, d1, d2 from a, b, c. side = +1 picks the
/// solution on the positive side of (b − a) × (c − a). Throws
/// PivotInfeasible when the spheres do not meet and DegenerateAxis when a,
/// b, c are collinear.
Vec3 trilaterate(const Vec3& a, const Vec3& b, const Vec3& c, const Interval& d0, const Interval& d1,
                 const Interval& d2, int side);

/// Coordinates for points whose pairwise distances are given (row-major,
/// symmetric). Points 0..2 fix the frame; later points are placed from
/// points 0..2, using point 3 to choose the side when available.
PointConfig rigid_realization(const std::vector<std::string>& labels, const std::vector<std::vector<Interval>>& d);

/// 288·V² of the simplex with edges d01, d02, d03, d12, d13, d23.
Interval cayley_menger(const std::array<Interval, 6>& edges);

enum class VerdictKind { NoSuchConfiguration, Inconclusive };

struct GeomVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string reason;
  std::optional<Interval> witness;  // the distance that violates its bound
  std::optional<PointConfig> config;
};

const char* to_string(VerdictKind k);

/// Edges in order d01, d02, d03, d12, d13, d23, each an enclosure of that
/// edge's upper bound. The simplex is realized with every edge at its bound
/// and the point placed at distance r from vertices 0, 1, 2 on the side of
/// vertex 3.
GeomVerdict check_simplex_interior_point(const std::array<Interval, 6>& edges, const Interval& r);

/// Planar version: edges d01, d02, d12; the point is at distance r from
/// vertices 0 and 1 on the side of vertex 2.
GeomVerdict check_face_escape(const std::array<Interval, 3>& edges, const Interval& r);

/// Triangle of circumradius at most r1, segment of length at most r2 through
/// its interior, endpoints at distance at least r3 from every vertex.
GeomVerdict check_segment_through_triangle(const Interval& r1, const Interval& r2, const Interval& r3);

struct DistanceSpec {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> dmin;  // symmetric, diagonal ignored
  std::vector<std::vector<double>> dmax;  // +inf allowed

  void validate() const;
};

/// Throws ParseError with the line number.
DistanceSpec read_distance_spec(std::istream& in);
DistanceSpec read_distance_spec_file(const std::string& path);
void write_distance_spec(std::ostream& out, const DistanceSpec& s);

enum class Linking { Linked, NotLinked, Unknown };

/// Whether the line through o and q crosses the interior of triangle
/// p1 p2 p3, from the signs of det(q − o, pi − o, pj − o).
Linking line_links_triangle(const Vec3& o, const Vec3& q, const Vec3& p1, const Vec3& p2, const Vec3& p3);

struct SweepOptions {
  std::size_t max_cells = 1'000'000;
  double min_width = 1e-6;
};

/// Five points 0, p1, p2, p3, q in label order; the line through 0 and q must
/// link triangle p1 p2 p3. A triangle-inequality check runs first, then an
/// interval sweep over the frame coordinates.
GeomVerdict check_linked_line(const DistanceSpec& spec, const SweepOptions& opts = {});

}  // namespace rigor
