#pragma once

// The cuboctahedron as a face list, built from the midpoints of a cube's
// edges: one square per cube face and one triangle per cube vertex, each
// ordered counterclockwise seen from outside.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace oracle {

inline std::vector<std::vector<int>> cuboctahedron_faces() {
  using P = std::array<double, 3>;
  std::vector<P> mids;
  for (int axis = 0; axis < 3; ++axis) {
    for (int s1 : {-1, 1}) {
      for (int s2 : {-1, 1}) {
        P p{};
        p[axis] = 0;
        p[(axis + 1) % 3] = s1;
        p[(axis + 2) % 3] = s2;
        mids.push_back(p);
      }
    }
  }
  auto dot = [](const P& a, const P& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  auto cross = [](const P& a, const P& b) {
    return P{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto face_around = [&](const P& normal) {
    // Vertices on the supporting plane dot(x, normal) = max.
    double top = -1e9;
    for (const auto& m : mids) top = std::max(top, dot(m, normal));
    std::vector<int> f;
    for (int i = 0; i < 12; ++i) {
      if (std::fabs(dot(mids[i], normal) - top) < 1e-9) f.push_back(i);
    }
    const P u = [&] {
      P a = mids[f[0]];
      const double t = dot(a, normal) / dot(normal, normal);
      for (int k = 0; k < 3; ++k) a[k] -= t * normal[k];
      return a;
    }();
    const P w = cross(normal, u);
    std::sort(f.begin(), f.end(), [&](int a, int b) {
      return std::atan2(dot(mids[a], w), dot(mids[a], u)) < std::atan2(dot(mids[b], w), dot(mids[b], u));
    });
    return f;
  };
  std::vector<std::vector<int>> faces;
  for (int axis = 0; axis < 3; ++axis) {
    for (int s : {-1, 1}) {
      P n{};
      n[axis] = s;
      faces.push_back(face_around(n));
    }
  }
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) faces.push_back(face_around(P{double(sx), double(sy), double(sz)}));
    }
  }
  return faces;
}

}  // namespace oracle
