// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

namespace vfvm {

// Points live in R^3; unused trailing coordinates stay exactly 0 so the same
// kernels serve d = 1, 2, 3.
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm_sq(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }
inline double dist_sq(const Vec3& a, const Vec3& b) { return norm_sq(a - b); }

/// m-simplex embedded in an ambient space of dimension dim (1 <= m <= dim <= 3).
/// npts = m + 1 vertices are stored; slots past npts are unused.
struct Simplex {
  std::array<Vec3, 4> v{};
  int npts = 0;
  int dim = 0;
};

inline Simplex make_simplex(int dim, std::initializer_list<Vec3> pts) {
  Simplex s;
  s.dim = dim;
  for (const Vec3& p : pts) s.v[s.npts++] = p;
  return s;
}

/// Ball kept as center + squared radius; radii are never needed unsquared.
struct Ball {
  Vec3 center{};
  double radius_sq = 0.0;
};

/// Ternary sphere test result. OnSphere is a tolerance band, never an error.
enum class Side { Inside, OnSphere, Outside };

/// Geometric tolerances. `rel` widths the OnSphere band relative to the squared
/// radius; `degeneracy` bounds the scaled determinant of the circumcenter system.
struct Tolerance {
  double rel = 1e-12;
  double degeneracy = 1e-12;
};

/// Circumscribed ball of a simplex. For m < dim the center is computed in the
/// affine hull of the vertices (this is the diametrical ball of a subsimplex).
/// Throws DegenerateSimplex when the equidistance system is rank deficient.
Ball circumball(const Simplex& s, const Tolerance& tol = {});

/// Classify p against a ball: strictly inside / within the band / outside.
Side classify(const Ball& b, const Vec3& p, const Tolerance& tol = {});

/// Classify p against the open circumball of a full-dimensional simplex.
Side in_open_circumball(const Simplex& s, const Vec3& p, const Tolerance& tol = {});

/// Classify p against the diametrical (smallest circumscribed) ball of a
/// subsimplex; identical to the circumball restricted to the affine hull.
Side in_diametrical_ball(const Simplex& sub, const Vec3& p, const Tolerance& tol = {});

/// Orthogonal projection of p onto the affine hull of a subsimplex, with
/// barycentric coordinates of the projection (aligned with vertex slots).
struct Projection {
  Vec3 point{};
  std::array<double, 4> barycentric{};
};
Projection project_onto(const Simplex& sub, const Vec3& p, const Tolerance& tol = {});

/// m-dimensional Lebesgue measure. Returns 0 for degenerate simplices.
double measure(const Simplex& s);

/// Signed volume of a full-dimensional simplex (positive = positively oriented).
double signed_measure(const Simplex& s);

}  // namespace vfvm
