// SPDX-License-Identifier: Apache-2.0
#include "vfvm/geometry.hpp"

#include <cmath>

#include "vfvm/errors.hpp"

namespace vfvm {

namespace {

// Orthonormal frame of the affine hull plus local vertex coordinates.
// After Gram-Schmidt the local coordinate matrix is lower triangular:
// a[i][k] = 0 for k > i, a[i][i] = distance of edge i+1 from span of the
// previous edges. That diagonal is the scaled determinant of the
// equidistance system, so rank deficiency is detected per row.
struct LocalFrame {
  std::array<Vec3, 3> q{};             // orthonormal basis of the hull
  std::array<std::array<double, 3>, 3> a{};  // local coords of v_i - v_0
  int m = 0;
};

LocalFrame local_frame(const Simplex& s, double degeneracy_tol) {
  LocalFrame f;
  f.m = s.npts - 1;
  for (int i = 0; i < f.m; ++i) {
    Vec3 e = s.v[i + 1] - s.v[0];
    const double elen = norm(e);
    Vec3 w = e;
    // Two Gram-Schmidt sweeps; the second removes the O(eps) residue the
    // first leaves on nearly dependent edges.
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < i; ++k) w = w - dot(f.q[k], w) * f.q[k];
    const double wlen = norm(w);
    if (!(wlen > degeneracy_tol * elen))
      throw DegenerateSimplex("degenerate simplex: edge " + std::to_string(i + 1) +
                              " lies in the span of the previous edges");
    f.q[i] = (1.0 / wlen) * w;
    for (int k = 0; k <= i; ++k) f.a[i][k] = dot(f.q[k], e);
  }
  return f;
}

}  // namespace

Ball circumball(const Simplex& s, const Tolerance& tol) {
  const LocalFrame f = local_frame(s, tol.degeneracy);
  // Equidistance from v_0 and v_i in local coordinates: 2 a_i . c = |a_i|^2.
  // The system is lower triangular; forward substitution.
  std::array<double, 3> c{};
  for (int i = 0; i < f.m; ++i) {
    double rhs = 0.0;
    for (int k = 0; k <= i; ++k) rhs += f.a[i][k] * f.a[i][k];
    for (int k = 0; k < i; ++k) rhs -= 2.0 * f.a[i][k] * c[k];
    c[i] = rhs / (2.0 * f.a[i][i]);
  }
  Ball b;
  b.center = s.v[0];
  b.radius_sq = 0.0;
  for (int k = 0; k < f.m; ++k) {
    b.center = b.center + c[k] * f.q[k];
    b.radius_sq += c[k] * c[k];
  }
  return b;
}

Side classify(const Ball& b, const Vec3& p, const Tolerance& tol) {
  const double gap = dist_sq(p, b.center) - b.radius_sq;
  const double band = tol.rel * b.radius_sq;
  if (gap < -band) return Side::Inside;
  if (gap > band) return Side::Outside;
  return Side::OnSphere;
}

Side in_open_circumball(const Simplex& s, const Vec3& p, const Tolerance& tol) {
  return classify(circumball(s, tol), p, tol);
}

Side in_diametrical_ball(const Simplex& sub, const Vec3& p, const Tolerance& tol) {
  return classify(circumball(sub, tol), p, tol);
}

Projection project_onto(const Simplex& sub, const Vec3& p, const Tolerance& tol) {
  const LocalFrame f = local_frame(sub, tol.degeneracy);
  std::array<double, 3> t{};
  Projection pr;
  pr.point = sub.v[0];
  const Vec3 y = p - sub.v[0];
  for (int k = 0; k < f.m; ++k) {
    t[k] = dot(f.q[k], y);
    pr.point = pr.point + t[k] * f.q[k];
  }
  // Barycentric weights solve sum_i lambda_i a_i = t; the transpose of the
  // local coordinate matrix is upper triangular, so back substitution.
  std::array<double, 4> lam{};
  for (int i = f.m - 1; i >= 0; --i) {
    double rhs = t[i];
    for (int j = i + 1; j < f.m; ++j) rhs -= lam[j + 1] * f.a[j][i];
    lam[i + 1] = rhs / f.a[i][i];
  }
  double sum = 0.0;
  for (int i = 1; i <= f.m; ++i) sum += lam[i];
  lam[0] = 1.0 - sum;
  pr.barycentric = lam;
  return pr;
}

double measure(const Simplex& s) {
  const int m = s.npts - 1;
  if (m <= 0) return 0.0;
  if (m == s.dim) return std::abs(signed_measure(s));
  if (m == 1) return norm(s.v[1] - s.v[0]);
  // m = 2 embedded in R^3.
  return 0.5 * norm(cross(s.v[1] - s.v[0], s.v[2] - s.v[0]));
}

double signed_measure(const Simplex& s) {
  const Vec3 e1 = s.v[1] - s.v[0];
  switch (s.dim) {
    case 1:
      return e1[0];
    case 2: {
      const Vec3 e2 = s.v[2] - s.v[0];
      return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
    }
    default: {
      const Vec3 e2 = s.v[2] - s.v[0];
      const Vec3 e3 = s.v[3] - s.v[0];
      return dot(e1, cross(e2, e3)) / 6.0;
    }
  }
}

}  // namespace vfvm
