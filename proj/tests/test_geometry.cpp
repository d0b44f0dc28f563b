// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "vfvm/errors.hpp"
#include "vfvm/geometry.hpp"

using namespace vfvm;

namespace {

Simplex random_triangle(testsup::Rng& rng) {
  for (;;) {
    Simplex s = make_simplex(2, {Vec3{rng.uniform(), rng.uniform(), 0.0},
                                 Vec3{rng.uniform(), rng.uniform(), 0.0},
                                 Vec3{rng.uniform(), rng.uniform(), 0.0}});
    if (measure(s) > 1e-3) return s;
  }
}

Simplex random_tet(testsup::Rng& rng) {
  for (;;) {
    Simplex s = make_simplex(3, {Vec3{rng.uniform(), rng.uniform(), rng.uniform()},
                                 Vec3{rng.uniform(), rng.uniform(), rng.uniform()},
                                 Vec3{rng.uniform(), rng.uniform(), rng.uniform()},
                                 Vec3{rng.uniform(), rng.uniform(), rng.uniform()}});
    if (measure(s) > 1e-3) return s;
  }
}

Vec3 rotate2d(const Vec3& p, double ang, const Vec3& shift) {
  const double c = std::cos(ang), s = std::sin(ang);
  return {c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1], 0.0};
}

Vec3 rotate3d(const Vec3& p, double a, double b, const Vec3& shift) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  const Vec3 q{ca * p[0] - sa * p[1], sa * p[0] + ca * p[1], p[2]};
  return {q[0] + shift[0], cb * q[1] - sb * q[2] + shift[1], sb * q[1] + cb * q[2] + shift[2]};
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("circumball of the unit right triangle") {
  const Simplex s = make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}});
  const Ball b = circumball(s);
  CHECK(b.center[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.center[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.radius_sq == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("circumball of the unit equilateral triangle") {
  const double h = std::sqrt(3.0) / 2.0;
  const Simplex s = make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, h, 0}});
  const Ball b = circumball(s);
  CHECK(std::abs(b.center[0] - 0.5) < 1e-14);
  CHECK(std::abs(b.center[1] - 0.28867513459481287) < 1e-14);  // sqrt(3)/6
}

TEST_CASE("circumball of the corner tetrahedron") {
  // Hand solution of the 3x3 equidistance system: 2 c_k = 1 for each axis.
  const Simplex s = make_simplex(
      3, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}});
  const Ball b = circumball(s);
  CHECK(std::abs(b.center[0] - 0.5) < 1e-14);
  CHECK(std::abs(b.center[1] - 0.5) < 1e-14);
  CHECK(std::abs(b.center[2] - 0.5) < 1e-14);
  CHECK(b.radius_sq == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("collinear points are degenerate") {
  const Simplex s = make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 1, 0}, Vec3{2, 2, 0}});
  CHECK_THROWS_AS(circumball(s), DegenerateSimplex);
}

TEST_CASE("open circumball classification on the right triangle") {
  const Simplex s = make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}});
  CHECK(in_open_circumball(s, Vec3{1, 1, 0}) == Side::OnSphere);
  CHECK(in_open_circumball(s, Vec3{0.9, 0.9, 0}) == Side::Inside);
  CHECK(in_open_circumball(s, Vec3{2, 2, 0}) == Side::Outside);
}

TEST_CASE("diametrical ball of an edge") {
  const Simplex e = make_simplex(2, {Vec3{0, 0, 0}, Vec3{2, 0, 0}});
  CHECK(in_diametrical_ball(e, Vec3{1, 0.5, 0}) == Side::Inside);
  CHECK(in_diametrical_ball(e, Vec3{1, 1, 0}) == Side::OnSphere);
  CHECK(in_diametrical_ball(e, Vec3{3, 0, 0}) == Side::Outside);
}

TEST_CASE("co-circular square corners classify OnSphere") {
  const Vec3 p[4] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  for (int skip = 0; skip < 4; ++skip) {
    Simplex s;
    s.dim = 2;
    for (int i = 0; i < 4; ++i)
      if (i != skip) s.v[s.npts++] = p[i];
    CHECK(in_open_circumball(s, p[skip]) == Side::OnSphere);
  }
}

TEST_CASE("projection onto an edge") {
  const Simplex e = make_simplex(2, {Vec3{0, 0, 0}, Vec3{2, 0, 0}});
  const Projection pr = project_onto(e, Vec3{1, 1, 0});
  CHECK(std::abs(pr.point[0] - 1.0) < 1e-14);
  CHECK(std::abs(pr.point[1]) < 1e-14);
  CHECK(pr.barycentric[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pr.barycentric[1] == doctest::Approx(0.5).epsilon(1e-14));

  // Beyond the far endpoint: projection stays on the line, barycentric
  // weights report the outside position.
  const Simplex e2 = make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 0, 0}});
  const Projection pr2 = project_onto(e2, Vec3{2, 0, 0});
  CHECK(std::abs(pr2.point[0] - 2.0) < 1e-14);
  CHECK(pr2.barycentric[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(pr2.barycentric[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("projection onto a triangle in 3D") {
  const Simplex t = make_simplex(
      3, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}});
  const Projection pr = project_onto(t, Vec3{0.2, 0.2, 3.0});
  CHECK(std::abs(pr.point[0] - 0.2) < 1e-14);
  CHECK(std::abs(pr.point[1] - 0.2) < 1e-14);
  CHECK(std::abs(pr.point[2]) < 1e-14);
  for (int i = 0; i < 3; ++i) {
    CHECK(pr.barycentric[i] >= 0.0);
    CHECK(pr.barycentric[i] <= 1.0);
  }
  CHECK(std::abs(pr.barycentric[0] - 0.6) < 1e-14);
}

TEST_CASE("measures") {
  CHECK(measure(make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}})) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(measure(make_simplex(3, {Vec3{0, 0, 0}, Vec3{3, 4, 0}})) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(measure(make_simplex(3, {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                                 Vec3{0, 0, 1}})) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  // Exactly collinear: zero measure, no throw.
  CHECK(measure(make_simplex(2, {Vec3{0, 0, 0}, Vec3{1, 1, 0}, Vec3{2, 2, 0}})) == 0.0);
}

TEST_CASE("property: circumcenter equidistance on random simplices") {
  testsup::Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Simplex s = (trial % 2 == 0) ? random_triangle(rng) : random_tet(rng);
    const Ball b = circumball(s);
    for (int i = 0; i < s.npts; ++i) {
      const double r2 = dist_sq(s.v[i], b.center);
      CHECK(std::abs(r2 - b.radius_sq) <= 1e-10 * b.radius_sq);
    }
  }
}

TEST_CASE("property: ternary result invariant under vertex permutation") {
  testsup::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Simplex s = random_triangle(rng);
    const Vec3 p{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), 0.0};
    const Side ref = in_open_circumball(s, p);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& pm : perms) {
      const Simplex sp = make_simplex(2, {s.v[pm[0]], s.v[pm[1]], s.v[pm[2]]});
      CHECK(in_open_circumball(sp, p) == ref);
    }
  }
}

TEST_CASE("property: ternary result equivariant under rigid motions") {
  testsup::Rng rng(11);
  int used = 0;
  for (int trial = 0; trial < 300 && used < 150; ++trial) {
    const bool three_d = trial % 2 != 0;
    const Simplex s = three_d ? random_tet(rng) : random_triangle(rng);
    const Vec3 p = three_d
                       ? Vec3{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)}
                       : Vec3{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5), 0.0};
    const Ball b = circumball(s);
    // Skip tolerance-band cases: the band is not rigid-motion invariant.
    if (std::abs(dist_sq(p, b.center) - b.radius_sq) <= 1e-9 * b.radius_sq) continue;
    ++used;
    const Side ref = classify(b, p);
    const double a1 = rng.uniform(0.0, 6.28), a2 = rng.uniform(0.0, 6.28);
    const Vec3 shift{rng.uniform(-2, 2), rng.uniform(-2, 2), three_d ? rng.uniform(-2, 2) : 0.0};
    Simplex sm = s;
    for (int i = 0; i < s.npts; ++i)
      sm.v[i] = three_d ? rotate3d(s.v[i], a1, a2, shift) : rotate2d(s.v[i], a1, shift);
    const Vec3 pm = three_d ? rotate3d(p, a1, a2, shift) : rotate2d(p, a1, shift);
    CHECK(in_open_circumball(sm, pm) == ref);
  }
  CHECK(used >= 100);
}

TEST_CASE("cross-check against the determinant circumcenter formula") {
  testsup::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Simplex s = random_triangle(rng);
    const Ball b = circumball(s);
    const Vec3 ref = testsup::circumcenter2d(s.v[0], s.v[1], s.v[2]);
    CHECK(std::abs(b.center[0] - ref[0]) < 1e-9);
    CHECK(std::abs(b.center[1] - ref[1]) < 1e-9);
  }
}

TEST_SUITE_END();
