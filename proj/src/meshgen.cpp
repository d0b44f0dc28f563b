// SPDX-License-Identifier: Apache-2.0
#include "vfvm/meshgen.hpp"

#include <cmath>
#include <string>

#include "vfvm/errors.hpp"
#include "vfvm/rng.hpp"

namespace vfvm {

namespace {

void check_ascending(const std::vector<double>& v, const char* name) {
  if (v.size() < 2) throw InvalidMesh(std::string(name) + ": need at least 2 coordinates");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw InvalidMesh(std::string(name) + ": coordinates must ascend");
}

}  // namespace

Mesh structured_grid_coords(const std::vector<double>& xs, const std::vector<double>& ys,
                            DiagonalRule rule) {
  check_ascending(xs, "xs");
  check_ascending(ys, "ys");
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  Mesh m;
  m.dim = 2;
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.vertices.push_back({xs[i], ys[j], 0.0});

  for (int qj = 0; qj < ny; ++qj)
    for (int qi = 0; qi < nx; ++qi) {
      const int ll = vid(qi, qj), lr = vid(qi + 1, qj);
      const int ur = vid(qi + 1, qj + 1), ul = vid(qi, qj + 1);
      const bool main_diag = rule == DiagonalRule::Uniform || (qi + qj) % 2 == 0;
      if (main_diag) {
        m.cells.push_back({{ll, lr, ur, -1}, 1});
        m.cells.push_back({{ll, ur, ul, -1}, 1});
      } else {
        m.cells.push_back({{ll, lr, ul, -1}, 1});
        m.cells.push_back({{lr, ur, ul, -1}, 1});
      }
    }

  for (int i = 0; i < nx; ++i) m.facets.push_back({{vid(i, 0), vid(i + 1, 0), -1}, 1});
  for (int j = 0; j < ny; ++j) m.facets.push_back({{vid(nx, j), vid(nx, j + 1), -1}, 2});
  for (int i = 0; i < nx; ++i) m.facets.push_back({{vid(i, ny), vid(i + 1, ny), -1}, 3});
  for (int j = 0; j < ny; ++j) m.facets.push_back({{vid(0, j), vid(0, j + 1), -1}, 4});
  validate_mesh(m);
  return m;
}

Mesh structured_grid(int nx, int ny, double lx, double ly, DiagonalRule rule) {
  if (nx < 1 || ny < 1) throw InvalidMesh("grid needs at least one quad per direction");
  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = lx * i / nx;
  for (int j = 0; j <= ny; ++j) ys[j] = ly * j / ny;
  return structured_grid_coords(xs, ys, rule);
}

Mesh line_mesh(const std::vector<double>& xs) {
  check_ascending(xs, "xs");
  Mesh m;
  m.dim = 1;
  for (double x : xs) m.vertices.push_back({x, 0.0, 0.0});
  for (int i = 0; i + 1 < static_cast<int>(xs.size()); ++i)
    m.cells.push_back({{i, i + 1, -1, -1}, 1});
  m.facets.push_back({{0, -1, -1}, 4});
  m.facets.push_back({{static_cast<int>(xs.size()) - 1, -1, -1}, 2});
  validate_mesh(m);
  return m;
}

Mesh random_delaunay_mesh(int n_interior, uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  std::vector<Vec3> pts{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}};
  // Jittered points along each side keep boundary edges short, so most of the
  // Gabriel repair work is already done.
  const int per_side = std::max(1, static_cast<int>(std::lround(std::sqrt(n_interior))));
  for (int s = 0; s < 4; ++s)
    for (int k = 1; k <= per_side; ++k) {
      const double t =
          (k + rng.uniform(-0.3, 0.3)) / (per_side + 1);
      switch (s) {
        case 0: pts.push_back({t, 0.0, 0.0}); break;
        case 1: pts.push_back({1.0, t, 0.0}); break;
        case 2: pts.push_back({t, 1.0, 0.0}); break;
        default: pts.push_back({0.0, t, 0.0}); break;
      }
    }
  const double sep_sq = 1e-4 / std::max(1, n_interior);
  int attempts = 0;
  while (static_cast<int>(pts.size()) < 4 + 4 * per_side + n_interior) {
    const Vec3 p{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95), 0.0};
    bool ok = true;
    for (const Vec3& q : pts) ok = ok && dist_sq(p, q) > sep_sq;
    if (ok) pts.push_back(p);
    if (++attempts > 1000 * (n_interior + 1))
      throw Error("random mesh: separation unreachable");
  }
  return delaunay_triangulation_2d(pts, tol);
}

Mesh random_bcd_mesh(int n_interior, uint64_t seed, const Tolerance& tol) {
  return repair_boundary_conformity_2d(random_delaunay_mesh(n_interior, seed, tol), tol).mesh;
}

}  // namespace vfvm
