// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "vfvm/mesh.hpp"

namespace vfvm {

/// Diagonal choice for quad splitting. Uniform: every quad gets the
/// lower-left to upper-right diagonal. Mixed: checkerboard of the two
/// diagonals, so vertices alternate between 8 and 4 incident triangles.
enum class DiagonalRule { Uniform, Mixed };

/// Tensor grid on (0,lx) x (0,ly) with nx x ny quads, each split into two
/// triangles. Boundary tags: bottom 1, right 2, top 3, left 4.
Mesh structured_grid(int nx, int ny, double lx, double ly,
                     DiagonalRule rule = DiagonalRule::Uniform);

/// Same with explicit coordinate lines (ascending, at least 2 each).
Mesh structured_grid_coords(const std::vector<double>& xs, const std::vector<double>& ys,
                            DiagonalRule rule = DiagonalRule::Uniform);

/// 1D mesh from ascending coordinates; endpoint facets tagged 4 (left), 2 (right).
Mesh line_mesh(const std::vector<double>& xs);

/// Delaunay triangulation of a 2D point set (Bowyer-Watson with the ternary
/// in-circumball predicate; OnSphere ties keep existing edges). Convex hull
/// edges become boundary facets with tag 1, all cells get region 1.
Mesh delaunay_triangulation_2d(const std::vector<Vec3>& points, const Tolerance& tol = {});

/// Delaunay mesh of the unit square: 4 corners, jittered points along each
/// side, n_interior random points inside. Deterministic in seed.
Mesh random_delaunay_mesh(int n_interior, uint64_t seed, const Tolerance& tol = {});

/// random_delaunay_mesh followed by boundary-conformity repair.
Mesh random_bcd_mesh(int n_interior, uint64_t seed, const Tolerance& tol = {});

}  // namespace vfvm
