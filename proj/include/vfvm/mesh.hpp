// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "vfvm/geometry.hpp"

namespace vfvm {

/// Simplicial cell: dim+1 vertex indices (unused slots -1) and a region tag.
struct Cell {
  std::array<int, 4> v{-1, -1, -1, -1};
  int region = 1;
};

/// Boundary or interface facet: dim vertex indices and a tag. A facet shared
/// by two cells of distinct regions is an interface.
struct Facet {
  std::array<int, 3> v{-1, -1, -1};
  int tag = 1;
};

struct Mesh {
  int dim = 2;  // 1, 2 or 3
  std::vector<Vec3> vertices;
  std::vector<Cell> cells;
  std::vector<Facet> facets;

  Simplex cell_simplex(int c) const;
  Simplex facet_simplex(int f) const;
  /// Sum of cell measures.
  double total_measure() const;
};

/// Checks index ranges, cell non-degeneracy, facet incidence (boundary facets
/// belong to exactly one cell, interfaces to two cells of distinct regions)
/// and vertex separation; normalizes every cell to positive orientation.
/// Throws InvalidMesh with a description of the first problem found.
void validate_mesh(Mesh& m, const Tolerance& tol = {});

struct DelaunayReport {
  std::vector<std::pair<int, int>> violating_cells;      // (cell, vertex inside)
  std::vector<std::pair<int, int>> non_gabriel_facets;   // (facet, encroaching vertex)
  bool is_delaunay = false;
  bool is_boundary_conforming = false;
  std::vector<int> circumcenters_outside;  // diagnostic only, not a defect
  // Interface angle statistics (2D): angles opposite interface edges.
  double interface_angle_min = 0.0;
  double interface_angle_max = 0.0;
};

/// Tests every vertex against every cell's open circumball. OnSphere hits are
/// ties (non-unique triangulation), not violations.
DelaunayReport check_delaunay(const Mesh& m, const Tolerance& tol = {});

/// check_delaunay plus the Gabriel test: for every boundary/interface
/// subsimplex of dimension 1 <= k < dim (edges of boundary triangles included
/// when dim = 3) no vertex may lie strictly inside its diametrical ball.
DelaunayReport check_boundary_conforming(const Mesh& m, const Tolerance& tol = {});

/// Per-edge Voronoi data. sigma is the facet measure accumulated over the
/// incident cells in ascending cell order; negative per-cell entries are
/// legitimate and compensate across neighbors.
struct EdgeGeometry {
  int i = 0, j = 0;  // i < j
  double length = 0.0;
  double sigma = 0.0;
  std::vector<std::pair<int, double>> per_cell;  // (cell, contribution), ascending
};

/// Edges sorted by (i, j). For dim = 1 the dual facet measure is 1 per cell.
std::vector<EdgeGeometry> edge_geometry(const Mesh& m, const Tolerance& tol = {});

/// Voronoi volumes clipped to the mesh by the signed corner decomposition of
/// each cell (edge midpoints, facet circumcenters, cell circumcenter).
struct VoronoiVolumes {
  std::vector<double> vertex_volume;               // V_i, per mesh vertex
  std::vector<std::array<double, 4>> cell_corner;  // per cell, per local vertex
  double min_contribution = 0.0;
  bool has_negative = false;  // some cell_corner below -tol (non-BCD mesh)
};

VoronoiVolumes voronoi_volumes(const Mesh& m, const Tolerance& tol = {});

/// Measure of the Voronoi surface piece of each vertex within the facets of
/// each tag: the (dim-1)-dimensional corner decomposition of every facet.
/// Key = facet tag, value = per-vertex measures (zero off the boundary).
std::map<int, std::vector<double>> boundary_voronoi_measures(const Mesh& m,
                                                             const Tolerance& tol = {});

struct RepairResult {
  Mesh mesh;
  int insertions = 0;
};

/// Restores the Gabriel property of boundary/interface edges of a 2D Delaunay
/// mesh by inserting the orthogonal projection of the encroaching vertex onto
/// the edge, splitting it, and re-legalizing with flips that never touch
/// constrained edges. Throws RepairDiverged past cap_factor * vertex count
/// insertions.
RepairResult repair_boundary_conformity_2d(const Mesh& m, const Tolerance& tol = {},
                                           int cap_factor = 10);

}  // namespace vfvm
