// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <vector>

#include "vfvm/mesh.hpp"
#include "vfvm/sparse.hpp"

namespace vfvm {

/// Edge-to-vertex incidence of the reference simplex, rows in the fixed edge
/// order (0,1),(0,2),(1,2),(0,3),... Entries are -1/0/+1, row sums zero.
struct AdjacencyMatrix {
  int rows = 0, cols = 0;
  std::vector<int> entries;  // row major
  int at(int r, int c) const { return entries[r * cols + c]; }
};

/// Built by the recursion: the next matrix stacks [G 0] atop [-I 1].
AdjacencyMatrix adjacency(int dim);

/// Volume-integrated Laplace operator: A_ij = -sum_cells eps * sigma / l per
/// edge, diagonal completes zero row sums. Regions missing from eps_by_region
/// get coefficient 1.
SparseMatrix assemble_laplace(const Mesh& m, const std::map<int, double>& eps_by_region = {},
                              const Tolerance& tol = {});

/// Diagonal matrix of Voronoi volumes.
SparseMatrix assemble_mass(const Mesh& m, const Tolerance& tol = {});

/// Boundary coefficient functions alpha(u) u + beta(u) du/dn + gamma(u) = 0,
/// evaluated per boundary vertex (index, position, linearization value).
struct BoundaryFunctions {
  std::function<double(int, const Vec3&, double)> alpha, beta, gamma;
};

/// Penalty beta for Dirichlet rows (machine epsilon squared).
inline constexpr double kDirichletPenaltyBeta = 2.220446049250313e-16 * 2.220446049250313e-16;

struct BoundaryCondition {
  std::map<int, BoundaryFunctions> by_tag;

  /// u = g via the penalty: alpha = 1, beta = eps_machine^2, gamma = -g.
  static BoundaryFunctions dirichlet(std::function<double(int, const Vec3&)> g);
  static BoundaryFunctions dirichlet_const(double g);
  static BoundaryFunctions robin(double a, double b, double g);
};

/// Adds the flux of the third-kind condition to the diagonal and right-hand
/// side: diag_i += dV_i eps alpha/beta, rhs_i -= dV_i eps gamma/beta, both
/// evaluated at u_lin. Only the diagonal and rhs change. `measures` comes from
/// boundary_voronoi_measures; a tag present in bc but absent there throws
/// MissingBoundaryMeasure.
struct BoundaryApplyResult {
  SparseMatrix matrix;
  std::vector<double> rhs;
};
BoundaryApplyResult apply_boundary_conditions(const SparseMatrix& a, const std::vector<double>& rhs,
                                              const Mesh& m,
                                              const std::map<int, std::vector<double>>& measures,
                                              const BoundaryCondition& bc,
                                              const std::vector<double>& u_lin, double eps = 1.0);

/// Sign-structure report. Checks use the zero tolerance 1e-13 * max|entry|,
/// except the diagonal which must be strictly positive.
struct MatrixClassReport {
  bool symmetric = false;
  bool is_z_matrix = false;
  bool positive_diagonal = false;
  bool column_sums_nonneg = false;
  bool irreducible = false;
  bool is_s_matrix = false;  // symmetric && z && positive diag && col sums
  std::vector<Triplet> offending_entries;
};
MatrixClassReport classify_matrix(const SparseMatrix& a);

/// P1 finite element Laplace and mass matrices. `lumped` holds the diagonal
/// of the consistent mass, 2|omega_i| / ((d+1)(d+2)) per vertex.
struct FemMatrices {
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<double> lumped;
};
FemMatrices assemble_fem_p1(const Mesh& m);

}  // namespace vfvm
