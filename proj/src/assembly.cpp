// SPDX-License-Identifier: Apache-2.0
#include "vfvm/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vfvm/errors.hpp"

namespace vfvm {

AdjacencyMatrix adjacency(int dim) {
  if (dim < 1) throw Error("adjacency: dimension must be >= 1");
  AdjacencyMatrix g;
  g.rows = 1;
  g.cols = 2;
  g.entries = {-1, 1};
  for (int i = 1; i < dim; ++i) {
    AdjacencyMatrix next;
    next.rows = g.rows + g.cols;
    next.cols = g.cols + 1;
    next.entries.assign(next.rows * next.cols, 0);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < g.cols; ++c) next.entries[r * next.cols + c] = g.at(r, c);
    for (int r = 0; r < g.cols; ++r) {
      next.entries[(g.rows + r) * next.cols + r] = -1;
      next.entries[(g.rows + r) * next.cols + g.cols] = 1;
    }
    g = std::move(next);
  }
  return g;
}

SparseMatrix assemble_laplace(const Mesh& m, const std::map<int, double>& eps_by_region,
                              const Tolerance& tol) {
  const int n = static_cast<int>(m.vertices.size());
  auto eps = [&](int region) {
    const auto it = eps_by_region.find(region);
    return it == eps_by_region.end() ? 1.0 : it->second;
  };
  std::vector<Triplet> entries;
  for (const EdgeGeometry& e : edge_geometry(m, tol)) {
    double w = 0.0;
    for (const auto& [cell, sig] : e.per_cell) w += eps(m.cells[cell].region) * sig / e.length;
    entries.push_back({e.i, e.j, -w});
    entries.push_back({e.j, e.i, -w});
    entries.push_back({e.i, e.i, w});
    entries.push_back({e.j, e.j, w});
  }
  return SparseMatrix::from_triplets(n, entries);
}

SparseMatrix assemble_mass(const Mesh& m, const Tolerance& tol) {
  return SparseMatrix::diagonal_matrix(voronoi_volumes(m, tol).vertex_volume);
}

BoundaryFunctions BoundaryCondition::dirichlet(std::function<double(int, const Vec3&)> g) {
  BoundaryFunctions f;
  f.alpha = [](int, const Vec3&, double) { return 1.0; };
  f.beta = [](int, const Vec3&, double) { return kDirichletPenaltyBeta; };
  f.gamma = [g = std::move(g)](int v, const Vec3& x, double) { return -g(v, x); };
  return f;
}

BoundaryFunctions BoundaryCondition::dirichlet_const(double g) {
  return dirichlet([g](int, const Vec3&) { return g; });
}

BoundaryFunctions BoundaryCondition::robin(double a, double b, double g) {
  BoundaryFunctions f;
  f.alpha = [a](int, const Vec3&, double) { return a; };
  f.beta = [b](int, const Vec3&, double) { return b; };
  f.gamma = [g](int, const Vec3&, double) { return g; };
  return f;
}

BoundaryApplyResult apply_boundary_conditions(const SparseMatrix& a, const std::vector<double>& rhs,
                                              const Mesh& m,
                                              const std::map<int, std::vector<double>>& measures,
                                              const BoundaryCondition& bc,
                                              const std::vector<double>& u_lin, double eps) {
  const int n = a.size();
  std::vector<double> diag_add(n, 0.0);
  BoundaryApplyResult out;
  out.rhs = rhs;
  for (const auto& [tag, fns] : bc.by_tag) {
    const auto it = measures.find(tag);
    if (it == measures.end())
      throw MissingBoundaryMeasure("no boundary measures for tag " + std::to_string(tag));
    for (int i = 0; i < n; ++i) {
      const double dv = it->second[i];
      if (dv == 0.0) continue;
      const double u = u_lin.empty() ? 0.0 : u_lin[i];
      const double beta = fns.beta(i, m.vertices[i], u);
      if (beta == 0.0) throw Error("boundary beta is zero at vertex " + std::to_string(i));
      diag_add[i] += dv * eps * fns.alpha(i, m.vertices[i], u) / beta;
      out.rhs[i] -= dv * eps * fns.gamma(i, m.vertices[i], u) / beta;
    }
  }
  out.matrix = a.plus_scaled(1.0, SparseMatrix::diagonal_matrix(diag_add), 1.0);
  return out;
}

MatrixClassReport classify_matrix(const SparseMatrix& a) {
  MatrixClassReport rep;
  const int n = a.size();
  double maxabs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      maxabs = std::max(maxabs, std::abs(a.values()[k]));
  const double tol = 1e-13 * maxabs;

  rep.symmetric = a.value_symmetric(tol);
  rep.is_z_matrix = true;
  rep.positive_diagonal = true;
  const std::vector<double> diag = a.diagonal();
  for (int i = 0; i < n; ++i)
    if (!(diag[i] > 0.0)) {
      rep.positive_diagonal = false;
      rep.offending_entries.push_back({i, i, diag[i]});
    }
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const int j = a.cols()[k];
      if (j != i && a.values()[k] > tol) {
        rep.is_z_matrix = false;
        rep.offending_entries.push_back({i, j, a.values()[k]});
      }
    }
  rep.column_sums_nonneg = true;
  for (double s : a.column_sums()) rep.column_sums_nonneg = rep.column_sums_nonneg && s >= -tol;

  // Connectivity of the sparsity pattern (pattern is structurally symmetric
  // for all operators assembled here; treat edges as undirected).
  std::vector<char> seen(n, 0);
  std::vector<int> queue;
  if (n > 0) {
    seen[0] = 1;
    queue.push_back(0);
  }
  std::size_t head = 0;
  while (head < queue.size()) {
    const int i = queue[head++];
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const int j = a.cols()[k];
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  rep.irreducible = static_cast<int>(queue.size()) == n;
  rep.is_s_matrix =
      rep.symmetric && rep.is_z_matrix && rep.positive_diagonal && rep.column_sums_nonneg;
  return rep;
}

FemMatrices assemble_fem_p1(const Mesh& m) {
  const int n = static_cast<int>(m.vertices.size());
  const int d = m.dim;
  std::vector<Triplet> stiff, mass;
  FemMatrices out;
  out.lumped.assign(n, 0.0);
  const double mass_denom = (d + 1) * (d + 2);

  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const Cell& cell = m.cells[c];
    const Simplex s = m.cell_simplex(c);
    const double vol = signed_measure(s);
    if (vol <= 0.0) throw DegenerateSimplex("cell " + std::to_string(c) + " is degenerate");

    // Rows of P^{-1} are the barycentric gradients of vertices 1..d.
    double p[3][3] = {};
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) p[i][k] = s.v[i + 1][k] - s.v[0][k];
    double inv[3][3] = {};
    if (d == 1) {
      inv[0][0] = 1.0 / p[0][0];
    } else if (d == 2) {
      const double det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
      inv[0][0] = p[1][1] / det;
      inv[0][1] = -p[0][1] / det;
      inv[1][0] = -p[1][0] / det;
      inv[1][1] = p[0][0] / det;
    } else {
      const double det =
          p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
          p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
          p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
      inv[0][0] = (p[1][1] * p[2][2] - p[1][2] * p[2][1]) / det;
      inv[0][1] = (p[0][2] * p[2][1] - p[0][1] * p[2][2]) / det;
      inv[0][2] = (p[0][1] * p[1][2] - p[0][2] * p[1][1]) / det;
      inv[1][0] = (p[1][2] * p[2][0] - p[1][0] * p[2][2]) / det;
      inv[1][1] = (p[0][0] * p[2][2] - p[0][2] * p[2][0]) / det;
      inv[1][2] = (p[0][2] * p[1][0] - p[0][0] * p[1][2]) / det;
      inv[2][0] = (p[1][0] * p[2][1] - p[1][1] * p[2][0]) / det;
      inv[2][1] = (p[0][1] * p[2][0] - p[0][0] * p[2][1]) / det;
      inv[2][2] = (p[0][0] * p[1][1] - p[0][1] * p[1][0]) / det;
    }

    // p holds the edge vectors as rows, so barycentric gradients are the
    // columns of its inverse.
    Vec3 grad[4] = {};
    for (int i = 1; i <= d; ++i) {
      for (int k = 0; k < d; ++k) grad[i][k] = inv[k][i - 1];
      grad[0] = grad[0] - grad[i];
    }
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        stiff.push_back({cell.v[i], cell.v[j], vol * dot(grad[i], grad[j])});
        mass.push_back({cell.v[i], cell.v[j], vol * (i == j ? 2.0 : 1.0) / mass_denom});
      }
    for (int i = 0; i <= d; ++i) out.lumped[cell.v[i]] += 2.0 * vol / mass_denom;
  }
  out.stiffness = SparseMatrix::from_triplets(n, stiff);
  out.mass = SparseMatrix::from_triplets(n, mass);
  return out;
}

}  // namespace vfvm
