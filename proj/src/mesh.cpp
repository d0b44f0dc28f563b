// SPDX-License-Identifier: Apache-2.0
#include "vfvm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "vfvm/errors.hpp"

namespace vfvm {

namespace {

// Local edge order per cell; matches the row order of the recursive
// edge-to-vertex map so per-edge data lines up with the operator assembly.
constexpr int kEdgePairs[6][2] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};

int edges_per_cell(int dim) { return dim * (dim + 1) / 2; }

std::string cell_str(int c) { return "cell " + std::to_string(c); }

// Signed area of (a,b,c) against a fixed plane normal; used for the corner
// decomposition of 2D cells (normal = +z) and 3D boundary facets.
double signed_tri(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& n) {
  return 0.5 * dot(cross(b - a, c - a), n);
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

// Orders the two vertices opposite edge (a,b) of a tetrahedron so the frame
// (b-a, first-a, second-a) is positively oriented.
void orient_opposite(const Vec3& a, const Vec3& b, Vec3& c, Vec3& d, int& ic, int& id) {
  if (det3(b - a, c - a, d - a) < 0.0) {
    std::swap(c, d);
    std::swap(ic, id);
  }
}

struct TetEdgeDual {
  Vec3 ce, cf1, cf2, ct;  // edge midpoint, the two face circumcenters, tet circumcenter
};

// Dual points for edge (a,b) of tet (a,b,c,d) with (c,d) already positively
// ordered. All four points lie in the bisector plane of (a,b).
TetEdgeDual tet_edge_dual(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                          const Ball& cell_ball, const Tolerance& tol) {
  TetEdgeDual du;
  du.ce = 0.5 * (a + b);
  du.cf1 = circumball(make_simplex(3, {a, b, c}), tol).center;
  du.cf2 = circumball(make_simplex(3, {a, b, d}), tol).center;
  du.ct = cell_ball.center;
  return du;
}

}  // namespace

Simplex Mesh::cell_simplex(int c) const {
  Simplex s;
  s.dim = dim;
  for (int k = 0; k <= dim; ++k) s.v[s.npts++] = vertices[cells[c].v[k]];
  return s;
}

Simplex Mesh::facet_simplex(int f) const {
  Simplex s;
  s.dim = dim;
  for (int k = 0; k < dim; ++k) s.v[s.npts++] = vertices[facets[f].v[k]];
  return s;
}

double Mesh::total_measure() const {
  double sum = 0.0;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) sum += measure(cell_simplex(c));
  return sum;
}

void validate_mesh(Mesh& m, const Tolerance& tol) {
  const int nv = static_cast<int>(m.vertices.size());
  if (m.dim < 1 || m.dim > 3) throw InvalidMesh("dimension must be 1, 2 or 3");
  if (nv == 0) throw InvalidMesh("mesh has no vertices");
  for (int i = 0; i < nv; ++i)
    for (int k = 0; k < 3; ++k)
      if (!std::isfinite(m.vertices[i][k]))
        throw InvalidMesh("vertex " + std::to_string(i) + " has a non-finite coordinate");

  Vec3 lo = m.vertices[0], hi = m.vertices[0];
  for (const Vec3& p : m.vertices)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  const double snap = 1e-12 * std::max(norm(hi - lo), 1.0);
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      if (dist_sq(m.vertices[i], m.vertices[j]) <= snap * snap)
        throw InvalidMesh("vertices " + std::to_string(i) + " and " + std::to_string(j) +
                          " coincide");

  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    Cell& cell = m.cells[c];
    for (int k = 0; k <= m.dim; ++k) {
      if (cell.v[k] < 0 || cell.v[k] >= nv)
        throw InvalidMesh(cell_str(c) + ": vertex index out of range");
      for (int l = 0; l < k; ++l)
        if (cell.v[k] == cell.v[l]) throw InvalidMesh(cell_str(c) + ": repeated vertex");
    }
    if (signed_measure(m.cell_simplex(c)) < 0.0) std::swap(cell.v[0], cell.v[1]);
    const Simplex s = m.cell_simplex(c);
    double scale = 0.0;
    for (int k = 1; k <= m.dim; ++k) scale = std::max(scale, norm(s.v[k] - s.v[0]));
    if (signed_measure(s) <= tol.degeneracy * std::pow(scale, m.dim))
      throw InvalidMesh(cell_str(c) + " is degenerate");
  }

  std::map<std::array<int, 3>, std::vector<int>> facet_cells;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    for (int skip = 0; skip <= m.dim; ++skip) {
      std::array<int, 3> key{-1, -1, -1};
      int n = 0;
      for (int k = 0; k <= m.dim; ++k)
        if (k != skip) key[n++] = m.cells[c].v[k];
      std::sort(key.begin(), key.begin() + n);
      facet_cells[key].push_back(c);
    }

  std::set<std::array<int, 3>> seen;
  for (int f = 0; f < static_cast<int>(m.facets.size()); ++f) {
    std::array<int, 3> key{-1, -1, -1};
    for (int k = 0; k < m.dim; ++k) {
      const int v = m.facets[f].v[k];
      if (v < 0 || v >= nv) throw InvalidMesh("facet " + std::to_string(f) + ": index out of range");
      key[k] = v;
    }
    std::sort(key.begin(), key.begin() + m.dim);
    for (int k = 1; k < m.dim; ++k)
      if (key[k] == key[k - 1]) throw InvalidMesh("facet " + std::to_string(f) + ": repeated vertex");
    if (!seen.insert(key).second)
      throw InvalidMesh("facet " + std::to_string(f) + " duplicates another facet");
    const auto it = facet_cells.find(key);
    if (it == facet_cells.end())
      throw InvalidMesh("facet " + std::to_string(f) + " is not a facet of any cell");
    if (it->second.size() == 2) {
      if (m.cells[it->second[0]].region == m.cells[it->second[1]].region)
        throw InvalidMesh("facet " + std::to_string(f) +
                          " separates two cells of the same region (not an interface)");
    } else if (it->second.size() != 1) {
      throw InvalidMesh("facet " + std::to_string(f) + " is shared by more than two cells");
    }
  }
}

DelaunayReport check_delaunay(const Mesh& m, const Tolerance& tol) {
  DelaunayReport rep;
  const int nv = static_cast<int>(m.vertices.size());
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    Ball ball;
    try {
      ball = circumball(m.cell_simplex(c), tol);
    } catch (const DegenerateSimplex& e) {
      throw DegenerateSimplex(cell_str(c) + ": " + e.what());
    }
    for (int p = 0; p < nv; ++p) {
      bool own = false;
      for (int k = 0; k <= m.dim; ++k) own = own || m.cells[c].v[k] == p;
      if (own) continue;
      if (classify(ball, m.vertices[p], tol) == Side::Inside)
        rep.violating_cells.push_back({c, p});
    }
    const Projection pr = project_onto(m.cell_simplex(c), ball.center, tol);
    bool outside = false;
    for (int k = 0; k <= m.dim; ++k) outside = outside || pr.barycentric[k] < 0.0;
    if (outside) rep.circumcenters_outside.push_back(c);
  }
  rep.is_delaunay = rep.violating_cells.empty();
  rep.is_boundary_conforming = rep.is_delaunay && m.dim == 1;
  return rep;
}

DelaunayReport check_boundary_conforming(const Mesh& m, const Tolerance& tol) {
  DelaunayReport rep = check_delaunay(m, tol);
  const int nv = static_cast<int>(m.vertices.size());

  // Subsimplices to test: (vertex set, owning facet). 3D adds the edges of
  // every boundary triangle, deduplicated across facets.
  std::vector<std::pair<std::vector<int>, int>> subs;
  std::set<std::pair<int, int>> seen_edges;
  for (int f = 0; f < static_cast<int>(m.facets.size()); ++f) {
    const Facet& fa = m.facets[f];
    if (m.dim == 2) {
      subs.push_back({{fa.v[0], fa.v[1]}, f});
    } else if (m.dim == 3) {
      subs.push_back({{fa.v[0], fa.v[1], fa.v[2]}, f});
      for (int k = 0; k < 3; ++k) {
        const int a = fa.v[k], b = fa.v[(k + 1) % 3];
        if (seen_edges.insert({std::min(a, b), std::max(a, b)}).second)
          subs.push_back({{a, b}, f});
      }
    }
  }

  for (const auto& [vs, f] : subs) {
    Simplex s;
    s.dim = m.dim;
    for (int v : vs) s.v[s.npts++] = m.vertices[v];
    const Ball ball = circumball(s, tol);
    for (int p = 0; p < nv; ++p) {
      if (std::find(vs.begin(), vs.end(), p) != vs.end()) continue;
      if (classify(ball, m.vertices[p], tol) == Side::Inside)
        rep.non_gabriel_facets.push_back({f, p});
    }
  }
  rep.is_boundary_conforming = rep.is_delaunay && rep.non_gabriel_facets.empty();

  // Angles opposite interface edges (2D diagnostic).
  if (m.dim == 2) {
    std::set<std::pair<int, int>> iface;
    std::map<std::pair<int, int>, int> count;
    for (const Cell& c : m.cells)
      for (const auto& e : kEdgePairs) {
        if (e[0] > 2 || e[1] > 2) break;
        const int a = c.v[e[0]], b = c.v[e[1]];
        count[{std::min(a, b), std::max(a, b)}]++;
      }
    for (const Facet& fa : m.facets) {
      const std::pair<int, int> key{std::min(fa.v[0], fa.v[1]), std::max(fa.v[0], fa.v[1])};
      if (count.count(key) && count[key] == 2) iface.insert(key);
    }
    bool first = true;
    for (const Cell& c : m.cells)
      for (int k = 0; k < 3; ++k) {
        const int a = c.v[(k + 1) % 3], b = c.v[(k + 2) % 3];
        if (!iface.count({std::min(a, b), std::max(a, b)})) continue;
        const Vec3 u = m.vertices[a] - m.vertices[c.v[k]];
        const Vec3 w = m.vertices[b] - m.vertices[c.v[k]];
        const double ang = std::acos(std::clamp(dot(u, w) / (norm(u) * norm(w)), -1.0, 1.0));
        rep.interface_angle_min = first ? ang : std::min(rep.interface_angle_min, ang);
        rep.interface_angle_max = first ? ang : std::max(rep.interface_angle_max, ang);
        first = false;
      }
  }
  return rep;
}

std::vector<EdgeGeometry> edge_geometry(const Mesh& m, const Tolerance& tol) {
  std::map<std::pair<int, int>, EdgeGeometry> edges;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const Cell& cell = m.cells[c];
    Ball ball;
    if (m.dim >= 2) {
      try {
        ball = circumball(m.cell_simplex(c), tol);
      } catch (const DegenerateSimplex& e) {
        throw DegenerateSimplex(cell_str(c) + ": " + e.what());
      }
    }
    for (int e = 0; e < edges_per_cell(m.dim); ++e) {
      const int la = kEdgePairs[e][0], lb = kEdgePairs[e][1];
      const int a = cell.v[la], b = cell.v[lb];
      const Vec3& va = m.vertices[a];
      const Vec3& vb = m.vertices[b];

      double sig = 1.0;  // dim 1: dual facet is a point of measure 1
      if (m.dim == 2) {
        const Vec3 vc = m.vertices[cell.v[3 - la - lb]];
        const Vec3 mid = 0.5 * (va + vb);
        Vec3 n{-(vb - va)[1], (vb - va)[0], 0.0};
        if (dot(n, vc - mid) < 0.0) n = -1.0 * n;
        sig = dot(ball.center - mid, n) / norm(n);
      } else if (m.dim == 3) {
        int ic = -1, id = -1;
        for (int k = 0; k <= 3; ++k)
          if (k != la && k != lb) (ic < 0 ? ic : id) = k;
        Vec3 vc = m.vertices[cell.v[ic]];
        Vec3 vd = m.vertices[cell.v[id]];
        orient_opposite(va, vb, vc, vd, ic, id);
        const TetEdgeDual du = tet_edge_dual(va, vb, vc, vd, ball, tol);
        const Vec3 ehat = (1.0 / norm(vb - va)) * (vb - va);
        sig = 0.5 * dot(cross(du.cf1 - du.ce, du.ct - du.ce) +
                            cross(du.ct - du.ce, du.cf2 - du.ce),
                        ehat);
      }

      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      EdgeGeometry& eg = edges[key];
      if (eg.per_cell.empty()) {
        eg.i = key.first;
        eg.j = key.second;
        eg.length = norm(vb - va);
      }
      eg.per_cell.push_back({c, sig});
    }
  }
  std::vector<EdgeGeometry> out;
  out.reserve(edges.size());
  for (auto& [key, eg] : edges) {
    double sum = 0.0;
    for (const auto& [c, s] : eg.per_cell) sum += s;
    eg.sigma = sum;
    out.push_back(std::move(eg));
  }
  return out;
}

VoronoiVolumes voronoi_volumes(const Mesh& m, const Tolerance& tol) {
  VoronoiVolumes vol;
  vol.vertex_volume.assign(m.vertices.size(), 0.0);
  vol.cell_corner.assign(m.cells.size(), {0.0, 0.0, 0.0, 0.0});
  double scale = 0.0;

  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const Cell& cell = m.cells[c];
    scale = std::max(scale, measure(m.cell_simplex(c)));
    if (m.dim == 1) {
      const double h = measure(m.cell_simplex(c));
      vol.cell_corner[c][0] = vol.cell_corner[c][1] = 0.5 * h;
    } else if (m.dim == 2) {
      const Ball ball = circumball(m.cell_simplex(c), tol);
      const Vec3 up{0.0, 0.0, 1.0};
      for (int k = 0; k < 3; ++k) {
        const Vec3& a = m.vertices[cell.v[k]];
        const Vec3& b = m.vertices[cell.v[(k + 1) % 3]];
        const Vec3& d = m.vertices[cell.v[(k + 2) % 3]];
        vol.cell_corner[c][k] = signed_tri(a, 0.5 * (a + b), ball.center, up) +
                                signed_tri(a, ball.center, 0.5 * (a + d), up);
      }
    } else {
      const Ball ball = circumball(m.cell_simplex(c), tol);
      for (int k = 0; k <= 3; ++k) {
        const Vec3& a = m.vertices[cell.v[k]];
        double sum = 0.0;
        for (int l = 0; l <= 3; ++l) {
          if (l == k) continue;
          int ic = -1, id = -1;
          for (int o = 0; o <= 3; ++o)
            if (o != k && o != l) (ic < 0 ? ic : id) = o;
          Vec3 vc = m.vertices[cell.v[ic]];
          Vec3 vd = m.vertices[cell.v[id]];
          orient_opposite(a, m.vertices[cell.v[l]], vc, vd, ic, id);
          const TetEdgeDual du = tet_edge_dual(a, m.vertices[cell.v[l]], vc, vd, ball, tol);
          sum += det3(du.ce - a, du.cf1 - a, du.ct - a) + det3(du.ce - a, du.ct - a, du.cf2 - a);
        }
        vol.cell_corner[c][k] = sum / 6.0;
      }
    }
    for (int k = 0; k <= m.dim; ++k) vol.vertex_volume[cell.v[k]] += vol.cell_corner[c][k];
  }

  vol.min_contribution = 0.0;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    for (int k = 0; k <= m.dim; ++k)
      vol.min_contribution = std::min(vol.min_contribution, vol.cell_corner[c][k]);
  vol.has_negative = vol.min_contribution < -tol.rel * scale;
  return vol;
}

std::map<int, std::vector<double>> boundary_voronoi_measures(const Mesh& m, const Tolerance& tol) {
  std::map<int, std::vector<double>> out;
  const int nv = static_cast<int>(m.vertices.size());
  for (const Facet& f : m.facets) {
    std::vector<double>& acc = out[f.tag];
    if (acc.empty()) acc.assign(nv, 0.0);
    if (m.dim == 1) {
      acc[f.v[0]] += 1.0;
    } else if (m.dim == 2) {
      const double half = 0.5 * norm(m.vertices[f.v[1]] - m.vertices[f.v[0]]);
      acc[f.v[0]] += half;
      acc[f.v[1]] += half;
    } else {
      Simplex s;
      s.dim = 3;
      for (int k = 0; k < 3; ++k) s.v[s.npts++] = m.vertices[f.v[k]];
      const Ball ball = circumball(s, tol);
      const Vec3 nr = cross(s.v[1] - s.v[0], s.v[2] - s.v[0]);
      const Vec3 nhat = (1.0 / norm(nr)) * nr;
      for (int k = 0; k < 3; ++k) {
        const Vec3& a = m.vertices[f.v[k]];
        const Vec3& b = m.vertices[f.v[(k + 1) % 3]];
        const Vec3& d = m.vertices[f.v[(k + 2) % 3]];
        acc[f.v[k]] += signed_tri(a, 0.5 * (a + b), ball.center, nhat) +
                       signed_tri(a, ball.center, 0.5 * (a + d), nhat);
      }
    }
  }
  return out;
}

}  // namespace vfvm
