// SPDX-License-Identifier: Apache-2.0
// Bowyer-Watson triangulation and boundary-conformity repair, 2D.
#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vfvm/errors.hpp"
#include "vfvm/mesh.hpp"
#include "vfvm/meshgen.hpp"

namespace vfvm {

namespace {

double cross_z(const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; }

double tri_area2(const Vec3& a, const Vec3& b, const Vec3& c) {
  return cross_z(b - a, c - a);  // twice the signed area
}

struct Tri {
  std::array<int, 3> v;
  Ball ball;
  bool alive = true;
};

using EdgeKey = std::pair<int, int>;
EdgeKey ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

Ball tri_ball(const std::vector<Vec3>& pts, const std::array<int, 3>& v, const Tolerance& tol) {
  return circumball(make_simplex(2, {pts[v[0]], pts[v[1]], pts[v[2]]}), tol);
}

}  // namespace

Mesh delaunay_triangulation_2d(const std::vector<Vec3>& points, const Tolerance& tol) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw InvalidMesh("need at least 3 points");
  std::vector<Vec3> pts = points;

  Vec3 lo = pts[0], hi = pts[0];
  for (const Vec3& p : pts) {
    lo = {std::min(lo[0], p[0]), std::min(lo[1], p[1]), 0.0};
    hi = {std::max(hi[0], p[0]), std::max(hi[1], p[1]), 0.0};
  }
  const double ext = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
  const Vec3 mid = 0.5 * (lo + hi);
  const double big = 16.0 * ext;
  pts.push_back({mid[0] - 2.0 * big, mid[1] - big, 0.0});
  pts.push_back({mid[0] + 2.0 * big, mid[1] - big, 0.0});
  pts.push_back({mid[0], mid[1] + 2.0 * big, 0.0});

  std::vector<Tri> tris;
  tris.push_back({{n, n + 1, n + 2}, tri_ball(pts, {n, n + 1, n + 2}, tol), true});

  for (int p = 0; p < n; ++p) {
    // Locate a triangle containing the point (tolerant: on-edge counts).
    int seed = -1;
    for (int t = 0; t < static_cast<int>(tris.size()) && seed < 0; ++t) {
      if (!tris[t].alive) continue;
      const auto& v = tris[t].v;
      const double scale = std::abs(tri_area2(pts[v[0]], pts[v[1]], pts[v[2]]));
      bool inside = true;
      for (int k = 0; k < 3; ++k)
        inside = inside &&
                 tri_area2(pts[v[k]], pts[v[(k + 1) % 3]], pts[p]) >= -tol.rel * scale;
      if (inside) seed = t;
    }
    if (seed < 0) throw Error("triangulation: point " + std::to_string(p) + " not located");

    std::map<EdgeKey, std::vector<int>> by_edge;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      if (tris[t].alive)
        for (int k = 0; k < 3; ++k) by_edge[ekey(tris[t].v[k], tris[t].v[(k + 1) % 3])].push_back(t);

    // Cavity: seed plus connected triangles whose open circumball holds p.
    // OnSphere neighbors stay out, so co-circular ties keep existing edges.
    std::set<int> cavity{seed};
    std::vector<int> queue{seed};
    while (!queue.empty()) {
      const int t = queue.back();
      queue.pop_back();
      for (int k = 0; k < 3; ++k)
        for (int nb : by_edge[ekey(tris[t].v[k], tris[t].v[(k + 1) % 3])]) {
          if (cavity.count(nb)) continue;
          if (classify(tris[nb].ball, pts[p], tol) == Side::Inside) {
            cavity.insert(nb);
            queue.push_back(nb);
          }
        }
    }

    // Fan p to the directed boundary edges of the cavity.
    std::vector<std::array<int, 2>> rim;
    for (int t : cavity)
      for (int k = 0; k < 3; ++k) {
        const int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        bool shared = false;
        for (int nb : by_edge[ekey(a, b)]) shared = shared || (nb != t && cavity.count(nb));
        if (!shared) rim.push_back({a, b});
      }
    for (int t : cavity) tris[t].alive = false;
    for (const auto& [a, b] : rim) {
      if (tri_area2(pts[a], pts[b], pts[p]) <= 0.0)
        throw Error("triangulation: degenerate insertion at point " + std::to_string(p));
      tris.push_back({{a, b, p}, tri_ball(pts, {a, b, p}, tol), true});
    }
  }

  Mesh m;
  m.dim = 2;
  m.vertices.assign(points.begin(), points.end());
  std::map<EdgeKey, int> edge_count;
  for (const Tri& t : tris) {
    if (!t.alive || t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    Cell c;
    c.v = {t.v[0], t.v[1], t.v[2], -1};
    m.cells.push_back(c);
    for (int k = 0; k < 3; ++k) edge_count[ekey(t.v[k], t.v[(k + 1) % 3])]++;
  }
  if (m.cells.empty()) throw InvalidMesh("triangulation: all points are collinear");
  for (const auto& [key, cnt] : edge_count)
    if (cnt == 1) m.facets.push_back({{key.first, key.second, -1}, 1});
  validate_mesh(m, tol);
  return m;
}

namespace {

Cell oriented_cell(const std::vector<Vec3>& pts, int a, int b, int c, int region) {
  Cell cl;
  cl.v = {a, b, c, -1};
  cl.region = region;
  if (tri_area2(pts[a], pts[b], pts[c]) < 0.0) std::swap(cl.v[0], cl.v[1]);
  return cl;
}

}  // namespace

RepairResult repair_boundary_conformity_2d(const Mesh& m, const Tolerance& tol, int cap_factor) {
  if (m.dim != 2) throw InvalidMesh("boundary repair supports 2D meshes only");
  std::vector<Vec3> pts = m.vertices;
  std::vector<Cell> cells = m.cells;
  std::vector<Facet> facets = m.facets;
  const int cap = cap_factor * static_cast<int>(pts.size());
  int insertions = 0;

  for (;;) {
    // Deterministic scan order over current facets.
    std::vector<int> order(facets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return ekey(facets[x].v[0], facets[x].v[1]) < ekey(facets[y].v[0], facets[y].v[1]);
    });

    int target = -1, encroacher = -1;
    for (int f : order) {
      const int a = facets[f].v[0], b = facets[f].v[1];
      const Ball ball = circumball(make_simplex(2, {pts[a], pts[b]}), tol);
      double depth = 0.0;
      for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
        if (p == a || p == b) continue;
        if (classify(ball, pts[p], tol) != Side::Inside) continue;
        const double d = ball.radius_sq - dist_sq(ball.center, pts[p]);
        if (encroacher < 0 || d > depth) {
          depth = d;
          encroacher = p;
        }
      }
      if (encroacher >= 0) {
        target = f;
        break;
      }
    }
    if (target < 0) break;

    if (++insertions > cap) throw RepairDiverged("insertion cap reached after " +
                                                 std::to_string(insertions - 1) + " insertions");
    const int a = facets[target].v[0], b = facets[target].v[1];
    const int etag = facets[target].tag;
    const Projection pr =
        project_onto(make_simplex(2, {pts[a], pts[b]}), pts[encroacher], tol);
    const int ip = static_cast<int>(pts.size());
    pts.push_back(pr.point);

    std::vector<EdgeKey> stack;
    for (int c = static_cast<int>(cells.size()) - 1; c >= 0; --c) {
      const auto& v = cells[c].v;
      bool hasa = false, hasb = false;
      int other = -1;
      for (int k = 0; k < 3; ++k) {
        hasa = hasa || v[k] == a;
        hasb = hasb || v[k] == b;
      }
      if (!hasa || !hasb) continue;
      for (int k = 0; k < 3; ++k)
        if (v[k] != a && v[k] != b) other = v[k];
      const int region = cells[c].region;
      cells[c] = oriented_cell(pts, a, ip, other, region);
      cells.push_back(oriented_cell(pts, ip, b, other, region));
      stack.push_back(ekey(a, other));
      stack.push_back(ekey(b, other));
    }
    facets[target].v = {a, ip, -1};
    facets.push_back({{ip, b, -1}, etag});

    std::set<EdgeKey> constrained;
    for (const Facet& f : facets) constrained.insert(ekey(f.v[0], f.v[1]));

    // Lawson legalization around the new vertex; constrained edges never flip.
    int flips = 0;
    const int flip_cap = 50 * static_cast<int>(cells.size() + 16);
    while (!stack.empty()) {
      const EdgeKey e = stack.back();
      stack.pop_back();
      if (constrained.count(e)) continue;
      int t1 = -1, t2 = -1;
      for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
        int hit = 0;
        for (int k = 0; k < 3; ++k) hit += cells[c].v[k] == e.first || cells[c].v[k] == e.second;
        if (hit == 2) (t1 < 0 ? t1 : t2) = c;
      }
      if (t2 < 0) continue;
      if (cells[t1].region != cells[t2].region) continue;
      int z1 = -1, z2 = -1;
      for (int k = 0; k < 3; ++k) {
        if (cells[t1].v[k] != e.first && cells[t1].v[k] != e.second) z1 = cells[t1].v[k];
        if (cells[t2].v[k] != e.first && cells[t2].v[k] != e.second) z2 = cells[t2].v[k];
      }
      const Ball ball = tri_ball(pts, {e.first, e.second, z1}, tol);
      if (classify(ball, pts[z2], tol) != Side::Inside) continue;
      // Flip only across a strictly convex quad; e.first and e.second must lie
      // on opposite sides of the new diagonal or the flip inverts a triangle.
      const double s1 = tri_area2(pts[z1], pts[z2], pts[e.first]);
      const double s2 = tri_area2(pts[z1], pts[z2], pts[e.second]);
      if (s1 * s2 >= 0.0) continue;
      const int region = cells[t1].region;
      cells[t1] = oriented_cell(pts, z1, z2, e.first, region);
      cells[t2] = oriented_cell(pts, z1, z2, e.second, region);
      stack.push_back(ekey(e.first, z1));
      stack.push_back(ekey(e.first, z2));
      stack.push_back(ekey(e.second, z1));
      stack.push_back(ekey(e.second, z2));
      if (++flips > flip_cap) throw RepairDiverged("edge flips did not terminate");
    }
  }

  RepairResult res;
  res.mesh.dim = 2;
  res.mesh.vertices = std::move(pts);
  res.mesh.cells = std::move(cells);
  res.mesh.facets = std::move(facets);
  res.insertions = insertions;
  validate_mesh(res.mesh, tol);
  return res;
}

}  // namespace vfvm
