// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "vfvm/assembly.hpp"
#include "vfvm/mesh.hpp"
#include "vfvm/meshgen.hpp"

namespace vfvm {

/// Pass/fail outcome of one diagnostic run plus the measured numbers.
/// Quantities keep insertion order; keys are documented per experiment.
struct ExperimentReport {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> quantities;
  std::vector<std::string> notes;

  void add(const std::string& key, double value) { quantities.emplace_back(key, value); }
  /// Lookup by key; throws Error if the quantity was not recorded.
  double quantity(const std::string& key) const;
  /// One header line ("experiment <name>: PASS"), the notes, then a
  /// machine-readable block of "key = value" lines (17 significant digits).
  void print(std::ostream& os) const;
};

/// Weak discrete maximum principle on a boundary-conforming mesh: solves
/// A u = 0 for the given Dirichlet data and then for trials-1 further random
/// per-vertex assignments, and checks min(u_D) <= u <= max(u_D) everywhere
/// up to 1e-10 * range (plus a machine floor so constant data passes).
/// Keys: trials, violations, worst_overshoot. Failures are recorded, never
/// thrown.
ExperimentReport run_max_principle(const Mesh& m, const BoundaryCondition& bc, int trials,
                                   uint64_t seed = 42);

/// Residual sign flip on the k-neighbor jump stencil. Edge weights are taken
/// directly: the non-Delaunay row has weight -1 on neighbor 1 and +1 on
/// neighbors 2..k, the repaired row has +1 everywhere. Data is u_1 = 1 - eps
/// and small random values in (0, eps] elsewhere; the residuals land within
/// 10*eps*k of +1 (non-Delaunay) and -1 (Delaunay), and the Newton update of
/// the center against the repaired row is positive. A companion obtuse quad
/// triangulated with the bad diagonal supplies the matrix-level fact: its
/// Laplace matrix has a positive off-diagonal entry.
/// Keys: k, eps, r_nondel, r_del, band, newton_delta, offdiag_positive.
ExperimentReport run_non_delaunay_jump(int k, double eps = 1e-7, uint64_t seed = 42);

/// Criss-cross translation invariance: solves u'' + c u = 0 on a tensor grid
/// of (0,Lx) x (y0,y1) with u = 1 on the bottom, u = 0 on the top and natural
/// conditions on the sides, discretized as A - c [V]. The solution must agree
/// across each grid row to 1e-10 for either diagonal rule; for c = 0 it must
/// equal the linear profile. The FEM system with its lumped mass is solved as
/// well and its row variation is reported without a threshold, together with
/// the lumped masses of the two interior vertex classes.
/// Keys: c, x_variation, diff_1d, linear_error (c = 0 only), fem_x_variation,
/// m11, m22.
ExperimentReport run_crisscross(const std::vector<double>& xs, const std::vector<double>& ys,
                                double c, DiagonalRule rule);
/// Uniform wrapper: square cells of side 1/ny on (0, nx/ny) x (0, 1).
ExperimentReport run_crisscross(int nx, int ny, double c, DiagonalRule rule);

/// Edge-weight compensation across tetrahedron pairs sharing an edge: an
/// acute pair contributes two positive sigmas, a sliver pair one negative
/// contribution with nonnegative sum, and a co-spherical five-point pair sums
/// to the sigma of the four-point tetrahedron left after dropping the shared
/// fifth vertex (the circumcenters coincide).
/// Keys: acute_sigma_a/b, acute_sum, sliver_sigma_a/b, sliver_sum,
/// cospherical_sum, cospherical_virtual, cospherical_gap.
ExperimentReport run_compensation_3d();

}  // namespace vfvm
