// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "support.hpp"
#include "vfvm/errors.hpp"
#include "vfvm/assembly.hpp"
#include "vfvm/meshgen.hpp"
#include "vfvm/solver.hpp"
#include "vfvm/sparse.hpp"

using vfvm::BandFactorization;
using vfvm::LinearSolveConfig;
using vfvm::SparseMatrix;
using vfvm::Triplet;

namespace {

// Random SPD matrix B*B^T + n*I, dense pattern.
SparseMatrix random_spd(int n, testsup::Rng& rng, std::vector<std::vector<double>>& dense) {
  std::vector<std::vector<double>> b(n, std::vector<double>(n));
  for (auto& row : b)
    for (double& v : row) v = rng.uniform(-1.0, 1.0);
  dense.assign(n, std::vector<double>(n, 0.0));
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = i == j ? static_cast<double>(n) : 0.0;
      for (int k = 0; k < n; ++k) s += b[i][k] * b[j][k];
      dense[i][j] = s;
      entries.push_back({i, j, s});
    }
  return SparseMatrix::from_triplets(n, entries);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("triplets with duplicates are summed and exact zeros dropped") {
  std::vector<Triplet> entries{{0, 0, 1.0}, {0, 1, 2.0}, {0, 1, 3.0},
                               {1, 1, 4.0}, {1, 0, 5.0}, {1, 0, -5.0}};
  const SparseMatrix a = SparseMatrix::from_triplets(2, entries);
  CHECK(a.nnz() == 3);
  CHECK(a.coeff(0, 0) == 1.0);
  CHECK(a.coeff(0, 1) == 5.0);
  CHECK(a.coeff(1, 0) == 0.0);
  CHECK(a.coeff(1, 1) == 4.0);
}

TEST_CASE("matrix vector product and column sums") {
  const SparseMatrix a =
      SparseMatrix::from_triplets(3, {{0, 0, 2.0}, {0, 2, -1.0}, {1, 1, 3.0}, {2, 0, 4.0}});
  const std::vector<double> y = a.multiply({1.0, 2.0, 3.0});
  CHECK(y[0] == -1.0);
  CHECK(y[1] == 6.0);
  CHECK(y[2] == 4.0);
  const std::vector<double> cs = a.column_sums();
  CHECK(cs[0] == 6.0);
  CHECK(cs[1] == 3.0);
  CHECK(cs[2] == -1.0);
}

TEST_CASE("linear combination merges patterns") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 2.0}});
  const SparseMatrix b = SparseMatrix::from_triplets(2, {{0, 1, 3.0}, {1, 1, 1.0}});
  const SparseMatrix c = a.plus_scaled(2.0, b, -1.0);
  CHECK(c.coeff(0, 0) == 2.0);
  CHECK(c.coeff(0, 1) == -3.0);
  CHECK(c.coeff(1, 1) == 3.0);
}

TEST_CASE("coordinate export is one based with full precision") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, {{0, 0, 0.1}, {1, 0, -2.0}});
  std::ostringstream os;
  a.write_coordinate(os);
  std::istringstream is(os.str());
  int r, c;
  double v;
  is >> r >> c >> v;
  CHECK(r == 1);
  CHECK(c == 1);
  CHECK(v == 0.1);
  is >> r >> c >> v;
  CHECK(r == 2);
  CHECK(c == 1);
  CHECK(v == -2.0);
  CHECK(!(is >> r));  // exactly one line per stored entry, nothing else
}

TEST_CASE("direct and conjugate gradient solves match a dense elimination oracle") {
  testsup::Rng rng(42);
  const int n = 10;
  std::vector<std::vector<double>> dense;
  const SparseMatrix a = random_spd(n, rng, dense);
  std::vector<double> b(n);
  for (double& v : b) v = rng.uniform(-1.0, 1.0);

  const std::vector<double> ref = testsup::dense_solve(dense, b);

  LinearSolveConfig direct;
  const std::vector<double> xd = vfvm::solve_linear(a, b, direct);
  LinearSolveConfig cg;
  cg.method = LinearSolveConfig::Method::ConjugateGradient;
  const std::vector<double> xc = vfvm::solve_linear(a, b, cg);
  for (int i = 0; i < n; ++i) {
    CHECK(xd[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK(xc[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
  // Iterative stopping rule: residual small relative to the data.
  const std::vector<double> ax = a.multiply(xc);
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < n; ++i) {
    rn += (ax[i] - b[i]) * (ax[i] - b[i]);
    bn += b[i] * b[i];
  }
  CHECK(std::sqrt(rn) <= 1e-12 * std::sqrt(bn) * 1.0001);
}

TEST_CASE("tridiagonal system reproduces a known solution") {
  const int n = 1000;
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) {
    entries.push_back({i, i, 2.0});
    if (i > 0) entries.push_back({i, i - 1, -1.0});
    if (i + 1 < n) entries.push_back({i, i + 1, -1.0});
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, entries);
  const std::vector<double> b = a.multiply(std::vector<double>(n, 1.0));
  const std::vector<double> x = vfvm::solve_linear(a, b, {});
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("reordering recovers a narrow band from a shuffled chain") {
  // Path graph 0-1-...-(n-1) with vertices relabeled by a fixed permutation.
  const int n = 64;
  testsup::Rng rng(7);
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(label[i], label[rng.uniform_int(0, i)]);
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) entries.push_back({label[i], label[i], 2.0});
  for (int i = 0; i + 1 < n; ++i) {
    entries.push_back({label[i], label[i + 1], -1.0});
    entries.push_back({label[i + 1], label[i], -1.0});
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, entries);
  const BandFactorization fac(a);
  CHECK(fac.bandwidth() == 1);
  const std::vector<double> b = a.multiply(std::vector<double>(n, 3.0));
  const std::vector<double> x = fac.solve(b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("unsymmetric system needs pivoting") {
  // Leading pivot is zero; factorization must row swap.
  const SparseMatrix a =
      SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 2.0}, {1, 1, 1.0}});
  const std::vector<double> x = vfvm::solve_linear(a, {3.0, 5.0}, {});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("singular matrix is reported") {
  const SparseMatrix a =
      SparseMatrix::from_triplets(3, {{0, 0, 1.0}, {1, 1, 1.0}});  // empty last row
  CHECK_THROWS_AS(vfvm::solve_linear(a, {1.0, 1.0, 1.0}, {}), vfvm::SingularMatrix);
}

TEST_CASE("newton iteration converges quadratically on a scalar quadratic") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] - 4.0};
  };
  auto jacobian = [](const std::vector<double>& x) {
    return SparseMatrix::from_triplets(1, {{0, 0, 2.0 * x[0]}});
  };
  vfvm::NewtonConfig cfg;
  cfg.abs_tol = 1e-12;
  const vfvm::NewtonResult res = vfvm::newton_solve(residual, jacobian, {3.0}, cfg);
  CHECK(res.x[0] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(res.iterations <= 6);
  REQUIRE(res.residual_history.size() >= 3);
  for (std::size_t k = 1; k < res.residual_history.size(); ++k)
    CHECK(res.residual_history[k] < res.residual_history[k - 1]);
  // Errors e=|x-2| satisfy e' = e^2/(2x) <= e^2 near the root; first two
  // corrections from x0=3 give e1=1/6 and e2=1/6^2/(2*(2+1/6)).
  const double e1 = 1.0 / 6.0;
  CHECK(res.residual_history[1] == doctest::Approx(e1 * (4.0 + e1)).epsilon(1e-12));
}

TEST_CASE("newton failure on a residual with no root") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{x[0] * x[0] + 1.0};
  };
  auto jacobian = [](const std::vector<double>& x) {
    return SparseMatrix::from_triplets(1, {{0, 0, 2.0 * x[0]}});
  };
  vfvm::NewtonConfig cfg;
  cfg.max_iter = 30;
  // x0 = 1 would step exactly onto the singular point of the Jacobian.
  CHECK_THROWS_AS(vfvm::newton_solve(residual, jacobian, {0.8}, cfg), vfvm::NotConverged);
  CHECK_THROWS_AS(vfvm::newton_solve(residual, jacobian, {1.0}, cfg), vfvm::SingularJacobian);
}

TEST_CASE("newton residual scaling changes the stopping test") {
  auto residual = [](const std::vector<double>& x) {
    return std::vector<double>{1e6 * (x[0] - 1.0)};
  };
  auto jacobian = [](const std::vector<double>&) {
    return SparseMatrix::from_triplets(1, {{0, 0, 1e6}});
  };
  vfvm::NewtonConfig cfg;
  cfg.abs_tol = 1e-8;
  cfg.residual_scale = {1e6};
  const vfvm::NewtonResult res = vfvm::newton_solve(residual, jacobian, {5.0}, cfg);
  CHECK(res.x[0] == doctest::Approx(1.0));
  CHECK(res.iterations <= 2);
}

TEST_CASE("band pivoting survives penalty rows under reordering") {
  // Helmholtz-like tensor-grid system with huge Dirichlet penalty diagonals.
  // Without row equilibration, partial pivoting can pull a penalty row into
  // the elimination of an ordinary row and its 1e30-scale fill cancels away
  // the interior equations; this system triggered exactly that.
  const std::vector<double> xs = {0.0, 0.13, 0.4, 0.55, 1.02, 1.3, 2.0};
  std::vector<double> ys(9);
  for (int j = 0; j < 9; ++j) ys[j] = j / 8.0;
  const vfvm::Mesh m = vfvm::structured_grid_coords(xs, ys, vfvm::DiagonalRule::Uniform);
  const SparseMatrix sys =
      vfvm::assemble_laplace(m).plus_scaled(1.0, vfvm::assemble_mass(m), -10.0);
  vfvm::BoundaryCondition bc;
  bc.by_tag[1] = vfvm::BoundaryCondition::dirichlet_const(1.0);
  bc.by_tag[3] = vfvm::BoundaryCondition::dirichlet_const(0.0);
  const std::vector<double> zero(sys.size(), 0.0);
  const vfvm::BoundaryApplyResult ap = vfvm::apply_boundary_conditions(
      sys, zero, m, vfvm::boundary_voronoi_measures(m), bc, zero);
  const std::vector<double> u = vfvm::solve_linear(ap.matrix, ap.rhs);
  const std::vector<double> r = ap.matrix.multiply(u);
  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));
  for (int i = 0; i < ap.matrix.size(); ++i)
    if (std::abs(ap.matrix.coeff(i, i)) < 1e20)
      CHECK(std::abs(r[i] - ap.rhs[i]) <= 1e-10 * umax);
}

TEST_CASE("polish iterations run after convergence") {
  int calls = 0;
  auto residual = [&calls](const std::vector<double>& x) {
    ++calls;
    return std::vector<double>{x[0] * x[0] - 4.0};
  };
  auto jacobian = [](const std::vector<double>& x) {
    return SparseMatrix::from_triplets(1, {{0, 0, 2.0 * x[0]}});
  };
  vfvm::NewtonConfig plain;
  plain.abs_tol = 1e-10;
  const vfvm::NewtonResult base = vfvm::newton_solve(residual, jacobian, {3.0}, plain);
  vfvm::NewtonConfig polished = plain;
  polished.polish_iters = 1;
  const vfvm::NewtonResult extra = vfvm::newton_solve(residual, jacobian, {3.0}, polished);
  CHECK(extra.iterations == base.iterations + 1);
  CHECK(std::abs(extra.x[0] - 2.0) <= std::abs(base.x[0] - 2.0));
}

}  // TEST_SUITE
