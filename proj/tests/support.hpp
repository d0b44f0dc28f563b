// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared helpers for the test suites. Everything here is an independent
// oracle path: none of it calls into the library routines it checks.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vfvm/geometry.hpp"

namespace testsup {

// Deterministic uniform doubles; avoids std::uniform_real_distribution so the
// stream is identical on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Circumcenter of a 2D triangle by the classic determinant formula
// (perpendicular bisector intersection), independent of the library's
// local-frame solve.
inline vfvm::Vec3 circumcenter2d(const vfvm::Vec3& a, const vfvm::Vec3& b, const vfvm::Vec3& c) {
  const double bx = b[0] - a[0], by = b[1] - a[1];
  const double cx = c[0] - a[0], cy = c[1] - a[1];
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d;
  const double uy = (bx * c2 - cx * b2) / d;
  return {a[0] + ux, a[1] + uy, 0.0};
}

// Dense Gaussian elimination with partial pivoting; the oracle for all
// linear-solve checks. Returns x for A x = b, A given row-major.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  std::vector<int> piv(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
    std::swap(A[k], A[p]);
    std::swap(b[k], b[p]);
    for (int i = k + 1; i < n; ++i) {
      const double l = A[i][k] / A[k][k];
      for (int j = k; j < n; ++j) A[i][j] -= l * A[k][j];
      b[i] -= l * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

}  // namespace testsup
