// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "vfvm/sparse.hpp"

namespace vfvm {

struct LinearSolveConfig {
  enum class Method { Direct, ConjugateGradient };
  Method method = Method::Direct;
  double rel_tol = 1e-12;  // on ||Ax - b|| / ||b||, CG only
  int max_iter = 0;        // 0 means 10 n
  bool jacobi_precondition = true;
};

/// Reverse Cuthill-McKee ordering of the (symmetrized) pattern; returns the
/// new-to-old vertex order. Deterministic: ties break on vertex index.
std::vector<int> rcm_ordering(const SparseMatrix& a);

/// Banded LU with partial pivoting after RCM reordering. Reusable for
/// repeated solves with one matrix. Throws SingularMatrix on a zero pivot.
class BandFactorization {
 public:
  explicit BandFactorization(const SparseMatrix& a);
  std::vector<double> solve(const std::vector<double>& b) const;
  int bandwidth() const { return kl_; }

 private:
  int n_ = 0, kl_ = 0, ldab_ = 0;
  std::vector<int> order_;   // new index -> old index
  std::vector<int> piv_;
  std::vector<double> scale_;  // power-of-two row equilibration factors
  std::vector<double> ab_;   // LAPACK-style band storage, column major
};

/// Solve A x = b. Direct = banded LU (default); ConjugateGradient for
/// symmetric positive definite systems, Jacobi preconditioned, deterministic
/// reduction order. Throws SingularMatrix / NotConverged.
std::vector<double> solve_linear(const SparseMatrix& a, const std::vector<double>& b,
                                 const LinearSolveConfig& cfg = {});

struct NewtonConfig {
  double abs_tol = 1e-10;  // on the (scaled) max-norm of the residual
  int max_iter = 25;
  int polish_iters = 0;    // extra undamped steps after first convergence
  std::vector<double> residual_scale;  // optional per-component divisor
};

struct NewtonResult {
  std::vector<double> x;
  int iterations = 0;
  std::vector<double> residual_history;  // scaled max-norms, one per iterate
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacobianFn = std::function<SparseMatrix(const std::vector<double>&)>;

/// Undamped Newton iteration with caller-supplied analytic Jacobian.
/// Throws NotConverged (max_iter or non-finite residual) or SingularJacobian.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> x0, const NewtonConfig& cfg = {});

}  // namespace vfvm
