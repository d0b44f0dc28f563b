// SPDX-License-Identifier: Apache-2.0
#include "vfvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vfvm/errors.hpp"

namespace vfvm {

namespace {

std::vector<std::vector<int>> pattern_adjacency(const SparseMatrix& a) {
  const int n = a.size();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const int j = a.cols()[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

int bandwidth_under(const SparseMatrix& a, const std::vector<int>& pos) {
  int bw = 0;
  for (int i = 0; i < a.size(); ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      bw = std::max(bw, std::abs(pos[i] - pos[a.cols()[k]]));
  return bw;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::vector<int> rcm_ordering(const SparseMatrix& a) {
  const int n = a.size();
  const auto adj = pattern_adjacency(a);
  std::vector<int> degree(n);
  for (int i = 0; i < n; ++i) degree[i] = static_cast<int>(adj[i].size());

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  auto by_degree = [&](int x, int y) {
    return degree[x] != degree[y] ? degree[x] < degree[y] : x < y;
  };
  for (;;) {
    int root = -1;
    for (int i = 0; i < n; ++i)
      if (!seen[i] && (root < 0 || by_degree(i, root))) root = i;
    if (root < 0) break;
    seen[root] = 1;
    std::size_t head = order.size();
    order.push_back(root);
    while (head < order.size()) {
      const int u = order[head++];
      std::vector<int> next;
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          next.push_back(v);
        }
      std::sort(next.begin(), next.end(), by_degree);
      order.insert(order.end(), next.begin(), next.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

BandFactorization::BandFactorization(const SparseMatrix& a) {
  n_ = a.size();
  order_ = rcm_ordering(a);
  std::vector<int> pos(n_);
  for (int k = 0; k < n_; ++k) pos[order_[k]] = k;
  // Keep the cheaper of the natural and RCM orderings.
  std::vector<int> identity(n_);
  for (int k = 0; k < n_; ++k) identity[k] = k;
  if (bandwidth_under(a, identity) <= bandwidth_under(a, pos)) {
    order_ = identity;
    pos = identity;
  }

  kl_ = bandwidth_under(a, pos);
  const int kd = 2 * kl_;  // upper width incl. pivoting fill
  ldab_ = kd + kl_ + 1;
  ab_.assign(static_cast<std::size_t>(n_) * ldab_, 0.0);
  auto at = [&](int i, int j) -> double& {
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kd + i - j)];
  };
  for (int i = 0; i < n_; ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      at(pos[i], pos[a.cols()[k]]) = a.values()[k];

  // Equilibrate rows by powers of two (exact). Without this, partial
  // pivoting can pull a Dirichlet penalty row with its huge diagonal into
  // the elimination of an ordinary row, and the 1e30-scale fill wipes out
  // the interior equations through cancellation.
  // Row maxima and scaling walk the storage by columns; contiguous in i.
  std::vector<double> rowmax(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - kl_), ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i) rowmax[i] = std::max(rowmax[i], std::abs(at(i, j)));
  }
  scale_.assign(n_, 1.0);
  for (int i = 0; i < n_; ++i) {
    if (rowmax[i] == 0.0) throw SingularMatrix("zero row " + std::to_string(order_[i]));
    scale_[i] = std::ldexp(1.0, -std::ilogb(rowmax[i]));
  }
  for (int j = 0; j < n_; ++j) {
    const int ilo = std::max(0, j - kl_), ihi = std::min(n_ - 1, j + kl_);
    for (int i = ilo; i <= ihi; ++i) at(i, j) *= scale_[i];
  }

  piv_.resize(n_);
  for (int k = 0; k < n_; ++k) {
    int p = k;
    const int ilast = std::min(n_ - 1, k + kl_);
    for (int i = k + 1; i <= ilast; ++i)
      if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
    piv_[k] = p;
    if (at(p, k) == 0.0) throw SingularMatrix("zero pivot at column " + std::to_string(k));
    const int jlast = std::min(n_ - 1, k + kd);
    if (p != k)
      for (int j = k; j <= jlast; ++j) std::swap(at(k, j), at(p, j));
    // Rank-1 update by columns: colj[i] indexes at(i, j), contiguous in i.
    auto column = [&](int j) { return ab_.data() + static_cast<std::ptrdiff_t>(j) * ldab_ - j + kd; };
    double* colk = column(k);
    const double piv = colk[k];
    for (int i = k + 1; i <= ilast; ++i) colk[i] /= piv;
    for (int j = k + 1; j <= jlast; ++j) {
      const double ukj = at(k, j);
      if (ukj == 0.0) continue;
      double* colj = column(j);
      for (int i = k + 1; i <= ilast; ++i) colj[i] -= colk[i] * ukj;
    }
  }
}

std::vector<double> BandFactorization::solve(const std::vector<double>& b) const {
  const int kd = 2 * kl_;
  auto at = [&](int i, int j) -> double {
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kd + i - j)];
  };
  std::vector<double> x(n_);
  for (int k = 0; k < n_; ++k) x[k] = b[order_[k]] * scale_[k];
  for (int k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    const int ilast = std::min(n_ - 1, k + kl_);
    for (int i = k + 1; i <= ilast; ++i) x[i] -= at(i, k) * x[k];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    const int jlast = std::min(n_ - 1, i + kd);
    for (int j = i + 1; j <= jlast; ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  std::vector<double> out(n_);
  for (int k = 0; k < n_; ++k) out[order_[k]] = x[k];
  return out;
}

namespace {

std::vector<double> conjugate_gradient(const SparseMatrix& a, const std::vector<double>& b,
                                       const LinearSolveConfig& cfg) {
  const int n = a.size();
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10 * n;
  double bnorm2 = 0.0;
  for (double v : b) bnorm2 += v * v;
  std::vector<double> x(n, 0.0);
  if (bnorm2 == 0.0) return x;

  std::vector<double> minv(n, 1.0);
  if (cfg.jacobi_precondition) {
    const std::vector<double> d = a.diagonal();
    for (int i = 0; i < n; ++i) minv[i] = d[i] != 0.0 ? 1.0 / d[i] : 1.0;
  }
  std::vector<double> r = b;
  std::vector<double> z(n), p(n);
  for (int i = 0; i < n; ++i) p[i] = z[i] = minv[i] * r[i];
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];

  const double stop2 = cfg.rel_tol * cfg.rel_tol * bnorm2;
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<double> ap = a.multiply(p);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) throw NotConverged("conjugate gradient: operator not positive definite");
    const double alpha = rz / pap;
    double rnorm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm2 += r[i] * r[i];
    }
    if (rnorm2 <= stop2) return x;
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = minv[i] * r[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw NotConverged("conjugate gradient: no convergence within max_iter");
}

}  // namespace

std::vector<double> solve_linear(const SparseMatrix& a, const std::vector<double>& b,
                                 const LinearSolveConfig& cfg) {
  if (a.size() != static_cast<int>(b.size())) throw Error("solve_linear: size mismatch");
  if (cfg.method == LinearSolveConfig::Method::ConjugateGradient)
    return conjugate_gradient(a, b, cfg);
  return BandFactorization(a).solve(b);
}

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> x0, const NewtonConfig& cfg) {
  NewtonResult res;
  res.x = std::move(x0);
  const int n = static_cast<int>(res.x.size());
  auto scaled_norm = [&](const std::vector<double>& r) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = cfg.residual_scale.empty() ? 1.0 : cfg.residual_scale[i];
      m = std::max(m, std::abs(r[i]) / s);
    }
    return m;
  };

  std::vector<double> r = residual(res.x);
  if (!all_finite(r)) throw NotConverged("newton: non-finite initial residual");
  res.residual_history.push_back(scaled_norm(r));
  int polish_left = cfg.polish_iters;
  bool converged = res.residual_history.back() <= cfg.abs_tol;
  if (converged && polish_left == 0) return res;

  for (int it = 1; it <= cfg.max_iter + cfg.polish_iters; ++it) {
    SparseMatrix jac = jacobian(res.x);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -r[i];
    std::vector<double> delta;
    try {
      delta = BandFactorization(jac).solve(rhs);
    } catch (const SingularMatrix& e) {
      if (converged) break;  // polishing at the solution; keep the iterate
      throw SingularJacobian(e.what());
    }
    for (int i = 0; i < n; ++i) res.x[i] += delta[i];
    r = residual(res.x);
    res.iterations = it;
    if (!all_finite(r) || !all_finite(res.x)) {
      if (converged) break;
      throw NotConverged("newton: non-finite iterate");
    }
    res.residual_history.push_back(scaled_norm(r));
    if (converged) {
      if (--polish_left <= 0) break;
      continue;
    }
    if (res.residual_history.back() <= cfg.abs_tol) {
      converged = true;
      if (polish_left == 0) break;
    } else if (it >= cfg.max_iter) {
      throw NotConverged("newton: no convergence within max_iter");
    }
  }
  if (!converged) throw NotConverged("newton: no convergence within max_iter");
  return res;
}

}  // namespace vfvm
