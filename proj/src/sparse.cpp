// SPDX-License-Identifier: Apache-2.0
#include "vfvm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vfvm/errors.hpp"

namespace vfvm {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  for (const Triplet& t : entries)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw Error("triplet index out of range");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  std::size_t i = 0;
  for (int r = 0; r < n; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      const int c = entries[i].col;
      double v = 0.0;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c)
        v += entries[i++].value;
      if (v != 0.0) {
        m.col_.push_back(c);
        m.val_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::diagonal_matrix(const std::vector<double>& d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (int i = 0; i < static_cast<int>(d.size()); ++i) t.push_back({i, i, d[i]});
  return from_triplets(static_cast<int>(d.size()), std::move(t));
}

double SparseMatrix::coeff(int i, int j) const {
  for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (col_[k] == j) return val_[k];
  return 0.0;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int i = 0; i < n_; ++i) d[i] = coeff(i, i);
  return d;
}

std::vector<double> SparseMatrix::column_sums() const {
  std::vector<double> s(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s[col_[k]] += val_[k];
  return s;
}

bool SparseMatrix::value_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (std::abs(val_[k] - coeff(col_[k], i)) > tol) return false;
  return true;
}

SparseMatrix SparseMatrix::plus_scaled(double a, const SparseMatrix& B, double b) const {
  if (B.n_ != n_) throw Error("size mismatch in plus_scaled");
  std::vector<Triplet> t;
  t.reserve(val_.size() + B.val_.size());
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      t.push_back({i, col_[k], a * val_[k]});
  for (int i = 0; i < n_; ++i)
    for (int k = B.row_ptr_[i]; k < B.row_ptr_[i + 1]; ++k)
      t.push_back({i, B.col_[k], b * B.val_[k]});
  return from_triplets(n_, std::move(t));
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
  char buf[64];
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, col_[k] + 1, val_[k]);
      os << buf;
    }
}

}  // namespace vfvm
