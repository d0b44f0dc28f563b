// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

namespace vfvm {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square sparse matrix in CSR form. Immutable after construction; duplicates
/// are summed in (row, col) order and exact zeros dropped, so identical
/// triplet streams produce bit-identical matrices.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(int n, std::vector<Triplet> entries);
  static SparseMatrix diagonal_matrix(const std::vector<double>& d);

  int size() const { return n_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  /// Stored value at (i, j), 0 when the entry is not in the pattern.
  double coeff(int i, int j) const;

  /// y = A x with a fixed (row-major) accumulation order.
  std::vector<double> multiply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;
  std::vector<double> column_sums() const;

  bool value_symmetric(double tol) const;

  /// a*this + b*B on the merged pattern.
  SparseMatrix plus_scaled(double a, const SparseMatrix& B, double b) const;

  /// Coordinate text format: "row col value" per line, 1-based indices,
  /// 17 significant digits.
  void write_coordinate(std::ostream& os) const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

}  // namespace vfvm
