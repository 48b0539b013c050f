#pragma once

#include <vector>

namespace genrank {

/// Dense row-major matrix. Just enough linear algebra for Gram matrices
/// and the Jacobi eigensolver; no external dependency.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  static Matrix identity(int n);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  bool is_square() const noexcept { return rows_ == cols_; }
  bool is_symmetric(double tol = 1e-9) const;

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm falls below `tol` relative
/// to the Frobenius norm of the input (at most `max_sweeps` sweeps).
/// Returns the eigenvalues in descending order.
std::vector<double> jacobi_eigenvalues(Matrix a, double tol = 1e-10,
                                       int max_sweeps = 100);

}  // namespace genrank
