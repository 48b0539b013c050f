#include "genrank/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "genrank/errors.hpp"

namespace genrank {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InputError("Matrix: negative dimensions");
  data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(Matrix a, double tol, int max_sweeps) {
  if (!a.is_square()) throw InputError("jacobi_eigenvalues: matrix must be square");
  if (!a.is_symmetric()) throw InputError("jacobi_eigenvalues: matrix must be symmetric");
  const int n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {a(0, 0)};

  const double scale = std::max(frobenius_norm(a), 1e-300);
  const double threshold = tol * scale;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= threshold / (static_cast<double>(n) * n)) continue;

        const double diff = a(q, q) - a(p, p);
        double t;
        if (std::abs(apq) * 100.0 < std::abs(diff) * 1e-16) {
          t = apq / diff;
        } else {
          const double theta = 0.5 * diff / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - s * (arq + tau * arp);
          a(p, r) = a(r, p);
          a(r, q) = arq + s * (arp - tau * arq);
          a(q, r) = a(r, q);
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace genrank
