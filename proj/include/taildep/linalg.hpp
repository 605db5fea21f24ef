// Small dense matrix helpers. Everything here runs on k x k blocks with
// k <= 20, so plain row-major storage and textbook algorithms are enough.

#ifndef TAILDEP_LINALG_HPP
#define TAILDEP_LINALG_HPP

#include <optional>
#include <vector>

namespace taildep {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  Matrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Lower-triangular L with L L^T = sym. Empty optional when a pivot falls at
// or below min_pivot (matrix not positive definite at that tolerance).
std::optional<Matrix> cholesky_lower(const Matrix& sym, double min_pivot = 1e-12);

// Solve (L L^T) x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const Matrix& L, std::vector<double> b);

// v^T (L L^T)^{-1} v.
double inv_quad_form(const Matrix& L, const std::vector<double>& v);

// Cyclic Jacobi eigendecomposition of a symmetric matrix: A = V diag(w) V^T.
void jacobi_eigen(const Matrix& sym, std::vector<double>& eigenvalues, Matrix& eigenvectors);

}  // namespace taildep

#endif  // TAILDEP_LINALG_HPP
