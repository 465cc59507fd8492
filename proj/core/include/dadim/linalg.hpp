#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dadim {

using Complex = std::complex<double>;

// Dense row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix adjoint() const;
  bool is_real() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

// Eigenvalues of a real symmetric n x n matrix (row-major), ascending, by
// cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

// Largest singular value: sqrt of the top eigenvalue of M*M. Complex Hermitian
// products go through the real 2n x 2n embedding.
double spectral_norm(const Matrix& m);

}  // namespace dadim
