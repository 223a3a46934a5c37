#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace tmimo {

using Complex = std::complex<double>;

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : data_(n) {}
  ComplexVector(std::initializer_list<Complex> init) : data_(init) {}
  explicit ComplexVector(std::vector<Complex> v) : data_(std::move(v)) {}

  std::size_t size() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> view() const { return data_; }
  std::span<Complex> view() { return data_; }

  double norm_sq() const;

 private:
  std::vector<Complex> data_;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x);

struct QrFactors {
  ComplexMatrix q;  // rows x cols, orthonormal columns
  ComplexMatrix r;  // cols x cols, upper triangular, real positive diagonal
};

/// Thin Householder QR of a tall matrix. The diagonal of R is rotated to be
/// real and strictly positive. Throws DecompositionError when a diagonal
/// magnitude falls below 1e-12 * ||h||_F.
QrFactors qr_decompose(const ComplexMatrix& h);

/// Q^H y.
ComplexVector rotate_received(const ComplexMatrix& q, const ComplexVector& y);

}  // namespace tmimo
