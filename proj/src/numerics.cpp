#include "tmimo/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <string>

namespace tmimo {

namespace {

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

EMatrix to_eigen(const ComplexMatrix& m) {
  EMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

EVector to_eigen(const ComplexVector& v) {
  EVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

template <typename Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

template <typename Derived>
ComplexVector vector_from_eigen(const Eigen::MatrixBase<Derived>& v) {
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return out;
}

}  // namespace

double ComplexVector::norm_sq() const { return to_eigen(*this).squaredNorm(); }

ComplexMatrix ComplexMatrix::identity(std::size_t n) { return from_eigen(EMatrix::Identity(n, n)); }

ComplexMatrix ComplexMatrix::adjoint() const { return from_eigen(to_eigen(*this).adjoint()); }

double ComplexMatrix::frobenius_norm() const { return to_eigen(*this).norm(); }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  return from_eigen(to_eigen(a) * to_eigen(b));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: dimension mismatch");
  return from_eigen(to_eigen(a) - to_eigen(b));
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  return vector_from_eigen(to_eigen(a) * to_eigen(x));
}

QrFactors qr_decompose(const ComplexMatrix& h) {
  const std::size_t m = h.rows();
  const std::size_t n = h.cols();
  if (m < n) throw std::invalid_argument("qr_decompose: needs rows >= cols");
  const double tol = 1e-12 * h.frobenius_norm();

  const Eigen::HouseholderQR<EMatrix> qr(to_eigen(h));
  EMatrix q = qr.householderQ() * EMatrix::Identity(m, n);
  EMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();

  // Rotate so that diag(R) is real positive: Q D, D^H R.
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (!(mag > tol))
      throw DecompositionError("qr_decompose: rank-deficient input at column " + std::to_string(k));
    const Complex d = r(k, k) / mag;
    r.row(k) *= std::conj(d);
    r(k, k) = mag;
    q.col(k) *= d;
  }
  return {from_eigen(q), from_eigen(r)};
}

ComplexVector rotate_received(const ComplexMatrix& q, const ComplexVector& y) {
  if (q.rows() != y.size()) throw std::invalid_argument("rotate_received: dimension mismatch");
  return vector_from_eigen(to_eigen(q).adjoint() * to_eigen(y));
}

}  // namespace tmimo
