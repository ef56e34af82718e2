#include "grassfactor/grassmann.hpp"

#include <Eigen/QR>
#include <cmath>

namespace grassfactor::grassmann {

ValidationReport gr_validate(const GrassPoint& x, double tol) {
  ValidationReport r;
  const int n = x.n;
  if (x.m.rows() != n || x.m.cols() != n || x.k < 0 || x.k > n) return r;
  if (x.field == Field::Real) {
    RealMatrix m = x.m.real();
    r.imaginary_residual = x.m.imag().norm();
    r.involution_residual = (m * m - RealMatrix::Identity(n, n)).norm();
    r.hermitian_residual = (m - m.transpose()).norm();
    r.trace_residual = std::abs(m.trace() - double(2 * x.k - n));
    r.ok = r.involution_residual <= tol * n && r.hermitian_residual <= tol * n &&
           r.trace_residual <= tol * n && r.imaginary_residual <= tol * n;
  } else {
    r.involution_residual = (x.m * x.m - ComplexMatrix::Identity(n, n)).norm();
    r.hermitian_residual = (x.m - x.m.adjoint()).norm();
    r.trace_residual = std::abs(x.m.trace() - Complex(2 * x.k - n, 0));
    r.ok = r.involution_residual <= tol * n && r.hermitian_residual <= tol * n &&
           r.trace_residual <= tol * n;
  }
  return r;
}

GrassPoint gr_from_matrix(Field field, const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw BadDimensions("gr_from_matrix: square matrix required");
  const int n = int(m.rows());
  double tr = m.trace().real();
  double kd = (tr + n) / 2.0;
  double kr = std::round(kd);
  if (std::abs(kd - kr) > tol * n || kr < 0 || kr > n)
    throw InvalidPoint("gr_from_matrix: trace is not 2k - n for integer k");
  GrassPoint x{field, n, int(kr), m};
  ValidationReport rep = gr_validate(x, tol);
  if (!rep.ok) throw InvalidPoint("gr_from_matrix: not a Grassmannian involution within tolerance");
  return x;
}

GrassPoint gr_canonical(Field field, int k, int n) {
  if (n <= 0 || k < 0 || k > n) throw BadDimensions("gr_canonical: need 0 <= k <= n, n >= 1");
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (int i = k; i < n; ++i) m(i, i) = -1.0;
  return {field, n, k, m};
}

GrassPoint gr_from_basis(Field field, const ComplexMatrix& basis, double tol) {
  const int n = int(basis.rows()), k = int(basis.cols());
  if (n == 0 || k < 0 || k > n) throw BadDimensions("gr_from_basis: need n x k basis with k <= n");
  if (field == Field::Real && basis.imag().norm() > tol * n)
    throw NotOrthonormal("gr_from_basis: real field requires a real basis");
  if ((basis.adjoint() * basis - ComplexMatrix::Identity(k, k)).norm() > tol * n)
    throw NotOrthonormal("gr_from_basis: columns not orthonormal within tolerance");
  ComplexMatrix m = 2.0 * basis * basis.adjoint() - ComplexMatrix::Identity(n, n);
  if (field == Field::Real) m = m.real().cast<Complex>();
  return {field, n, k, m};
}

ComplexMatrix gr_basis_of(const GrassPoint& x, double tol) {
  ValidationReport rep = gr_validate(x, tol);
  if (!rep.ok) throw InvalidPoint("gr_basis_of: invalid point");
  // columns of (x + I)/2 span the +1 eigenspace; rank-revealing QR extracts
  // an orthonormal basis
  ComplexMatrix p = 0.5 * (x.m + ComplexMatrix::Identity(x.n, x.n));
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(p);
  ComplexMatrix q = qr.householderQ();
  return q.leftCols(x.k);
}

GrassPoint gr_sample(Field field, int k, int n, Rng& rng) {
  if (n <= 0 || k < 0 || k > n) throw BadDimensions("gr_sample: need 0 <= k <= n");
  GrassPoint base = gr_canonical(field, k, n);
  if (field == Field::Real) {
    RealMatrix q = haar_orthogonal(n, rng);
    RealMatrix m = q * base.m.real() * q.transpose();
    return {field, n, k, m.cast<Complex>()};
  }
  ComplexMatrix q = haar_unitary(n, rng);
  return {field, n, k, q * base.m * q.adjoint()};
}

GrassPoint gr_sample(Field field, int k, int n, std::uint64_t seed) {
  Rng rng(seed);
  return gr_sample(field, k, n, rng);
}

}  // namespace grassfactor::grassmann
