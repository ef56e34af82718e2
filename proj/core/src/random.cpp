#include "grassfactor/random.hpp"

#include <Eigen/QR>

namespace grassfactor {

RealMatrix haar_orthogonal(int n, Rng& rng) {
  RealMatrix g = rng.gaussian(n, n);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

RealMatrix haar_special_orthogonal(int n, Rng& rng) {
  RealMatrix q = haar_orthogonal(n, rng);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

ComplexMatrix haar_unitary(int n, Rng& rng) {
  ComplexMatrix g = rng.cgaussian(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix haar_special_unitary(int n, Rng& rng) {
  ComplexMatrix q = haar_unitary(n, rng);
  Complex det = q.determinant();
  // spread the correcting phase across all columns to keep entries balanced
  Complex phase = std::pow(det, -1.0 / n);
  q *= phase;
  // pow can land on the wrong n-th root branch; fix on one column
  q.col(0) /= q.determinant();
  return q;
}

}  // namespace grassfactor
