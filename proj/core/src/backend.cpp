#include "grassfactor/backend.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace grassfactor::backend {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double orthogonality_residual(const RealMatrix& q) {
  return (q.transpose() * q - RealMatrix::Identity(q.cols(), q.cols())).norm();
}

double unitarity_residual(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

RealMatrix project_orthogonal(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

ComplexMatrix project_unitary(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

RealMatrix SchurForm::middle() const {
  int n = q.rows();
  RealMatrix m = RealMatrix::Zero(n, n);
  int pos = 0;
  for (const auto& b : blocks) {
    if (b.kind == SchurBlock::Kind::Rotation) {
      double c = std::cos(2 * b.theta), s = std::sin(2 * b.theta);
      m(pos, pos) = c;
      m(pos, pos + 1) = s;
      m(pos + 1, pos) = -s;
      m(pos + 1, pos + 1) = c;
      pos += 2;
    } else {
      m(pos, pos) = b.sign;
      pos += 1;
    }
  }
  return m;
}

SchurForm schur_orthogonal(const RealMatrix& q_in, double tol) {
  const int n = q_in.rows();
  if (q_in.cols() != n || n == 0) throw BadDimensions("schur_orthogonal: square matrix required");
  double orth = orthogonality_residual(q_in);
  if (orth > tol * n) throw NotOrthogonal("schur_orthogonal: input not orthogonal within tolerance");
  // Project inputs that are orthogonal only up to tol; skip when already clean.
  RealMatrix q = (orth > 1e-13 * n) ? project_orthogonal(q_in) : q_in;

  RealMatrix s = 0.5 * (q + q.transpose());
  RealMatrix a = 0.5 * (q - q.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("schur_orthogonal: eigensolver failed");
  const RealVector& cosv = es.eigenvalues();
  const RealMatrix& vecs = es.eigenvectors();

  struct Pair { RealVector u, v; double c, s; };
  std::vector<Pair> rotations;
  std::vector<RealVector> plus, minus;

  int lo = 0;
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && cosv(hi) - cosv(hi - 1) <= kClusterTol) ++hi;
    // cluster columns [lo, hi)
    RealMatrix w = vecs.middleCols(lo, hi - lo);
    int d = hi - lo;
    // Peel off rotation 2-planes while the skew part acts nontrivially.
    while (d > 0) {
      RealMatrix k = w.transpose() * a * w;
      Eigen::JacobiSVD<RealMatrix> ks(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (d == 1 || ks.singularValues()(0) <= kSignTol) {
        // remaining directions are fixed signs
        for (int j = 0; j < d; ++j) {
          RealVector u = w.col(j);
          double c = u.dot(q * u);
          if (c >= 0) plus.push_back(u); else minus.push_back(u);
        }
        break;
      }
      RealVector coord = ks.matrixV().col(0);
      RealVector u = w * coord;
      RealVector au = a * u;
      double sv = au.norm();
      RealVector v = au / sv;
      double c = u.dot(q * u);
      rotations.push_back({u, v, c, sv});
      // deflate the extracted 2-plane from the cluster basis
      RealMatrix rest(n, d);
      int cnt = 0;
      for (int j = 0; j < d; ++j) {
        RealVector col = w.col(j);
        col -= u * u.dot(col);
        col -= v * v.dot(col);
        double nn = col.norm();
        if (nn > 1e-6) rest.col(cnt++) = col / nn;
      }
      if (cnt > d - 2) cnt = d - 2;  // guard; exact count is d-2
      if (cnt < d - 2) {
        // re-orthonormalize leftovers against extracted pairs via projector
        // (rare; rebuild from scratch)
        RealMatrix proj = RealMatrix::Identity(n, n);
        for (const auto& r : rotations) {
          proj -= r.u * r.u.transpose();
          proj -= r.v * r.v.transpose();
        }
        RealMatrix pw = proj * vecs.middleCols(lo, hi - lo);
        Eigen::ColPivHouseholderQR<RealMatrix> qr(pw);
        int rank = std::min<int>(d - 2, qr.rank());
        RealMatrix qq = qr.householderQ();
        rest = qq.leftCols(rank);
        cnt = rank;
      }
      if (cnt > 0) {
        // Gram-Schmidt pass to restore orthonormality within the cluster
        RealMatrix w2(n, cnt);
        int m2 = 0;
        for (int j = 0; j < cnt; ++j) {
          RealVector col = rest.col(j);
          for (int i2 = 0; i2 < m2; ++i2) col -= w2.col(i2) * w2.col(i2).dot(col);
          double nn = col.norm();
          if (nn > 1e-8) w2.col(m2++) = col / nn;
        }
        w = w2.leftCols(m2);
        d = m2;
      } else {
        d = 0;
      }
    }
    lo = hi;
  }

  std::sort(rotations.begin(), rotations.end(),
            [](const Pair& x, const Pair& y) { return std::atan2(x.s, x.c) < std::atan2(y.s, y.c); });

  SchurForm out;
  out.q.resize(n, n);
  int pos = 0;
  for (const auto& r : rotations) {
    // basis order (v, u) yields [[c, s], [-s, c]] with s > 0
    out.q.col(pos) = r.v;
    out.q.col(pos + 1) = r.u;
    double phi = std::atan2(r.s, r.c);  // in (0, pi)
    out.blocks.push_back({SchurBlock::Kind::Rotation, phi / 2, 0});
    pos += 2;
  }
  for (const auto& u : plus) {
    out.q.col(pos++) = u;
    out.blocks.push_back({SchurBlock::Kind::Sign, 0.0, 1});
  }
  for (const auto& u : minus) {
    out.q.col(pos++) = u;
    out.blocks.push_back({SchurBlock::Kind::Sign, 0.0, -1});
  }
  if (pos != n) throw ConvergenceFailure("schur_orthogonal: block extraction lost dimensions");
  return out;
}

ComplexMatrix UnitaryEig::reconstruct() const {
  ComplexMatrix d = ComplexMatrix::Zero(q.rows(), q.cols());
  for (int i = 0; i < q.cols(); ++i) d(i, i) = std::polar(1.0, phases[i]);
  return q * d * q.adjoint();
}

UnitaryEig eig_unitary(const ComplexMatrix& u_in, double tol) {
  const int n = u_in.rows();
  if (u_in.cols() != n || n == 0) throw BadDimensions("eig_unitary: square matrix required");
  double unit = unitarity_residual(u_in);
  if (unit > tol * n) throw NotUnitary("eig_unitary: input not unitary within tolerance");
  ComplexMatrix u = (unit > 1e-13 * n) ? project_unitary(u_in) : u_in;

  Eigen::ComplexSchur<ComplexMatrix> schur(u, true);
  if (schur.info() != Eigen::Success) throw ConvergenceFailure("eig_unitary: Schur iteration failed");
  // For a normal matrix T is diagonal up to roundoff; take diagonal phases.
  ComplexMatrix t = schur.matrixT();
  ComplexMatrix q = schur.matrixU();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phases(n);
  for (int i = 0; i < n; ++i) {
    double ph = std::arg(t(i, i));
    if (ph <= -kPi) ph = kPi;  // land exactly on (-pi, pi]
    phases[i] = ph;
  }
  std::sort(order.begin(), order.end(), [&](int i, int j) { return phases[i] > phases[j]; });

  UnitaryEig out;
  out.q.resize(n, n);
  out.phases.resize(n);
  for (int i = 0; i < n; ++i) {
    out.q.col(i) = q.col(order[i]);
    out.phases[i] = phases[order[i]];
  }
  return out;
}

Svd svd(const RealMatrix& m) {
  Eigen::BDCSVD<RealMatrix> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

}  // namespace grassfactor::backend
