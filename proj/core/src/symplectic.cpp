#include "grassfactor/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "grassfactor/random.hpp"

namespace grassfactor::symplectic {

namespace {

ComplexMatrix sp_form_c(int n) { return sp_form(n).cast<Complex>(); }

double symplectic_residual(const ComplexMatrix& m) {
  const int n2 = int(m.rows());
  ComplexMatrix j = sp_form_c(n2 / 2);
  return (m.transpose() * j * m - j).norm();
}

void require_symplectic(const ComplexMatrix& m, double tol, const char* who) {
  const int n2 = int(m.rows());
  if (m.cols() != n2 || n2 % 2 != 0 || n2 == 0)
    throw BadDimensions(std::string(who) + ": even-dimensional square matrix required");
  if (symplectic_residual(m) > tol * n2)
    throw NotSymplectic(std::string(who) + ": m^T J m != J");
}

// Symplectic inverse q^{-1} = -J q^T J; exact for exactly symplectic q and
// structure-preserving for nearly symplectic ones.
ComplexMatrix sp_inverse(const ComplexMatrix& q) {
  ComplexMatrix j = sp_form_c(int(q.rows()) / 2);
  return -j * q.transpose() * j;
}

int half_rank_of(const ComplexMatrix& m, const char* who) {
  const int n2 = int(m.rows());
  double t = m.trace().real();
  double kf = (t + n2) / 4.0;
  int k = int(std::lround(kf));
  if (std::abs(kf - k) > 1e-6 || k < 0 || 2 * k > n2)
    throw ConvergenceFailure(std::string(who) + ": factor trace is not an admissible 4k - 2n");
  return k;
}

SpGrassPoint as_point(Field field, ComplexMatrix m, const char* who) {
  if (field == Field::Real) m = m.real().cast<Complex>();
  int k = half_rank_of(m, who);
  return SpGrassPoint{field, int(m.rows()) / 2, k, std::move(m)};
}

// Builds a symplectic involution Y with Y x Y = x^{-1}. Every eigenvalue
// class of x away from +-1 must have even multiplicity: Y maps E_lambda to
// E_{1/lambda} and (u, u') -> omega(u, Y u') is a nondegenerate skew form on
// E_lambda, so odd multiplicity is a genuine obstruction, not a search
// failure. On E_{+1} and E_{-1}, Y = -I.
ComplexMatrix anti_involution(const ComplexMatrix& x, const char* who) {
  const int n2 = int(x.rows());
  const double cluster = 1e-7;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(x, false);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure(std::string(who) + ": eigenvalue computation failed");
  std::vector<Complex> vals(es.eigenvalues().data(), es.eigenvalues().data() + n2);

  struct Cluster {
    Complex lambda;
    int mult = 0;
  };
  std::vector<Cluster> cl;
  std::vector<bool> used(n2, false);
  for (int i = 0; i < n2; ++i) {
    if (used[i]) continue;
    Cluster c{vals[i], 0};
    Complex acc = 0;
    for (int j = 0; j < n2; ++j)
      if (!used[j] && std::abs(vals[j] - vals[i]) <= cluster) {
        used[j] = true;
        acc += vals[j];
        ++c.mult;
      }
    c.lambda = acc / double(c.mult);
    cl.push_back(c);
  }

  ComplexMatrix j = sp_form_c(n2 / 2);
  auto null_basis = [&](Complex lambda, int mult) {
    ComplexMatrix shifted = x - lambda * ComplexMatrix::Identity(n2, n2);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    // smallest `mult` singular directions span the eigenspace
    return ComplexMatrix(svd.matrixV().rightCols(mult));
  };

  ComplexMatrix domain(n2, n2), image(n2, n2);
  int col = 0;
  std::vector<bool> done(cl.size(), false);
  for (size_t a = 0; a < cl.size(); ++a) {
    if (done[a]) continue;
    const Complex lam = cl[a].lambda;
    if (std::abs(lam - 1.0) <= cluster || std::abs(lam + 1.0) <= cluster) {
      ComplexMatrix w = null_basis(lam, cl[a].mult);
      domain.middleCols(col, cl[a].mult) = w;
      image.middleCols(col, cl[a].mult) = -w;
      col += cl[a].mult;
      done[a] = true;
      continue;
    }
    // find the reciprocal partner class
    size_t partner = cl.size();
    for (size_t b = 0; b < cl.size(); ++b)
      if (!done[b] && b != a && std::abs(cl[b].lambda * lam - 1.0) <= 10 * cluster) partner = b;
    if (partner == cl.size() || cl[partner].mult != cl[a].mult)
      throw NonGeneric(std::string(who) + ": eigenvalue classes do not pair reciprocally");
    const int m = cl[a].mult;
    if (m % 2 != 0)
      throw NonGeneric(std::string(who) +
                       ": odd eigenvalue multiplicity admits no symplectic anti-involution");
    ComplexMatrix u = null_basis(lam, m);
    ComplexMatrix v = null_basis(cl[partner].lambda, m);
    ComplexMatrix bp = u.transpose() * j * v;  // nondegenerate pairing E_lam x E_{1/lam}
    ComplexMatrix kform = ComplexMatrix::Zero(m, m);
    for (int i = 0; i + 1 < m; i += 2) {
      kform(i, i + 1) = 1;
      kform(i + 1, i) = -1;
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(bp);
    if (std::abs(lu.determinant()) < 1e-12)
      throw NonGeneric(std::string(who) + ": degenerate eigenspace pairing");
    ComplexMatrix phi = lu.solve(kform);
    domain.middleCols(col, m) = u;
    image.middleCols(col, m) = v * phi;
    col += m;
    domain.middleCols(col, m) = v;
    image.middleCols(col, m) = u * phi.inverse();
    col += m;
    done[a] = true;
    done[partner] = true;
  }
  if (col != n2) throw ConvergenceFailure(std::string(who) + ": eigenbasis is incomplete");
  Eigen::PartialPivLU<ComplexMatrix> dlu(domain);
  return image * dlu.inverse();
}

}  // namespace

RealMatrix sp_form(int n) {
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = RealMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return j;
}

SpGrassPoint spgr_canonical(Field field, int k, int n) {
  if (n < 1 || k < 0 || k > n) throw BadDimensions("spgr_canonical: need 0 <= k <= n, n >= 1");
  ComplexMatrix m = ComplexMatrix::Identity(2 * n, 2 * n);
  for (int i = k; i < n; ++i) {
    m(i, i) = -1;
    m(n + i, n + i) = -1;
  }
  return SpGrassPoint{field, n, k, m};
}

SpGrassPoint spgr_from_conjugation(const SymplecticMatrix& q, int k) {
  require_symplectic(q.m, kDefaultTol, "spgr_from_conjugation");
  const int n = int(q.m.rows()) / 2;
  SpGrassPoint base = spgr_canonical(q.field, k, n);
  ComplexMatrix m = q.m * base.m * sp_inverse(q.m);
  if (q.field == Field::Real) m = m.real().cast<Complex>();
  return SpGrassPoint{q.field, n, k, m};
}

SpValidationReport spgr_validate(const ComplexMatrix& m, int k, double tol) {
  const int n2 = int(m.rows());
  if (m.cols() != n2 || n2 % 2 != 0 || n2 == 0)
    throw BadDimensions("spgr_validate: even-dimensional square matrix required");
  const int n = n2 / 2;
  SpValidationReport r;
  r.involution_residual = (m * m - ComplexMatrix::Identity(n2, n2)).norm();
  r.symplectic_residual = symplectic_residual(m);
  r.trace_residual = std::abs(m.trace() - Complex(4 * k - 2 * n, 0));
  r.ok = r.involution_residual <= tol * n2 && r.symplectic_residual <= tol * n2 &&
         r.trace_residual <= tol * n2;
  return r;
}

SymplecticMatrix sp_sample(Field field, int n, std::uint64_t seed) {
  if (n < 1) throw BadDimensions("sp_sample: n >= 1 required");
  Rng rng(seed);
  ComplexMatrix j = sp_form_c(n);
  ComplexMatrix s;
  // Scale so ||S|| stays O(1) for every n: conjugating by exp(JS) must not
  // amplify rounding past the validation tolerances downstream.
  const double scale = 0.25 / std::sqrt(2.0 * n);
  if (field == Field::Real) {
    RealMatrix g = rng.gaussian(2 * n, 2 * n);
    s = (scale * (g + g.transpose())).cast<Complex>();
  } else {
    ComplexMatrix g = rng.cgaussian(2 * n, 2 * n);
    s = scale * (g + g.transpose());
  }
  ComplexMatrix h = j * s;  // Hamiltonian: (JS)^T J + J (JS) = 0
  ComplexMatrix m = h.exp();
  if (field == Field::Real) m = m.real().cast<Complex>();
  return SymplecticMatrix{field, n, m};
}

ComplexMatrix symplectic_subspace(const SpGrassPoint& x, double tol) {
  SpValidationReport r = spgr_validate(x.m, x.k, std::max(tol, kDefaultTol) * 10);
  if (!r.ok) throw InvalidPoint("symplectic_subspace: input does not validate");
  const int n2 = 2 * x.n;
  if (x.k == 0) return ComplexMatrix(n2, 0);
  ComplexMatrix proj = 0.5 * (x.m + ComplexMatrix::Identity(n2, n2));
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(proj);
  qr.setThreshold(1e-8);
  if (qr.rank() != 2 * x.k)
    throw InvalidPoint("symplectic_subspace: +1 eigenspace has unexpected dimension");
  ComplexMatrix q = qr.householderQ();
  return q.leftCols(2 * x.k);
}

SpGrassPoint psi1(const GrassPoint& u, double tol) {
  if (u.field != Field::Complex) throw InvalidPoint("psi1: complex Grassmann point required");
  auto rep = grassmann::gr_validate(u, tol);
  if (!rep.ok) throw InvalidPoint("psi1: input does not validate");
  const int n = u.n;
  RealMatrix a = u.m.real(), b = u.m.imag();
  RealMatrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, n) = b;
  m.bottomLeftCorner(n, n) = -b;
  m.bottomRightCorner(n, n) = a;
  return SpGrassPoint{Field::Real, n, u.k, m.cast<Complex>()};
}

GrassPoint psi2(const SpGrassPoint& x, double tol) {
  if (x.field != Field::Real) throw InvalidPoint("psi2: real symplectic point required");
  ComplexMatrix v = symplectic_subspace(x, tol);
  // orthonormalize: Householder thin Q of the real basis
  RealMatrix vr = v.real();
  Eigen::HouseholderQR<RealMatrix> qr(vr);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(2 * x.n, 2 * x.k);
  RealMatrix m = 2.0 * q * q.transpose() - RealMatrix::Identity(2 * x.n, 2 * x.n);
  return GrassPoint{Field::Real, 2 * x.n, 2 * x.k, m.cast<Complex>()};
}

std::vector<SymplecticMatrix> diag_block_split(const SymplecticMatrix& d, double tol) {
  const int n2 = int(d.m.rows());
  if (d.m.cols() != n2 || n2 % 2 != 0 || n2 < 4)
    throw BadDimensions("diag_block_split: even square matrix of size >= 4 required");
  const int n = n2 / 2;
  ComplexMatrix diag = d.m.diagonal().asDiagonal();
  if ((d.m - diag).norm() > tol * n2)
    throw NotDiagonalSymplectic("diag_block_split: matrix is not diagonal");
  for (int i = 0; i < n; ++i)
    if (std::abs(d.m(i, i) * d.m(n + i, n + i) - 1.0) > tol * n2)
      throw NotDiagonalSymplectic("diag_block_split: not of the form diag(D, D^{-1})");

  std::vector<SymplecticMatrix> out;
  auto push = [&](int lo, int len) {
    ComplexMatrix f = ComplexMatrix::Identity(n2, n2);
    for (int i = lo; i < lo + len; ++i) {
      f(i, i) = d.m(i, i);
      f(n + i, n + i) = d.m(n + i, n + i);
    }
    out.push_back(SymplecticMatrix{d.field, n, f});
  };
  const int full = n % 2 == 0 ? n / 2 : (n - 3) / 2;
  for (int b = 0; b < full; ++b) push(2 * b, 2);
  if (n % 2 != 0) push(n - 3, 3);
  return out;
}

SpTwoInvolutions sp_two_involutions_base(const SymplecticMatrix& x, double tol) {
  require_symplectic(x.m, std::max(tol, kDefaultTol), "sp_two_involutions_base");
  const int n2 = int(x.m.rows());
  const int n = n2 / 2;
  if ((x.m * x.m - ComplexMatrix::Identity(n2, n2)).norm() <= tol * n2)
    throw NonGeneric("sp_two_involutions_base: x^2 = I has no proper two-involution split");
  if (x.field == Field::Real) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(x.m, false);
    for (int i = 0; i < n2; ++i) {
      Complex lam = es.eigenvalues()(i);
      if (std::abs(lam.imag()) > 1e-8 || lam.real() <= 0)
        throw Unsupported(
            "sp_two_involutions_base: real field requires a real positive spectrum");
    }
  }
  ComplexMatrix y = anti_involution(x.m, "sp_two_involutions_base");
  ComplexMatrix xy = x.m * y;
  int sign = 1;
  double t = xy.trace().real();
  // prefer the sign putting the first factor at half-rank floor(n/2)
  if (std::lround(t) != 4 * (n / 2) - 2 * n && std::lround(-t) == 4 * (n / 2) - 2 * n) sign = -1;
  SpTwoInvolutions out;
  out.sign = sign;
  out.y1 = as_point(x.field, double(sign) * xy, "sp_two_involutions_base");
  out.y2 = as_point(x.field, y, "sp_two_involutions_base");
  return out;
}

ComplexMatrix SpFactorization::product() const {
  ComplexMatrix p = ComplexMatrix::Identity(target.rows(), target.cols());
  for (const auto& f : factors) p = p * f.m;
  return p;
}

SpFactorization decompose_sp_four(const SymplecticMatrix& x, double tol) {
  if (x.field != Field::Complex)
    throw Unsupported("decompose_sp_four: construction is implemented over the complex field");
  require_symplectic(x.m, std::max(tol, kDefaultTol), "decompose_sp_four");
  const int n2 = int(x.m.rows());
  const int n = n2 / 2;
  SpFactorization f;
  f.field = x.field;
  f.target = x.m;
  if ((x.m - ComplexMatrix::Identity(n2, n2)).norm() <= tol * n2) {
    SpGrassPoint c = spgr_canonical(x.field, n / 2, n);
    f.factors = {c, c, c, c};
    f.residual = (f.product() - f.target).norm();
    return f;
  }
  if (n < 2)
    throw Unsupported("decompose_sp_four: Sp(2) has only +-I as involutions");

  Eigen::ComplexEigenSolver<ComplexMatrix> es(x.m);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("decompose_sp_four: eigenvalue computation failed");
  const double gap = 1e-6;
  for (int i = 0; i < n2; ++i) {
    Complex li = es.eigenvalues()(i);
    if (std::abs(li - 1.0) <= gap || std::abs(li + 1.0) <= gap)
      throw NonGeneric("decompose_sp_four: spectrum touches +-1");
    for (int j = i + 1; j < n2; ++j)
      if (std::abs(li - es.eigenvalues()(j)) <= gap)
        throw NonGeneric("decompose_sp_four: repeated eigenvalues");
  }

  // pair each eigenvalue with its reciprocal and build a symplectic
  // eigenbasis P = [v_1..v_n | w_1..w_n], v_i^T J w_i = 1
  ComplexMatrix j = sp_form_c(n);
  std::vector<bool> taken(n2, false);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n2; ++i) {
    if (taken[i]) continue;
    int best = -1;
    double bd = 1e100;
    for (int l = 0; l < n2; ++l) {
      if (taken[l] || l == i) continue;
      double dd = std::abs(es.eigenvalues()(i) * es.eigenvalues()(l) - 1.0);
      if (dd < bd) { bd = dd; best = l; }
    }
    if (best < 0 || bd > gap)
      throw NonGeneric("decompose_sp_four: eigenvalues do not pair reciprocally");
    taken[i] = taken[best] = true;
    pairs.emplace_back(i, best);
  }
  ComplexMatrix p(n2, n2);
  ComplexMatrix dvals = ComplexMatrix::Zero(n2, n2);
  for (int a = 0; a < n; ++a) {
    auto [iv, iw] = pairs[a];
    ComplexMatrix v = es.eigenvectors().col(iv);
    ComplexMatrix w = es.eigenvectors().col(iw);
    Complex c = (v.transpose() * j * w)(0, 0);
    if (std::abs(c) < 1e-10)
      throw NonGeneric("decompose_sp_four: degenerate symplectic pairing of eigenvectors");
    w /= c;
    p.col(a) = v;
    p.col(n + a) = w;
    dvals(a, a) = es.eigenvalues()(iv);
    dvals(n + a, n + a) = es.eigenvalues()(iw);
  }
  ComplexMatrix pinv = sp_inverse(p);

  // split the diagonal into A * B with all eigenvalue classes even
  ComplexMatrix da = ComplexMatrix::Identity(n2, n2);
  ComplexMatrix db = ComplexMatrix::Identity(n2, n2);
  const int full = n % 2 == 0 ? n / 2 : (n - 3) / 2;
  for (int b = 0; b < full; ++b) {
    int i = 2 * b, l = 2 * b + 1;
    Complex d1 = dvals(i, i), d2 = dvals(l, l);
    Complex s = std::sqrt(d1 * d2), bb = std::sqrt(d1 / d2);
    da(i, i) = s;        da(l, l) = s;
    da(n + i, n + i) = 1.0 / s;  da(n + l, n + l) = 1.0 / s;
    db(i, i) = bb;       db(l, l) = 1.0 / bb;
    db(n + i, n + i) = 1.0 / bb; db(n + l, n + l) = bb;
  }
  if (n % 2 != 0) {
    // trailing 6-dimensional block: an SL(2) factor on the first of its
    // three coordinate planes carries spectra {d2, 1/d2} and {d3, 1/d3}
    int i = n - 3, jj = n - 2, l = n - 1;
    Complex d1 = dvals(i, i), d2 = dvals(jj, jj), d3 = dvals(l, l);
    Complex t2 = d2 + 1.0 / d2, t3 = d3 + 1.0 / d3;
    Complex denom = 1.0 / d1 - d1;
    if (std::abs(denom) < gap) throw NonGeneric("decompose_sp_four: leading eigenvalue near +-1");
    Complex pp = (t2 - d1 * t3) / denom;
    Complex ss = t3 - pp;
    Complex qq = 1.0, rr = pp * ss - 1.0;
    // B' = [[p, q], [r, s]], det 1, trace t3; A' = diag(d1, 1/d1) B'^{-1}
    da(i, i) = d1 * ss;          da(i, n + i) = -d1 * qq;
    da(n + i, i) = -rr / d1;     da(n + i, n + i) = pp / d1;
    da(jj, jj) = d2;             da(n + jj, n + jj) = 1.0 / d2;
    db(i, i) = pp;               db(i, n + i) = qq;
    db(n + i, i) = rr;           db(n + i, n + i) = ss;
    db(l, l) = d3;               db(n + l, n + l) = 1.0 / d3;
  }

  ComplexMatrix ya = anti_involution(da, "decompose_sp_four");
  ComplexMatrix yb = anti_involution(db, "decompose_sp_four");
  auto push = [&](const ComplexMatrix& mm) {
    ComplexMatrix g = p * mm * pinv;
    f.factors.push_back(as_point(x.field, g, "decompose_sp_four"));
  };
  push(da * ya);
  push(ya);
  push(db * yb);
  push(yb);
  f.residual = (f.product() - f.target).norm();
  return f;
}

}  // namespace grassfactor::symplectic
