#include "grassfactor/decompose.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "grassfactor/backend.hpp"

namespace grassfactor::decompose {

namespace {
constexpr double kPi = 3.14159265358979323846;
const Complex kI(0, 1);

GrassPoint make_point(Field field, const ComplexMatrix& m, int k) {
  return GrassPoint{field, int(m.rows()), k, m};
}

double finish(Factorization& f) {
  ComplexMatrix p = f.product();
  f.residual = (p - f.target).norm();
  return f.residual;
}

// Diagonal involution pair on coordinates (i, j) whose product is
// diag(e^{i phase} at i, e^{-i phase} at j): x-side gets the plain swap,
// y-side the phase-twisted swap.
struct DiagPair {
  int i, j;
  double phase;
};

struct DiagSingle {
  int i;
  int value;  // +-1
};

// Split Q * diag(...) * Q^H into two Grassmannian involutions where the
// diagonal is given by phase pairs and +-1 singletons. Singleton signs are
// assigned so the factors reach traces 2*kx - n and 2*ky - n.
std::pair<GrassPoint, GrassPoint> split_paired_diagonal(const ComplexMatrix& q,
                                                        const std::vector<DiagPair>& pairs,
                                                        const std::vector<DiagSingle>& singles,
                                                        int kx, int ky) {
  const int n = int(q.rows());
  const int tx = 2 * kx - n, ty = 2 * ky - n;
  const int s = int(singles.size());
  std::vector<int> xs(s, 1);
  bool found = false;
  for (unsigned mask = 0; mask < (1u << s) && !found; ++mask) {
    int sx = 0, sy = 0;
    for (int i = 0; i < s; ++i) {
      int xi = (mask >> i) & 1 ? -1 : 1;
      sx += xi;
      sy += xi * singles[i].value;
    }
    if (sx == tx && sy == ty) {
      for (int i = 0; i < s; ++i) xs[i] = (mask >> i) & 1 ? -1 : 1;
      found = true;
    }
  }
  if (!found && s > 0) throw BadSignature("split_paired_diagonal: no sign assignment reaches the trace targets");
  if (s == 0 && (tx != 0 || ty != 0))
    throw BadSignature("split_paired_diagonal: trace targets unreachable without singletons");

  ComplexMatrix mx = ComplexMatrix::Zero(n, n), my = ComplexMatrix::Zero(n, n);
  for (const auto& p : pairs) {
    mx(p.i, p.j) = 1.0;
    mx(p.j, p.i) = 1.0;
    my(p.i, p.j) = std::polar(1.0, -p.phase);
    my(p.j, p.i) = std::polar(1.0, p.phase);
  }
  for (int i = 0; i < s; ++i) {
    mx(singles[i].i, singles[i].i) = xs[i];
    my(singles[i].i, singles[i].i) = xs[i] * singles[i].value;
  }
  ComplexMatrix x = q * mx * q.adjoint();
  ComplexMatrix y = q * my * q.adjoint();
  return {make_point(Field::Complex, x, kx), make_point(Field::Complex, y, ky)};
}

// Shared core of the SO / SO^- split.
Factorization so_split(const RealMatrix& z, double tol, bool anti) {
  const int n = int(z.rows());
  if (z.cols() != n || n == 0) throw BadDimensions("decompose_so: square matrix required");
  backend::SchurForm sf = backend::schur_orthogonal(z, tol);
  int minus = 0;
  for (const auto& b : sf.blocks)
    if (b.kind == backend::SchurBlock::Kind::Sign && b.sign < 0) ++minus;
  const bool det_minus = minus % 2 != 0;
  if (!anti && det_minus) throw NotSpecialOrthogonal("decompose_so: determinant is -1");
  if (anti) {
    if (n % 2 == 0) throw Unsupported("decompose_so_minus: odd n required");
    if (!det_minus) throw NotAntiSpecialOrthogonal("decompose_so_minus: determinant is +1");
  }

  RealMatrix ms = RealMatrix::Zero(n, n), mt = RealMatrix::Zero(n, n);
  int pos = 0;
  std::vector<double> thetas;  // block angles in the schur column order
  std::vector<int> sign_cols;  // columns holding +-1 eigenvectors
  std::vector<int> sign_vals;
  for (const auto& b : sf.blocks) {
    if (b.kind == backend::SchurBlock::Kind::Rotation) {
      thetas.push_back(b.theta);
      double c = std::cos(b.theta), st = std::sin(b.theta);
      ms(pos, pos) = c;      ms(pos, pos + 1) = -st;
      ms(pos + 1, pos) = -st; ms(pos + 1, pos + 1) = -c;
      mt(pos, pos) = c;      mt(pos, pos + 1) = st;
      mt(pos + 1, pos) = st;  mt(pos + 1, pos + 1) = -c;
      pos += 2;
    } else {
      sign_cols.push_back(pos);
      sign_vals.push_back(b.sign);
      pos += 1;
    }
  }
  // pair equal signs into angle-0 / angle-pi blocks; one sign is left over
  // exactly when n is odd
  std::vector<int> plus_cols, minus_cols;
  for (size_t i = 0; i < sign_cols.size(); ++i)
    (sign_vals[i] > 0 ? plus_cols : minus_cols).push_back(sign_cols[i]);
  auto pair_up = [&](const std::vector<int>& cols, double theta) {
    size_t i = 0;
    for (; i + 1 < cols.size(); i += 2) {
      int a = cols[i], b = cols[i + 1];
      double c = std::cos(theta), st = std::sin(theta);
      ms(a, a) = c;  ms(a, b) = -st; ms(b, a) = -st; ms(b, b) = -c;
      mt(a, a) = c;  mt(a, b) = st;  mt(b, a) = st;  mt(b, b) = -c;
    }
    return i < cols.size() ? cols[i] : -1;
  };
  int left_plus = pair_up(plus_cols, 0.0);
  int left_minus = pair_up(minus_cols, kPi / 2);
  if (!anti) {
    // det +1: minus count even, so only a +1 can be left over (n odd)
    if (left_plus >= 0) { ms(left_plus, left_plus) = -1; mt(left_plus, left_plus) = -1; }
  } else {
    // det -1, n odd: the lone -1 splits as (+1) * (-1)
    if (left_minus < 0) throw ConvergenceFailure("decompose_so_minus: expected a leftover -1");
    ms(left_minus, left_minus) = 1;
    mt(left_minus, left_minus) = -1;
    if (left_plus >= 0) throw ConvergenceFailure("decompose_so_minus: unexpected leftover +1");
  }

  RealMatrix x1 = sf.q * ms * sf.q.transpose();
  RealMatrix x2 = sf.q * mt * sf.q.transpose();
  int k1 = n / 2, k2 = n / 2;
  if (anti) { k1 = (n + 1) / 2; k2 = (n - 1) / 2; }
  Factorization f;
  f.field = Field::Real;
  f.target = z.cast<Complex>();
  f.factors = {make_point(Field::Real, x1.cast<Complex>(), k1),
               make_point(Field::Real, x2.cast<Complex>(), k2)};
  finish(f);
  return f;
}

// Eigenphases of a (anti-)special unitary matrix, sorted descending, with the
// last phase recomputed so that the sum is exactly 0 (det +1) or pi (det -1).
struct SuEig {
  ComplexMatrix q;
  std::vector<double> gamma;
};

SuEig su_eig(const ComplexMatrix& z, double tol, bool anti, const char* who) {
  const int n = int(z.rows());
  if (z.cols() != n || n == 0) throw BadDimensions("decompose_su: square matrix required");
  backend::UnitaryEig eig = backend::eig_unitary(z, tol);
  double sum = 0;
  for (double g : eig.phases) sum += g;
  double det_phase = std::remainder(sum, 2 * kPi);
  if (!anti && std::abs(det_phase) > tol * n)
    throw NotSpecialUnitary(std::string(who) + ": determinant is not 1");
  if (anti && std::abs(std::abs(det_phase) - kPi) > tol * n)
    throw NotAntiSpecialUnitary(std::string(who) + ": determinant is not -1");
  SuEig out{eig.q, eig.phases};
  double head = 0;
  for (int i = 0; i + 1 < n; ++i) head += out.gamma[i];
  out.gamma[n - 1] = (anti ? kPi : 0.0) - head;
  return out;
}

Factorization su_split(const ComplexMatrix& z, double tol, bool anti) {
  const int n = int(z.rows());
  SuEig e = su_eig(z, tol, anti, anti ? "decompose_su_minus" : "decompose_su");
  const int m = n / 2;
  std::vector<double> alpha(m + 1, 0.0), beta(m + 1, 0.0);
  {
    std::vector<double> pref(n + 1, 0.0);
    for (int i = 0; i < n; ++i) pref[i + 1] = pref[i] + e.gamma[i];
    for (int j = 1; j <= m; ++j) {
      if (2 * j - 1 <= n) alpha[j] = pref[2 * j - 1];
      if (2 * j <= n) beta[j] = pref[2 * j];
    }
  }

  ComplexMatrix m1 = ComplexMatrix::Zero(n, n), m2 = ComplexMatrix::Zero(n, n);
  ComplexMatrix m3 = ComplexMatrix::Zero(n, n), m4 = ComplexMatrix::Zero(n, n);
  auto put_swap = [](ComplexMatrix& mm, int a, int b, double phase) {
    mm(a, b) = std::polar(1.0, -phase);
    mm(b, a) = std::polar(1.0, phase);
  };
  const bool odd = n % 2 != 0;
  // X1: swap blocks on (0,1), (2,3), ...;  X2: phase swaps with alpha_j
  for (int j = 1; j <= m; ++j) {
    put_swap(m1, 2 * j - 2, 2 * j - 1, 0.0);
    put_swap(m2, 2 * j - 2, 2 * j - 1, alpha[j]);
  }
  if (odd) {
    double last = (anti ? 1.0 : -1.0);  // det -1 variant flips X1's trailing sign
    m1(n - 1, n - 1) = last;
    m2(n - 1, n - 1) = -1.0;
  }
  // X3: -1, swaps, (1 if even);  X4: -1, beta phase swaps, trailing sign
  m3(0, 0) = -1.0;
  m4(0, 0) = -1.0;
  int blocks34 = odd ? m : m - 1;
  for (int j = 1; j <= blocks34; ++j) {
    put_swap(m3, 2 * j - 1, 2 * j, 0.0);
    put_swap(m4, 2 * j - 1, 2 * j, beta[j]);
  }
  if (!odd) {
    m3(n - 1, n - 1) = 1.0;
    m4(n - 1, n - 1) = (anti ? -1.0 : 1.0);  // det -1 variant flips X4's trailing sign
  }

  auto conj = [&](const ComplexMatrix& mm) { return ComplexMatrix(e.q * mm * e.q.adjoint()); };
  int k1 = m, k4 = m;
  int k2 = m, k3 = m;
  if (odd && anti) k1 = m + 1;
  if (!odd && anti) k4 = m - 1;
  Factorization f;
  f.field = Field::Complex;
  f.target = z;
  f.factors = {make_point(Field::Complex, conj(m1), k1), make_point(Field::Complex, conj(m2), k2),
               make_point(Field::Complex, conj(m3), k3), make_point(Field::Complex, conj(m4), k4)};
  finish(f);
  return f;
}
}  // namespace

ComplexMatrix Factorization::product() const {
  ComplexMatrix p = ComplexMatrix::Identity(target.rows(), target.cols());
  for (const auto& f : factors) p = p * f.m;
  return p;
}

Factorization decompose_so(const RealMatrix& z, double tol) { return so_split(z, tol, false); }

Factorization decompose_so_minus(const RealMatrix& z, double tol) { return so_split(z, tol, true); }

Factorization decompose_su(const ComplexMatrix& z, double tol) { return su_split(z, tol, false); }

Factorization decompose_su_minus(const ComplexMatrix& z, double tol) {
  return su_split(z, tol, true);
}

Factorization decompose_su_signature(const ComplexMatrix& z, const phi::PhiSignature& sig,
                                     double tol) {
  phi::validate_signature(sig);
  if (sig.field != Field::Complex)
    throw BadSignature("decompose_su_signature: complex field required");
  if (sig.k.size() != 4) throw BadSignature("decompose_su_signature: four entries required");
  const int n = sig.n;
  if (z.rows() != n || z.cols() != n)
    throw BadDimensions("decompose_su_signature: matrix size does not match signature");
  const auto& ks = sig.k;
  for (size_t i = 1; i < ks.size(); ++i)
    if (ks[i - 1] < ks[i]) throw BadSignature("decompose_su_signature: entries must be descending");
  if (ks[0] + ks[1] > n) throw BadSignature("decompose_su_signature: k1 + k2 must not exceed n");
  if (ks[1] + ks[3] < n - 1)
    throw BadSignature("decompose_su_signature: requires k2 + k4 >= n - 1");
  const int ksum = ks[0] + ks[1] + ks[2] + ks[3];
  const bool anti = ksum % 2 != 0;

  SuEig e = su_eig(z, tol, anti, "decompose_su_signature");
  std::vector<double> pref(n + 1, 0.0);
  for (int i = 0; i < n; ++i) pref[i + 1] = pref[i] + e.gamma[i];
  const int k = n / 2;
  const bool odd = n % 2 != 0;

  std::vector<DiagPair> pa, pb;
  std::vector<DiagSingle> sa, sb;
  if (!odd) {
    // A = diag(e^{ia_1}, e^{-ia_1}, ..., e^{ia_k}, e^{-ia_k}), a_j = pref[2j-1]
    for (int j = 1; j <= k; ++j) pa.push_back({2 * j - 2, 2 * j - 1, pref[2 * j - 1]});
    // B = diag(1, e^{ib_1}, e^{-ib_1}, ..., (-1)^(k3-k4)), b_j = pref[2j]
    sb.push_back({0, 1});
    for (int j = 1; j <= k - 1; ++j) pb.push_back({2 * j, 2 * j - 1, -pref[2 * j]});
    sb.push_back({n - 1, (ks[2] - ks[3]) % 2 == 0 ? 1 : -1});
  } else {
    for (int j = 1; j <= k; ++j) pa.push_back({2 * j - 2, 2 * j - 1, pref[2 * j - 1]});
    sa.push_back({n - 1, (ks[0] - ks[1]) % 2 == 0 ? 1 : -1});
    sb.push_back({0, 1});
    for (int j = 1; j <= k; ++j) pb.push_back({2 * j, 2 * j - 1, -pref[2 * j]});
  }

  auto [x1, x2] = split_paired_diagonal(e.q, pa, sa, ks[0], ks[1]);
  auto [x3, x4] = split_paired_diagonal(e.q, pb, sb, ks[2], ks[3]);
  Factorization f;
  f.field = Field::Complex;
  f.target = z;
  f.factors = {x1, x2, x3, x4};
  finish(f);
  return f;
}

PhaseSolution solve_phase_system(const std::array<double, 4>& theta, double tol) {
  double sum = theta[0] + theta[1] + theta[2] + theta[3];
  if (std::abs(std::remainder(sum, 2 * kPi)) > std::max(tol, 1e-9) * 16)
    throw BadSignature("solve_phase_system: phases must sum to 0 mod 2pi");
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::sort(perm.begin(), perm.end());
  const double eps = 1e-9;
  do {
    double t1 = theta[perm[0]], t2 = theta[perm[1]], t3 = theta[perm[2]];
    Complex e13 = std::polar(1.0, t1 + t3), e23 = std::polar(1.0, t2 + t3);
    double a = e13.imag() + e23.imag();
    double b = -e23.imag();
    auto attempt = [&](double x) -> bool { return x >= -eps && x <= 1 + eps; };
    std::vector<double> xs;
    if (std::abs(a) > 1e-12) {
      xs.push_back(-b / a);
    } else if (std::abs(b) <= eps) {
      xs = {1.0, 0.5, 0.0};
    }
    for (double x : xs) {
      if (!attempt(x)) continue;
      x = std::clamp(x, 0.0, 1.0);
      double g = e13.real() * x - e23.real() * (1 - x);
      double y = (g + 1) / 2;
      if (y < -eps || y > 1 + eps) continue;
      y = std::clamp(y, 0.0, 1.0);
      Complex lhs = std::polar(1.0, t1) * x - std::polar(1.0, t2) * (1 - x);
      Complex rhs = std::polar(1.0, -t3) * (2 * y - 1);
      double res = std::abs(lhs - rhs);
      if (res <= eps * 10) return {perm, x, y, res};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw NoSolutionFound("solve_phase_system: no permutation admits a solution in [0,1]^2");
}

Factorization decompose_su_kkkk2(const ComplexMatrix& z, double tol) {
  const int n = int(z.rows());
  if (z.cols() != n) throw BadDimensions("decompose_su_kkkk2: square matrix required");
  if (n % 2 != 0 || n < 6)
    throw BadSignature("decompose_su_kkkk2: requires n = 2k with k >= 3");
  const int k = n / 2;
  SuEig e = su_eig(z, tol, false, "decompose_su_kkkk2");

  // choose which three phases play the corner roles (phi2, phi3, phi4)
  std::array<int, 3> pick{};
  double c = 0;
  bool found = false;
  Complex w1_00, w1_01, w1_10, w1_11;  // dense corner factor W1
  double phi[5] = {0, 0, 0, 0, 0};
  for (int i1 = 0; i1 < n && !found; ++i1)
    for (int i2 = 0; i2 < n && !found; ++i2) {
      if (i2 == i1) continue;
      for (int i3 = 0; i3 < n && !found; ++i3) {
        if (i3 == i1 || i3 == i2) continue;
        double p2 = e.gamma[i1], p3 = e.gamma[i2], p4 = e.gamma[i3];
        double p1 = -(p2 + p3 + p4);
        Complex num = std::polar(1.0, -p1) - std::polar(1.0, -p2);
        Complex den = std::polar(1.0, p3) - std::polar(1.0, p4);
        double cc;
        if (std::abs(den) < 1e-9) {
          if (std::abs(num) > 1e-9) continue;
          cc = 0.0;
        } else {
          Complex q = num / den;
          if (std::abs(q.imag()) > 1e-9 || std::abs(q.real()) > 1 + 1e-9) continue;
          cc = std::clamp(q.real(), -1.0, 1.0);
        }
        // W2 = [[c, s], [s, -c]];  W1 = diag(e^{i p3}, e^{i p4}) W2 must have
        // spectrum {e^{-i p1}, -e^{-i p2}} — trace/det match by construction,
        // re-check the trace to reject near-degenerate denominators.
        double ss = std::sqrt(std::max(0.0, 1.0 - cc * cc));
        Complex a3 = std::polar(1.0, p3), a4 = std::polar(1.0, p4);
        Complex tr = a3 * cc - a4 * cc;
        Complex want = std::polar(1.0, -p1) - std::polar(1.0, -p2);
        if (std::abs(tr - want) > 1e-8) continue;
        pick = {i1, i2, i3};
        c = cc;
        phi[1] = p1; phi[2] = p2; phi[3] = p3; phi[4] = p4;
        w1_00 = a3 * cc;  w1_01 = a3 * ss;
        w1_10 = a4 * ss;  w1_11 = -a4 * cc;
        found = true;
      }
    }
  if (!found)
    throw NoSolutionFound("decompose_su_kkkk2: no phase ordering admits the corner split");

  // permute eigenvector columns: untouched phases first, then the corner three
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (i != pick[0] && i != pick[1] && i != pick[2]) order.push_back(i);
  order.push_back(pick[0]);
  order.push_back(pick[1]);
  order.push_back(pick[2]);
  ComplexMatrix q(n, n);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    q.col(i) = e.q.col(order[i]);
    g[i] = e.gamma[order[i]];
  }
  std::vector<double> pref(n + 1, 0.0);
  for (int i = 0; i < n; ++i) pref[i + 1] = pref[i] + g[i];

  // cumulative phases: alpha_j over the 2k-3 leading entries, then corners
  auto seg = [&](int lo, int hi) { return pref[hi] - pref[lo - 1]; };  // 1-indexed inclusive
  std::vector<double> alpha(k + 1, 0.0), beta(k + 1, 0.0);
  for (int j = 1; j <= k - 2; ++j) alpha[j] = seg(2 * j + 1, 2 * k - 3);
  alpha[k - 1] = seg(1, 2 * k - 3);
  alpha[k] = g[2 * k - 3] + kPi;  // gamma at position 2k-2 (1-indexed), plus pi
  for (int j = 1; j <= k - 2; ++j) beta[j] = seg(2 * j, 2 * k - 3);

  // W1 eigendecomposition: eigenvalues e^{-i alpha_{k-1}}, e^{-i alpha_k}
  ComplexMatrix w1(2, 2), w2(2, 2);
  w1 << w1_00, w1_01, w1_10, w1_11;
  double ssr = std::sqrt(std::max(0.0, 1.0 - c * c));
  w2 << c, ssr, ssr, -c;
  Complex lam1 = std::polar(1.0, -phi[1]);
  Complex lam2 = -std::polar(1.0, -phi[2]);
  ComplexMatrix va(2, 2), vb(2, 2);
  if (std::abs(lam1 - lam2) < 1e-9) {
    va.setIdentity();
  } else {
    ComplexMatrix shifted = w1 - lam2 * ComplexMatrix::Identity(2, 2);
    Eigen::Vector2cd v = shifted.col(0).norm() > shifted.col(1).norm() ? shifted.col(0)
                                                                       : shifted.col(1);
    v.normalize();
    va.col(0) = v;
    va(0, 1) = -std::conj(v(1));
    va(1, 1) = std::conj(v(0));
  }
  {
    // W2 is a real reflection: eigenvector for +1 is (cos t, sin t) with
    // c = cos 2t
    double t = 0.5 * std::atan2(ssr, c);
    vb << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  }

  ComplexMatrix qa = q, qb = q;
  qa.rightCols(2) = q.rightCols(2) * va;
  qb.rightCols(2) = q.rightCols(2) * vb;

  // A pairs (0-indexed): (0, 2k-2) at alpha_{k-1}; (2j-1, 2j) at -alpha_j for
  // j = 1..k-3; (2k-5, 2k-4) at -alpha_{k-2}; (2k-3, 2k-1) at alpha_k.
  std::vector<DiagPair> pa;
  pa.push_back({0, 2 * k - 2, alpha[k - 1]});
  for (int j = 1; j <= k - 3; ++j) pa.push_back({2 * j - 1, 2 * j, -alpha[j]});
  pa.push_back({2 * k - 5, 2 * k - 4, -alpha[k - 2]});
  pa.push_back({2 * k - 3, 2 * k - 1, alpha[k]});
  auto [x1, x2] = split_paired_diagonal(qa, pa, {}, k, k);

  // B pairs: (2j-2, 2j-1) at -beta_j for j = 1..k-2; singles (+1, -1, +1, -1)
  // on the last four coordinates.
  std::vector<DiagPair> pb;
  for (int j = 1; j <= k - 2; ++j) pb.push_back({2 * j - 2, 2 * j - 1, -beta[j]});
  std::vector<DiagSingle> sbl = {{2 * k - 4, 1}, {2 * k - 3, -1}, {2 * k - 2, 1}, {2 * k - 1, -1}};
  auto [x3, x4] = split_paired_diagonal(qb, pb, sbl, k, k - 2);

  Factorization f;
  f.field = Field::Complex;
  f.target = z;
  f.factors = {x1, x2, x3, x4};
  finish(f);
  return f;
}

}  // namespace grassfactor::decompose
