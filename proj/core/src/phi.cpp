#include "grassfactor/phi.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "grassfactor/backend.hpp"

namespace grassfactor::phi {

namespace {
constexpr double kPi = 3.14159265358979323846;

long long choose2(long long x) { return x >= 2 ? x * (x - 1) / 2 : 0; }

void require_two_normalized(const PhiSignature& sig) {
  validate_signature(sig);
  if (sig.k.size() != 2) throw BadSignature("expected a two-factor signature");
  if (sig.k[0] < sig.k[1] || sig.k[0] + sig.k[1] > sig.n)
    throw BadSignature("expected a normalized signature: k >= k', k + k' <= n");
}

// Phase list of a structured matrix, snapped to 0 / pi within the clustering
// tolerance. Real inputs go through the orthogonal Schur form so that the
// conjugate pairing is structural rather than numerical.
struct Phases {
  std::vector<std::pair<double, int>> pos;  // (theta in (0, pi), mult), descending
  int plus = 0, minus = 0;
  bool paired = true;  // complex field: whether +theta/-theta multiplicities match
};

Phases phases_of(Field field, const ComplexMatrix& z, double tol) {
  Phases out;
  const int n = int(z.rows());
  if (field == Field::Real) {
    if (z.imag().norm() > tol * n)
      throw NotStructured("spectral_profile: real field requires a real matrix");
    backend::SchurForm sf;
    try {
      sf = backend::schur_orthogonal(z.real(), tol);
    } catch (const NotOrthogonal&) {
      throw NotStructured("spectral_profile: matrix is not orthogonal within tolerance");
    }
    std::vector<double> angles;
    for (const auto& b : sf.blocks) {
      if (b.kind == backend::SchurBlock::Kind::Rotation) {
        double phi = 2 * b.theta;  // eigenvalue angle in (0, pi)
        if (phi <= kClusterTol) { out.plus += 2; continue; }
        if (kPi - phi <= kClusterTol) { out.minus += 2; continue; }
        angles.push_back(phi);
      } else {
        (b.sign > 0 ? out.plus : out.minus)++;
      }
    }
    std::sort(angles.rbegin(), angles.rend());
    for (double a : angles) {
      if (!out.pos.empty() && out.pos.back().first - a <= kClusterTol)
        out.pos.back().second++;
      else
        out.pos.push_back({a, 1});
    }
    return out;
  }

  backend::UnitaryEig eig;
  try {
    eig = backend::eig_unitary(z, tol);
  } catch (const NotUnitary&) {
    throw NotStructured("spectral_profile: matrix is not unitary within tolerance");
  }
  std::vector<double> pos, neg;
  for (double g : eig.phases) {
    if (std::abs(g) <= kClusterTol) { out.plus++; continue; }
    if (kPi - std::abs(g) <= kClusterTol) { out.minus++; continue; }
    (g > 0 ? pos : neg).push_back(std::abs(g));
  }
  std::sort(pos.rbegin(), pos.rend());
  std::sort(neg.rbegin(), neg.rend());
  if (pos.size() != neg.size()) {
    out.paired = false;
    return out;
  }
  for (size_t i = 0; i < pos.size(); ++i) {
    if (std::abs(pos[i] - neg[i]) > kClusterTol) {
      out.paired = false;
      return out;
    }
    double theta = 0.5 * (pos[i] + neg[i]);
    if (!out.pos.empty() && out.pos.back().first - theta <= kClusterTol)
      out.pos.back().second++;
    else
      out.pos.push_back({theta, 1});
  }
  return out;
}

bool profile_admits(const Phases& ph, int n, int k, int kprime) {
  if (!ph.paired) return false;
  int plus_tail = n - k - kprime, minus_tail = k - kprime;
  if (ph.plus < plus_tail || (ph.plus - plus_tail) % 2 != 0) return false;
  if (ph.minus < minus_tail || (ph.minus - minus_tail) % 2 != 0) return false;
  int pair_total = 0;
  for (auto& p : ph.pos) pair_total += p.second;
  return pair_total <= kprime;
}
}  // namespace

void validate_signature(const PhiSignature& sig) {
  if (sig.n < 2) throw BadSignature("signature requires n >= 2");
  if (sig.k.empty()) throw BadSignature("signature requires at least one entry");
  for (int ki : sig.k)
    if (ki < 1 || ki > sig.n - 1) throw BadSignature("signature entries must satisfy 1 <= k <= n-1");
}

NormalizedSignature normalize_signature(const PhiSignature& sig) {
  validate_signature(sig);
  NormalizedSignature out{sig, 1};
  auto& k = out.sig.k;
  for (;;) {
    std::sort(k.rbegin(), k.rend());
    if (k.size() < 2 || k[0] + k[1] <= sig.n) break;
    k[0] = sig.n - k[0];
    k[1] = sig.n - k[1];
  }
  return out;
}

long long phi_dim(Field field, int k, int kprime, int n) {
  NormalizedSignature ns = normalize_signature({field, n, {k, kprime}});
  long long a = ns.sig.k[0], b = ns.sig.k[1], nn = n;
  long long base = a * (nn - a) + b * (nn - b);
  if (field == Field::Complex) base *= 2;
  return base - b;
}

long long orbit_dim_real(int n, int m0, const std::vector<std::pair<int, int>>& pq, int q) {
  long long m = m0;
  long long inner = (long long)m0 * m0;
  for (auto& [p, qq] : pq) {
    if (p < 0 || qq < 0 || p + qq == 0) throw BadSignature("orbit_dim_real: bad block sizes");
    m += p + qq;
    inner += (long long)p * p + (long long)qq * qq;
  }
  if (q < 0 || n - q - 2 * m < 0) throw BadSignature("orbit_dim_real: blocks exceed dimension");
  return choose2(n) - (inner + choose2(q) + choose2(n - q - 2 * m));
}

long long orbit_dim_complex(int n, const std::vector<int>& mj, int q) {
  long long m = 0, inner = 0;
  for (int x : mj) {
    if (x <= 0) throw BadSignature("orbit_dim_complex: bad block sizes");
    m += x;
    inner += 2LL * x * x;
  }
  if (q < 0 || n - q - 2 * m < 0) throw BadSignature("orbit_dim_complex: blocks exceed dimension");
  long long rest = n - q - 2 * m;
  return (long long)n * n - (inner + (long long)q * q + rest * rest);
}

SpectralProfile spectral_profile(Field field, const ComplexMatrix& z, double tol) {
  if (z.rows() != z.cols() || z.rows() == 0)
    throw BadDimensions("spectral_profile: square matrix required");
  Phases ph = phases_of(field, z, tol);
  if (!ph.paired)
    throw NotStructured("spectral_profile: phases do not pair as theta <-> -theta");
  SpectralProfile out;
  out.pairs = ph.pos;
  out.plus_count = ph.plus;
  out.minus_count = ph.minus;
  return out;
}

bool member_phi2(const ComplexMatrix& z, const PhiSignature& sig, double tol) {
  require_two_normalized(sig);
  if (z.rows() != sig.n || z.cols() != sig.n)
    throw BadDimensions("member_phi2: matrix size does not match signature");
  Phases ph = phases_of(sig.field, z, tol);
  return profile_admits(ph, sig.n, sig.k[0], sig.k[1]);
}

ComplexMatrix CanonicalPhi2::middle() const {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < kprime; ++i) {
    double d = std::sqrt(std::max(0.0, 1.0 - sigma[i] * sigma[i])) * e[i];
    m(i, i) = d;
    m(i, kprime + i) = sigma[i];
    m(kprime + i, i) = -sigma[i];
    m(kprime + i, kprime + i) = d;
  }
  for (int i = 0; i < plus_tail; ++i) m(2 * kprime + i, 2 * kprime + i) = 1.0;
  for (int i = 0; i < minus_tail; ++i) m(2 * kprime + plus_tail + i, 2 * kprime + plus_tail + i) = -1.0;
  return m;
}

ComplexMatrix CanonicalPhi2::reconstruct() const { return q * middle() * q.adjoint(); }

CanonicalPhi2 canonical_phi2(const ComplexMatrix& z, const PhiSignature& sig, double tol) {
  require_two_normalized(sig);
  const int n = sig.n, k = sig.k[0], kprime = sig.k[1];
  if (z.rows() != n || z.cols() != n)
    throw BadDimensions("canonical_phi2: matrix size does not match signature");

  CanonicalPhi2 out;
  out.field = sig.field;
  out.n = n;
  out.k = k;
  out.kprime = kprime;
  out.plus_tail = n - k - kprime;
  out.minus_tail = k - kprime;
  out.q.resize(n, n);

  // per-block data: sigma, e, and the two basis columns
  struct Block {
    double sigma;
    int e;
    Eigen::VectorXcd c1, c2;
  };
  std::vector<Block> blocks;
  std::vector<Eigen::VectorXcd> plus_vecs, minus_vecs;

  if (sig.field == Field::Real) {
    if (z.imag().norm() > tol * n)
      throw NotStructured("canonical_phi2: real field requires a real matrix");
    backend::SchurForm sf;
    try {
      sf = backend::schur_orthogonal(z.real(), tol);
    } catch (const NotOrthogonal&) {
      throw NotStructured("canonical_phi2: matrix is not orthogonal within tolerance");
    }
    int pos = 0;
    for (const auto& b : sf.blocks) {
      if (b.kind == backend::SchurBlock::Kind::Rotation) {
        double phi = 2 * b.theta;
        Eigen::VectorXcd c1 = sf.q.col(pos).cast<Complex>();
        Eigen::VectorXcd c2 = sf.q.col(pos + 1).cast<Complex>();
        if (phi <= kClusterTol) {
          plus_vecs.push_back(c1);
          plus_vecs.push_back(c2);
        } else if (kPi - phi <= kClusterTol) {
          minus_vecs.push_back(c1);
          minus_vecs.push_back(c2);
        } else {
          double cphi = std::cos(phi);
          int e = std::abs(cphi) <= kClusterTol ? 1 : (cphi > 0 ? 1 : -1);
          blocks.push_back({std::sin(phi), e, c1, c2});
        }
        pos += 2;
      } else {
        (b.sign > 0 ? plus_vecs : minus_vecs).push_back(sf.q.col(pos).cast<Complex>());
        pos += 1;
      }
    }
  } else {
    backend::UnitaryEig eig;
    try {
      eig = backend::eig_unitary(z, tol);
    } catch (const NotUnitary&) {
      throw NotStructured("canonical_phi2: matrix is not unitary within tolerance");
    }
    std::vector<std::pair<double, Eigen::VectorXcd>> pos, neg;
    for (int i = 0; i < n; ++i) {
      double g = eig.phases[i];
      if (std::abs(g) <= kClusterTol) {
        plus_vecs.push_back(eig.q.col(i));
      } else if (kPi - std::abs(g) <= kClusterTol) {
        minus_vecs.push_back(eig.q.col(i));
      } else if (g > 0) {
        pos.push_back({g, eig.q.col(i)});
      } else {
        neg.push_back({-g, eig.q.col(i)});
      }
    }
    if (pos.size() != neg.size()) throw NotMember("canonical_phi2: unpaired spectrum");
    auto by_theta = [](const auto& a, const auto& b) { return a.first > b.first; };
    std::sort(pos.begin(), pos.end(), by_theta);
    std::sort(neg.begin(), neg.end(), by_theta);
    const Complex mi(0, -1);
    for (size_t i = 0; i < pos.size(); ++i) {
      if (std::abs(pos[i].first - neg[i].first) > kClusterTol)
        throw NotMember("canonical_phi2: unpaired spectrum");
      double theta = 0.5 * (pos[i].first + neg[i].first);
      Eigen::VectorXcd u = (pos[i].second + neg[i].second) / std::sqrt(2.0);
      Eigen::VectorXcd v = mi * (pos[i].second - neg[i].second) / std::sqrt(2.0);
      int e = std::abs(std::cos(theta)) <= kClusterTol ? 1 : (std::cos(theta) > 0 ? 1 : -1);
      blocks.push_back({std::sin(theta), e, u, v});
    }
  }

  // membership bookkeeping: leftover +1/-1 pairs become sigma = 0 blocks
  int plus = int(plus_vecs.size()), minus = int(minus_vecs.size());
  int a0 = plus - out.plus_tail, b0 = minus - out.minus_tail;
  if (a0 < 0 || a0 % 2 != 0 || b0 < 0 || b0 % 2 != 0 ||
      int(blocks.size()) + a0 / 2 + b0 / 2 != kprime)
    throw NotMember("canonical_phi2: spectral profile not admissible for the signature");
  a0 /= 2;
  b0 /= 2;
  size_t pi = 0, mi2 = 0;
  for (int i = 0; i < a0; ++i) {
    blocks.push_back({0.0, 1, plus_vecs[pi], plus_vecs[pi + 1]});
    pi += 2;
  }
  for (int i = 0; i < b0; ++i) {
    blocks.push_back({0.0, -1, minus_vecs[mi2], minus_vecs[mi2 + 1]});
    mi2 += 2;
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.sigma != b.sigma) return a.sigma > b.sigma;
    return a.e > b.e;
  });

  out.sigma.resize(kprime);
  out.e.resize(kprime);
  for (int i = 0; i < kprime; ++i) {
    out.sigma[i] = blocks[i].sigma;
    out.e[i] = blocks[i].e;
    out.q.col(i) = blocks[i].c1;
    out.q.col(kprime + i) = blocks[i].c2;
  }
  for (int i = 0; i < out.plus_tail; ++i) out.q.col(2 * kprime + i) = plus_vecs[pi + i];
  for (int i = 0; i < out.minus_tail; ++i)
    out.q.col(2 * kprime + out.plus_tail + i) = minus_vecs[mi2 + i];
  if (sig.field == Field::Real && out.q.imag().norm() > tol * n)
    throw ConvergenceFailure("canonical_phi2: real basis expected");
  return out;
}

std::pair<GrassPoint, GrassPoint> split_phi2(const ComplexMatrix& z, const PhiSignature& sig,
                                             double tol) {
  CanonicalPhi2 c = canonical_phi2(z, sig, tol);
  const int n = c.n, kprime = c.kprime;
  ComplexMatrix mx = ComplexMatrix::Zero(n, n), my = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < kprime; ++i) {
    double d = std::sqrt(std::max(0.0, 1.0 - c.sigma[i] * c.sigma[i])) * c.e[i];
    double theta = 0.5 * std::atan2(c.sigma[i], d);  // block angle phi in [0, pi]
    double ct = std::cos(theta), st = std::sin(theta);
    int a = i, b = kprime + i;
    mx(a, a) = ct;  mx(a, b) = -st; mx(b, a) = -st; mx(b, b) = -ct;
    my(a, a) = ct;  my(a, b) = st;  my(b, a) = st;  my(b, b) = -ct;
  }
  for (int i = 0; i < c.plus_tail; ++i) {
    int p = 2 * kprime + i;
    mx(p, p) = -1.0;
    my(p, p) = -1.0;
  }
  for (int i = 0; i < c.minus_tail; ++i) {
    int p = 2 * kprime + c.plus_tail + i;
    mx(p, p) = 1.0;
    my(p, p) = -1.0;
  }
  ComplexMatrix x = c.q * mx * c.q.adjoint();
  ComplexMatrix y = c.q * my * c.q.adjoint();
  if (sig.field == Field::Real) {
    x = x.real().cast<Complex>();
    y = y.real().cast<Complex>();
  }
  return {GrassPoint{sig.field, n, c.k, x}, GrassPoint{sig.field, n, kprime, y}};
}

int reflection_length(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw BadDimensions("reflection_length: square matrix required");
  const int n = int(a.rows());
  backend::UnitaryEig eig = backend::eig_unitary(a, tol);
  double sum = 0;
  for (double g : eig.phases) sum += g;
  double det_phase = std::remainder(sum, 2 * kPi);
  if (std::abs(det_phase) > 1e-6 && std::abs(std::abs(det_phase) - kPi) > 1e-6)
    throw NotSpecialOrAntiSpecial("reflection_length: determinant is not +-1");
  double s1 = 0, s2 = 0;
  for (double g : eig.phases) {
    if (std::abs(g) <= kClusterTol) continue;  // +1 eigenvalue contributes 0 to both
    if (kPi - std::abs(g) <= kClusterTol) {    // -1 contributes pi to both
      s1 += kPi;
      s2 += kPi;
      continue;
    }
    double theta = g > 0 ? g : g + 2 * kPi;
    s1 += theta;
    s2 += 2 * kPi - theta;
  }
  double ell = std::max(s1, s2) / kPi;
  double r = std::round(ell);
  if (std::abs(ell - r) > 1e-6)
    throw ConvergenceFailure("reflection_length: result not an integer within tolerance");
  (void)n;
  return int(r);
}

long long length_upper_bound(const PhiSignature& sig) {
  NormalizedSignature ns = normalize_signature(sig);
  const auto& k = ns.sig.k;
  long long total = 0;
  for (size_t i = 1; i < k.size(); ++i) total += k[i];
  if (k.size() % 2 == 0) return total + k[0];
  return total + (sig.n - k[0]);
}

Phi4Class classify_phi4_complex(const PhiSignature& sig) {
  if (sig.field != Field::Complex) throw BadSignature("classify_phi4_complex: complex field required");
  NormalizedSignature ns = normalize_signature(sig);
  if (ns.sig.k.size() != 4) throw BadSignature("classify_phi4_complex: four entries required");
  const auto& k = ns.sig.k;
  const int n = sig.n;
  if (n % 2 == 0) {
    int h = n / 2;
    if (k[0] == h && k[1] == h && k[2] == h && k[3] == h) return Phi4Class::FullSU;
    if (h >= 2 && k[0] == h && k[1] == h && k[2] == h - 1 && k[3] == h - 1)
      return Phi4Class::FullSU;
    if (h >= 3 && k[0] == h && k[1] == h && k[2] == h && k[3] == h - 2)
      return Phi4Class::FullSU;
    if (h >= 2 && k[0] == h && k[1] == h && k[2] == h && k[3] == h - 1)
      return Phi4Class::FullAntiSU;
    return Phi4Class::ProperSubset;
  }
  int h = (n - 1) / 2;
  if (k[0] == h && k[1] == h && k[2] == h && k[3] == h) return Phi4Class::FullSU;
  if (k[0] == h + 1 && k[1] == h && k[2] == h && k[3] == h) return Phi4Class::FullAntiSU;
  return Phi4Class::ProperSubset;
}

}  // namespace grassfactor::phi
