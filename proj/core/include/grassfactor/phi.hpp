#pragma once

#include <utility>
#include <vector>

#include "grassfactor/grassmann.hpp"
#include "grassfactor/types.hpp"

namespace grassfactor::phi {

using grassmann::GrassPoint;

// Signature of a product set Phi(k_1, ..., k_d, F^n) of Grassmannian
// involutions. Entries must satisfy 1 <= k_i <= n - 1.
struct PhiSignature {
  Field field = Field::Real;
  int n = 0;
  std::vector<int> k;
};

void validate_signature(const PhiSignature& sig);

struct NormalizedSignature {
  PhiSignature sig;
  int sign = 1;  // accumulated -1 factors from single-entry flips (none with current moves)
};

// Sort descending; while k1 + k2 > n replace (k1, k2) by (n - k1, n - k2).
// The result satisfies k1 >= ... >= kd and k1 + k2 <= n.
NormalizedSignature normalize_signature(const PhiSignature& sig);

// Dimension of Phi(k, k', F^n) as a real manifold for F = R and as the stated
// count for F = C: k(n-k) + k'(n-k') - min(k,k') doubled appropriately.
long long phi_dim(Field field, int k, int kprime, int n);

// Conjugation-orbit dimension of an element with +/-1 eigenvalue blocks and
// rotation blocks: m0 blocks at sigma = 1, blocks (p_j, q_j) at distinct
// sigma in (0,1) split by sign e, q trailing -1s (real case).
long long orbit_dim_real(int n, int m0, const std::vector<std::pair<int, int>>& pq, int q);
long long orbit_dim_complex(int n, const std::vector<int>& m, int q);

// Eigenvalue profile of a structured (orthogonal/unitary) matrix: conjugate
// pairs e^{+-i theta}, theta in (0, pi), with multiplicities, plus +1/-1 counts.
struct SpectralProfile {
  std::vector<std::pair<double, int>> pairs;  // (theta, multiplicity), theta descending
  int plus_count = 0;
  int minus_count = 0;
  int pair_total() const {
    int t = 0;
    for (auto& p : pairs) t += p.second;
    return t;
  }
};

// Throws NotStructured if z is not orthogonal/unitary within tol, or (complex
// field) if the phases do not pair off as theta <-> -theta.
SpectralProfile spectral_profile(Field field, const ComplexMatrix& z, double tol = kDefaultTol);

// Membership test for Phi(k, k', F^n) via the spectral criterion:
// plus_count >= n-k-k' with matching parity, minus_count >= k-k', and the
// conjugate-pair total at most k'. Expects a normalized (k >= k') signature.
bool member_phi2(const ComplexMatrix& z, const PhiSignature& sig, double tol = kDefaultTol);

// Canonical form z = q * M * q^H where M is built from k' two-by-two blocks
// [[sqrt(1-s^2) e, s], [-s, sqrt(1-s^2) e]] on coordinate pairs (i, k'+i)
// followed by diag(I_{plus_tail}, -I_{minus_tail}). In the complex case the
// same real blocks encode e^{+-i theta} with s = sin theta, e = sign cos theta.
struct CanonicalPhi2 {
  Field field = Field::Real;
  int n = 0, k = 0, kprime = 0;
  ComplexMatrix q;            // orthogonal/unitary
  std::vector<double> sigma;  // size k', descending; ties broken by e = +1 first
  std::vector<int> e;         // size k', +-1; e = +1 whenever sigma = 1
  int plus_tail = 0;          // n - k - k'
  int minus_tail = 0;         // k - k'
  ComplexMatrix middle() const;
  ComplexMatrix reconstruct() const;
};

CanonicalPhi2 canonical_phi2(const ComplexMatrix& z, const PhiSignature& sig,
                             double tol = kDefaultTol);

// Constructive split z = x * y with x in Gr(k), y in Gr(k'). Throws NotMember
// when the membership test fails.
std::pair<GrassPoint, GrassPoint> split_phi2(const ComplexMatrix& z, const PhiSignature& sig,
                                             double tol = kDefaultTol);

// Reflection length of a special or anti-special unitary matrix:
// (1/pi) max(sum of phases of A, sum of phases of A^H), phases in [0, 2pi).
// Throws NotSpecialOrAntiSpecial when det is not +-1 within tol, and
// ConvergenceFailure if the result is not an integer within 1e-6.
int reflection_length(const ComplexMatrix& a, double tol = kDefaultTol);

// Upper bound for the reflection length over Phi(k_1..k_d): sum k_i for even
// d, (n - k_1) + k_2 + ... + k_d for odd d (signature normalized first).
long long length_upper_bound(const PhiSignature& sig);

// Classification of four-factor complex products.
enum class Phi4Class { FullSU, FullAntiSU, ProperSubset };

Phi4Class classify_phi4_complex(const PhiSignature& sig);

}  // namespace grassfactor::phi
