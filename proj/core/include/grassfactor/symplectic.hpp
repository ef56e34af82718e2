#pragma once

#include <cstdint>
#include <vector>

#include "grassfactor/grassmann.hpp"
#include "grassfactor/types.hpp"

namespace grassfactor::symplectic {

using grassmann::GrassPoint;

// Standard symplectic form J = [[0, I_n], [-I_n, 0]] on F^{2n}.
RealMatrix sp_form(int n);

// Element of Sp(2n, F): m^T J m = J (transpose in both fields).
struct SymplecticMatrix {
  Field field = Field::Real;
  int n = 0;
  ComplexMatrix m;
};

// Point of the symplectic Grassmannian: a symplectic involution with
// trace 4k - 2n. Not symmetric in general.
struct SpGrassPoint {
  Field field = Field::Real;
  int n = 0;
  int k = 0;
  ComplexMatrix m;
};

struct SpValidationReport {
  bool ok = false;
  double involution_residual = 0;
  double symplectic_residual = 0;
  double trace_residual = 0;
};

// diag(I_{k,n-k}, I_{k,n-k}) with I_{k,n-k} = diag(I_k, -I_{n-k}).
SpGrassPoint spgr_canonical(Field field, int k, int n);

// q * canonical * q^{-1}; the symplectic inverse q^{-1} = -J q^T J is used.
SpGrassPoint spgr_from_conjugation(const SymplecticMatrix& q, int k);

SpValidationReport spgr_validate(const ComplexMatrix& m, int k, double tol = kDefaultTol);

// exp(J S) for a random symmetric S; deterministic per seed.
SymplecticMatrix sp_sample(Field field, int n, std::uint64_t seed);

// Basis (2n x 2k) of the +1 eigenspace of x; the symplectic form restricted
// to its span is nondegenerate.
ComplexMatrix symplectic_subspace(const SpGrassPoint& x, double tol = kDefaultTol);

// Realification embedding of a complex Grassmann point: A + iB maps to
// [[A, B], [-B, A]], a real symplectic involution of half-rank k.
SpGrassPoint psi1(const GrassPoint& u, double tol = kDefaultTol);

// Orthogonal projector involution 2 V V^T - I onto the +1 eigenspace of a
// real symplectic Grassmann point; lands in Gr(2k, R^{2n}).
GrassPoint psi2(const SpGrassPoint& x, double tol = kDefaultTol);

// Split diag(D, D^{-1}) into floor(n/2) commuting diagonal symplectic
// factors, each touching two (or, for odd n, finally three) coordinate pairs.
std::vector<SymplecticMatrix> diag_block_split(const SymplecticMatrix& d,
                                               double tol = kDefaultTol);

struct SpTwoInvolutions {
  SpGrassPoint y1, y2;
  int sign = 1;  // sign * y1 * y2 = x
};

// Write x = sign * y1 * y2 with y1, y2 symplectic involutions. Requires every
// eigenvalue class away from +-1 to have even multiplicity (a symplectic
// involution conjugating x to x^{-1} forces this); otherwise NonGeneric.
SpTwoInvolutions sp_two_involutions_base(const SymplecticMatrix& x, double tol = kDefaultTol);

struct SpFactorization {
  Field field = Field::Complex;
  ComplexMatrix target;
  std::vector<SpGrassPoint> factors;
  double residual = 0;

  ComplexMatrix product() const;
};

// x in Sp(2n, C) with distinct spectrum away from +-1 as a product of four
// symplectic Grassmann involutions: symplectically diagonalize, split the
// diagonal into a commuting pair (A, B) whose eigenvalue classes are all
// even, and split each of A, B into two involutions.
SpFactorization decompose_sp_four(const SymplecticMatrix& x, double tol = kDefaultTol);

}  // namespace grassfactor::symplectic
