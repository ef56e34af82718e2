#pragma once

#include <array>
#include <vector>

#include "grassfactor/grassmann.hpp"
#include "grassfactor/phi.hpp"
#include "grassfactor/types.hpp"

namespace grassfactor::decompose {

using grassmann::GrassPoint;

struct Factorization {
  Field field = Field::Real;
  ComplexMatrix target;
  std::vector<GrassPoint> factors;
  double residual = 0.0;  // ||product of factors - target||_F

  ComplexMatrix product() const;
};

// Z in SO(n) as a product of two points of Gr(floor(n/2), R^n), via the real
// Schur form: each rotation block R(2t) splits into reflections S(t) * T(t).
Factorization decompose_so(const RealMatrix& z, double tol = kDefaultTol);

// Z in O(n) \ SO(n), n odd: same block recipe with the lone -1 eigenvalue
// split as (+1) * (-1); factors land in Gr((n+1)/2) x Gr((n-1)/2).
// Throws Unsupported for even n (O(n) \ SO(n) has no such two-factor split).
Factorization decompose_so_minus(const RealMatrix& z, double tol = kDefaultTol);

// Z in SU(n) as a product of four Grassmannian involutions of half rank,
// built from the unitary eigendecomposition and cumulative phase sums.
Factorization decompose_su(const ComplexMatrix& z, double tol = kDefaultTol);

// det Z = -1 variant; one factor's trailing sign flips, shifting its k by one.
Factorization decompose_su_minus(const ComplexMatrix& z, double tol = kDefaultTol);

// Four-factor decomposition with prescribed signature (k1 >= k2 >= k3 >= k4,
// k1 + k2 <= n, k2 + k4 >= n - 1). Requires det z = (-1)^(k1+k2+k3+k4).
Factorization decompose_su_signature(const ComplexMatrix& z, const phi::PhiSignature& sig,
                                     double tol = kDefaultTol);

// Solve e^{i t_tau(1)} x - e^{i t_tau(2)} (1 - x) = e^{-i t_tau(3)} (2y - 1)
// over permutations tau of a zero-sum (mod 2pi) phase quadruple, with
// (x, y) in [0,1]^2. Throws NoSolutionFound if no permutation admits one.
struct PhaseSolution {
  std::array<int, 4> tau;  // permutation applied to the input phases
  double x = 0, y = 0;
  double residual = 0;
};

PhaseSolution solve_phase_system(const std::array<double, 4>& theta, double tol = kDefaultTol);

// Z in SU(2k), k >= 3, as a product with signature (k, k, k, k-2): permutes
// the eigenphases so a 2x2 corner system is solvable, then splits two
// diagonal products blockwise.
Factorization decompose_su_kkkk2(const ComplexMatrix& z, double tol = kDefaultTol);

}  // namespace grassfactor::decompose
