#pragma once

#include "grassfactor/random.hpp"
#include "grassfactor/types.hpp"

namespace grassfactor::grassmann {

// A point of Gr(k, F^n) in the involution model: X = X^H = X^{-1} with
// tr X = 2k - n. Real points are stored with zero imaginary part.
struct GrassPoint {
  Field field = Field::Real;
  int n = 0;
  int k = 0;
  ComplexMatrix m;

  RealMatrix real() const { return m.real(); }
};

struct ValidationReport {
  bool ok = false;
  double involution_residual = 0.0;  // ||m^2 - I||_F
  double hermitian_residual = 0.0;   // ||m - m^H||_F
  double trace_residual = 0.0;       // |tr m - (2k - n)|
  double imaginary_residual = 0.0;   // real field only: ||Im m||_F
};

ValidationReport gr_validate(const GrassPoint& x, double tol = kDefaultTol);

// Wraps a matrix as a GrassPoint, inferring k from the trace; throws
// InvalidPoint/BadDimensions if the matrix is not a Grassmannian involution
// within tol (including a half-integer trace).
GrassPoint gr_from_matrix(Field field, const ComplexMatrix& m, double tol = kDefaultTol);

// Canonical base point: diag(I_k, -I_{n-k}).
GrassPoint gr_canonical(Field field, int k, int n);

// X = 2 B B^H - I for an orthonormal basis B (n x k) of the subspace.
GrassPoint gr_from_basis(Field field, const ComplexMatrix& basis, double tol = kDefaultTol);

// Orthonormal basis (n x k) of the +1 eigenspace of x.
ComplexMatrix gr_basis_of(const GrassPoint& x, double tol = kDefaultTol);

// Haar-uniform point: conjugates the canonical point by a Haar orthogonal or
// unitary matrix.
GrassPoint gr_sample(Field field, int k, int n, std::uint64_t seed);
GrassPoint gr_sample(Field field, int k, int n, Rng& rng);

}  // namespace grassfactor::grassmann
