#pragma once

#include <vector>

#include "grassfactor/types.hpp"

namespace grassfactor::backend {

// One diagonal block of the real Schur form of an orthogonal matrix: either a
// 2x2 rotation by angle 2*theta, stored through theta in (0, pi/2), or a 1x1
// sign block (+1/-1).
struct SchurBlock {
  enum class Kind { Rotation, Sign } kind;
  double theta = 0.0;  // rotation blocks: block = [[cos2t, sin2t], [-sin2t, cos2t]], sin2t > 0
  int sign = 1;        // sign blocks
};

struct SchurForm {
  RealMatrix q;                    // orthogonal, columns ordered to match blocks
  std::vector<SchurBlock> blocks;  // rotations (theta ascending), then +1s, then -1s
  RealMatrix middle() const;       // assembled block-diagonal middle matrix
  RealMatrix reconstruct() const { return q * middle() * q.transpose(); }
};

// Real Schur form of an orthogonal matrix, normalized so every 2x2 block has
// positive (1,2) entry. Throws NotOrthogonal if ||Q^T Q - I||_F > tol * n.
// Inputs orthogonal only up to tol are first projected onto O(n).
SchurForm schur_orthogonal(const RealMatrix& q, double tol = kDefaultTol);

struct UnitaryEig {
  ComplexMatrix q;             // unitary eigenvector matrix
  std::vector<double> phases;  // in (-pi, pi], sorted descending, matching q's columns
  ComplexMatrix reconstruct() const;
};

// Eigendecomposition of a unitary matrix via the complex Schur form (exactly
// diagonal for normal inputs up to roundoff). Near-unitary inputs within tol
// are projected onto U(n) first.
UnitaryEig eig_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

struct Svd {
  RealMatrix u;
  RealVector sigma;  // descending, nonnegative
  RealMatrix v;
};

Svd svd(const RealMatrix& m);

// Nearest orthogonal/unitary matrix in Frobenius norm (polar factor).
RealMatrix project_orthogonal(const RealMatrix& m);
ComplexMatrix project_unitary(const ComplexMatrix& m);

double orthogonality_residual(const RealMatrix& q);
double unitarity_residual(const ComplexMatrix& u);

}  // namespace grassfactor::backend
