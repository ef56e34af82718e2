#pragma once

#include <random>

#include "grassfactor/types.hpp"

namespace grassfactor {

// Seeded generator for all sampling entry points. Determinism contract is
// per-platform: the same seed yields the same sample within one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  Complex cnormal() { return Complex(normal_(gen_), normal_(gen_)); }
  std::uint64_t next() { return gen_(); }

  RealMatrix gaussian(int rows, int cols) {
    RealMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  ComplexMatrix cgaussian(int rows, int cols) {
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Haar-distributed orthogonal matrix: QR of a Gaussian with the R-diagonal
// sign fix so the distribution is exactly Haar.
RealMatrix haar_orthogonal(int n, Rng& rng);
// Haar special orthogonal: flips one column's sign when det = -1.
RealMatrix haar_special_orthogonal(int n, Rng& rng);
ComplexMatrix haar_unitary(int n, Rng& rng);
// Haar unitary rescaled by a phase so det = 1 exactly (up to rounding).
ComplexMatrix haar_special_unitary(int n, Rng& rng);

}  // namespace grassfactor
