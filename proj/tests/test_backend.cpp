#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grassfactor/backend.hpp"
#include "grassfactor/random.hpp"

using namespace grassfactor;

TEST_CASE("schur_orthogonal reconstructs Haar orthogonal matrices") {
  Rng rng(11);
  for (int n : {2, 3, 5, 8, 13, 21, 30}) {
    RealMatrix q = haar_orthogonal(n, rng);
    auto sf = backend::schur_orthogonal(q, 1e-9);
    CHECK((sf.reconstruct() - q).norm() <= 1e-10 * n);
    CHECK((sf.q.transpose() * sf.q - RealMatrix::Identity(n, n)).norm() <= 1e-12 * n);
    int dim = 0;
    for (const auto& b : sf.blocks) {
      if (b.kind == backend::SchurBlock::Kind::Rotation) {
        CHECK(b.theta > 0);
        CHECK(b.theta < 3.15);
        dim += 2;
      } else {
        CHECK(std::abs(b.sign) == 1);
        dim += 1;
      }
    }
    CHECK(dim == n);
  }
}

TEST_CASE("schur_orthogonal classifies pure sign matrices") {
  RealMatrix d = RealMatrix::Identity(4, 4);
  d(1, 1) = -1;
  d(3, 3) = -1;
  auto sf = backend::schur_orthogonal(d, 1e-9);
  int plus = 0, minus = 0;
  for (const auto& b : sf.blocks) {
    REQUIRE(b.kind == backend::SchurBlock::Kind::Sign);
    (b.sign > 0 ? plus : minus)++;
  }
  CHECK(plus == 2);
  CHECK(minus == 2);
}

TEST_CASE("schur_orthogonal separates clustered rotation angles") {
  // two planes rotated by nearly identical angles: the cluster sweep must
  // still produce two clean rotation blocks
  RealMatrix m = RealMatrix::Zero(4, 4);
  double t1 = 0.7, t2 = 0.7 + 3e-9;
  m.block(0, 0, 2, 2) << std::cos(t1), -std::sin(t1), std::sin(t1), std::cos(t1);
  m.block(2, 2, 2, 2) << std::cos(t2), -std::sin(t2), std::sin(t2), std::cos(t2);
  Rng rng(3);
  RealMatrix q = haar_orthogonal(4, rng);
  RealMatrix z = q * m * q.transpose();
  auto sf = backend::schur_orthogonal(z, 1e-9);
  REQUIRE(sf.blocks.size() == 2);
  CHECK((sf.reconstruct() - z).norm() <= 1e-8);
}

TEST_CASE("schur_orthogonal rejects non-orthogonal input") {
  RealMatrix m = RealMatrix::Identity(3, 3);
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(backend::schur_orthogonal(m, 1e-9), NotOrthogonal);
}

TEST_CASE("eig_unitary sorts phases descending and reconstructs") {
  Rng rng(7);
  for (int n : {2, 4, 9, 17}) {
    ComplexMatrix u = haar_unitary(n, rng);
    auto eig = backend::eig_unitary(u, 1e-9);
    CHECK((eig.reconstruct() - u).norm() <= 1e-10 * n);
    for (size_t i = 1; i < eig.phases.size(); ++i) CHECK(eig.phases[i - 1] >= eig.phases[i]);
    for (double p : eig.phases) {
      CHECK(p <= 3.15);
      CHECK(p > -3.15);
    }
  }
}

TEST_CASE("eig_unitary rejects non-unitary input") {
  ComplexMatrix m = 2.0 * ComplexMatrix::Identity(3, 3);
  CHECK_THROWS_AS(backend::eig_unitary(m, 1e-9), NotUnitary);
}

TEST_CASE("projection repairs mild non-orthogonality") {
  Rng rng(19);
  RealMatrix q = haar_orthogonal(6, rng);
  RealMatrix noisy = q + 1e-8 * rng.gaussian(6, 6);
  RealMatrix fixed = backend::project_orthogonal(noisy);
  CHECK((fixed.transpose() * fixed - RealMatrix::Identity(6, 6)).norm() <= 1e-12 * 6);
  auto sf = backend::schur_orthogonal(noisy, 1e-6);
  CHECK((sf.reconstruct() - noisy).norm() <= 1e-6);
}

TEST_CASE("haar samplers produce the advertised structure") {
  Rng rng(23);
  RealMatrix so = haar_special_orthogonal(5, rng);
  CHECK(std::abs(so.determinant() - 1.0) <= 1e-10);
  ComplexMatrix su = haar_special_unitary(5, rng);
  CHECK(std::abs(su.determinant() - Complex(1, 0)) <= 1e-10);
  CHECK((su.adjoint() * su - ComplexMatrix::Identity(5, 5)).norm() <= 1e-12 * 5);
}
