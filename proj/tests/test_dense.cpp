#include <doctest.h>

#include <cmath>

#include "mpgraph/rng.hpp"
#include "mpgraph/sym_matrix.hpp"
#include "mpgraph/synth.hpp"
#include "oracles.hpp"

using namespace mpgraph;

namespace {

DataMatrix matrix_2x2(double a, double b, double c, double d) {
  DataMatrix X(2, 2);
  X(0, 0) = a;
  X(0, 1) = b;
  X(1, 0) = c;
  X(1, 1) = d;
  return X;
}

}  // namespace

TEST_CASE("sample covariance without centering is (1/n) X^T X") {
  const SymMatrix S = sample_covariance(matrix_2x2(1, 0, -1, 0), false);
  CHECK(S(0, 0) == doctest::Approx(1.0));
  CHECK(S(0, 1) == doctest::Approx(0.0));
  CHECK(S(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("constant columns center to zero") {
  const SymMatrix S = sample_covariance(matrix_2x2(2, 2, 2, 2), true);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(S(i, j) == doctest::Approx(0.0));
}

TEST_CASE("covariance of seeded standard normal data concentrates") {
  Rng rng(2024);
  DataMatrix X(200, 5);
  for (auto& v : X.values) v = rng.normal();
  const SymMatrix S = sample_covariance(X, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      worst = std::max(worst, std::fabs(S(i, j) - (i == j ? 1.0 : 0.0)));
  CHECK(worst < 0.35);
}

TEST_CASE("covariance rejects degenerate shapes") {
  CHECK_THROWS_AS(sample_covariance(DataMatrix(1, 3), false),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_covariance(DataMatrix(4, 0), false),
                  std::invalid_argument);
}

TEST_CASE("cholesky of the identity is the identity") {
  const auto L = cholesky(SymMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(L[i * 3 + j] == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("cholesky matches the hand-checked 2x2 factor") {
  SymMatrix A(2);
  A.set(0, 0, 4);
  A.set(0, 1, 2);
  A.set(1, 1, 2);
  const auto L = cholesky(A);
  CHECK(L[0] == doctest::Approx(2.0));
  CHECK(L[1] == doctest::Approx(0.0));
  CHECK(L[2] == doctest::Approx(1.0));
  CHECK(L[3] == doctest::Approx(1.0));
}

TEST_CASE("cholesky reports indefinite input") {
  SymMatrix A(2);
  A.set(0, 0, 1);
  A.set(0, 1, 2);
  A.set(1, 1, 1);
  CHECK_THROWS_AS(cholesky(A), not_positive_definite);
}

TEST_CASE("log determinant basics") {
  CHECK(log_det_pd(SymMatrix::identity(5)) == doctest::Approx(0.0));
  SymMatrix D(2);
  D.set(0, 0, 2);
  D.set(1, 1, 3);
  CHECK(log_det_pd(D) == doctest::Approx(std::log(6.0)));
}

TEST_CASE("log determinant agrees with cofactor expansion on the 3-chain") {
  const SymMatrix& T = chain_precision(3).precision;
  CHECK(log_det_pd(T) ==
        doctest::Approx(std::log(oracles::det3_cofactor(T))).epsilon(1e-10));
}

TEST_CASE("inverse basics") {
  const SymMatrix I4 = invert_pd(SymMatrix::identity(4));
  for (std::size_t i = 0; i < 4; ++i) CHECK(I4(i, i) == doctest::Approx(1.0));

  SymMatrix D(2);
  D.set(0, 0, 2);
  D.set(1, 1, 4);
  const SymMatrix Dinv = invert_pd(D);
  CHECK(Dinv(0, 0) == doctest::Approx(0.5));
  CHECK(Dinv(1, 1) == doctest::Approx(0.25));
  CHECK(Dinv(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("inverse of the 3-chain multiplies back to the identity") {
  const SymMatrix T = chain_precision(3).precision;
  const SymMatrix Tinv = invert_pd(T);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += T(i, k) * Tinv(k, j);
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("smallest eigenvalue of simple matrices") {
  SymMatrix D(3);
  D.set(0, 0, 1);
  D.set(1, 1, 2);
  D.set(2, 2, 3);
  CHECK(min_eigenvalue(D) == doctest::Approx(1.0).epsilon(1e-5));

  SymMatrix F(2);
  F.set(0, 1, 1.0);
  CHECK(min_eigenvalue(F) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("smallest eigenvalue matches the tridiagonal formula") {
  for (std::size_t M : {3ul, 7ul, 20ul}) {
    const SymMatrix T = chain_precision(M).precision;
    CHECK(min_eigenvalue(T, 1e-8) ==
          doctest::Approx(oracles::tridiag_toeplitz_min_eigenvalue(M, 1.25, 0.6))
              .epsilon(1e-6));
  }
  CHECK(min_eigenvalue(chain_precision(3).precision, 1e-8) ==
        doctest::Approx(1.25 - 0.6 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("cholesky reconstruction, inverse involution, log det symmetry") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 1 + rng.uniform_below(8);
    const SymMatrix A = oracles::random_pd(m, rng);

    const auto L = cholesky(A);
    double recon_err = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += L[i * m + k] * L[j * m + k];
        recon_err = std::max(recon_err, std::fabs(acc - A(i, j)));
      }
    CHECK(recon_err <= 1e-10 * std::max(1.0, A.max_abs()));

    const SymMatrix twice = invert_pd(invert_pd(A));
    double inv_err = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        inv_err = std::max(inv_err, std::fabs(twice(i, j) - A(i, j)));
    CHECK(inv_err < 1e-8);

    CHECK(log_det_pd(invert_pd(A)) ==
          doctest::Approx(-log_det_pd(A)).epsilon(1e-8));
  }
}

TEST_CASE("smallest eigenvalue lower-bounds random Rayleigh quotients") {
  Rng rng(77);
  const SymMatrix A = oracles::random_pd(6, rng, 0.0);
  const double lambda_min = min_eigenvalue(A, 1e-8);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(6);
    double norm2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
    double quad = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) quad += v[i] * A(i, j) * v[j];
    CHECK(lambda_min <= quad / norm2 + 1e-7);
  }
}

TEST_CASE("log det and inverse propagate indefiniteness") {
  SymMatrix bad(2);
  bad.set(0, 0, 1);
  bad.set(1, 1, 1);
  bad.set(0, 1, 3);
  CHECK_THROWS_AS(log_det_pd(bad), not_positive_definite);
  CHECK_THROWS_AS(invert_pd(bad), not_positive_definite);
}
