#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mpgraph/glasso.hpp"
#include "mpgraph/rng.hpp"
#include "oracles.hpp"

using namespace mpgraph;

namespace {

GlassoOptions tight_options(double lambda) {
  GlassoOptions opts;
  opts.lambda = lambda;
  opts.outer_tol = 1e-9;
  opts.inner_tol = 1e-11;
  opts.max_outer_iters = 2000;
  return opts;
}

SymMatrix two_by_two(double diag, double off) {
  SymMatrix S(2);
  S.set(0, 0, diag);
  S.set(1, 1, diag);
  S.set(0, 1, off);
  return S;
}

}  // namespace

TEST_CASE("identity covariance yields the identity precision") {
  for (double lambda : {0.0, 0.3, 2.0}) {
    GlassoOptions opts;
    opts.lambda = lambda;
    const GlassoFit fit = fit_glasso(SymMatrix::identity(4), opts);
    CHECK(fit.converged);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(fit.precision(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("2x2 off-diagonal vanishes exactly when |S12| <= lambda") {
  for (double off : {0.1, 0.3, 0.49, 0.51, 0.7, 0.9}) {
    const GlassoFit fit = fit_glasso(two_by_two(1.0, off), tight_options(0.5));
    REQUIRE(fit.converged);
    if (off <= 0.5)
      CHECK(fit.precision(0, 1) == 0.0);
    else
      CHECK(fit.precision(0, 1) != 0.0);
  }
  const GlassoFit fit = fit_glasso(two_by_two(1.0, 0.9), tight_options(0.95));
  CHECK(fit.precision(0, 1) == 0.0);
}

TEST_CASE("unpenalized fit recovers the inverse covariance") {
  const SymMatrix S = two_by_two(1.0, 0.5);
  const GlassoFit fit = fit_glasso(S, tight_options(0.0));
  const SymMatrix Sinv = invert_pd(S);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(fit.precision(i, j) == doctest::Approx(Sinv(i, j)).epsilon(1e-5));
}

TEST_CASE("objective value basics") {
  CHECK(glasso_objective(SymMatrix::identity(2), SymMatrix::identity(2), 0.0,
                         false) == doctest::Approx(-2.0));
  CHECK(glasso_objective(SymMatrix::identity(2), SymMatrix::identity(2), 1.0,
                         false) == doctest::Approx(-2.0));
  CHECK(glasso_objective(SymMatrix::identity(2), SymMatrix::identity(2), 1.0,
                         true) == doctest::Approx(-4.0));
}

TEST_CASE("negative penalty is rejected") {
  GlassoOptions opts;
  opts.lambda = -0.1;
  CHECK_THROWS_AS(fit_glasso(SymMatrix::identity(2), opts),
                  std::invalid_argument);
}

TEST_CASE("solution is locally optimal among random PD perturbations") {
  Rng rng(404);
  const SymMatrix S = oracles::random_covariance(4, rng);
  const double lambda = 0.15;
  const GlassoFit fit = fit_glasso(S, tight_options(lambda));
  const double at_fit = glasso_objective(fit.precision, S, lambda, false);
  for (int rep = 0; rep < 50; ++rep) {
    SymMatrix candidate = fit.precision;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j)
        candidate.set(i, j, candidate(i, j) + 0.05 * rng.normal());
    try {
      CHECK(glasso_objective(candidate, S, lambda, false) <= at_fit + 1e-9);
    } catch (const not_positive_definite&) {
      // perturbation left the cone; nothing to compare
    }
  }
}

TEST_CASE("converged fits keep precision and covariance mutually inverse") {
  Rng rng(321);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t m = 2 + rng.uniform_below(6);
    const SymMatrix S = oracles::random_covariance(m, rng);
    GlassoOptions opts;
    opts.lambda = 0.05 * static_cast<double>(rng.uniform_below(4));
    const GlassoFit fit = fit_glasso(S, opts);
    REQUIRE(fit.converged);
    CHECK(is_positive_definite(fit.precision));
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          acc += fit.precision(i, k) * fit.covariance(k, j);
        worst = std::max(worst, std::fabs(acc - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("objective path is monotone across sweeps") {
  Rng rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    const SymMatrix S = oracles::random_covariance(5, rng);
    GlassoOptions opts;
    opts.lambda = 0.1;
    const GlassoFit fit = fit_glasso(S, opts);
    for (std::size_t t = 1; t < fit.objective_path.size(); ++t)
      CHECK(fit.objective_path[t] >=
            fit.objective_path[t - 1] -
                1e-10 * (1.0 + std::fabs(fit.objective_path[t - 1])));
  }
}

TEST_CASE("KKT conditions hold at convergence") {
  Rng rng(2718);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t m = 3 + rng.uniform_below(3);
    const SymMatrix S = oracles::random_covariance(m, rng);
    const double lambda = 0.2;
    const GlassoFit fit = fit_glasso(S, tight_options(lambda));
    REQUIRE(fit.converged);
    const SymMatrix W = invert_pd(fit.precision);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double grad = W(i, j) - S(i, j);
        if (fit.precision(i, j) == 0.0) {
          CHECK(std::fabs(grad) <= lambda + 1e-3);
        } else {
          const double sign = fit.precision(i, j) > 0 ? 1.0 : -1.0;
          CHECK(std::fabs(grad - lambda * sign) <= 1e-3);
        }
      }
  }
}

TEST_CASE("coordinate descent matches the proximal-gradient oracle") {
  Rng rng(1234);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = rep % 2 == 0 ? 3 : 4;
    const SymMatrix S = oracles::random_covariance(m, rng);
    for (double lambda : {0.05, 0.2}) {
      const GlassoFit fit = fit_glasso(S, tight_options(lambda));
      const SymMatrix oracle = oracles::ista_glasso(S, lambda);
      CHECK(std::fabs(glasso_objective(fit.precision, S, lambda, false) -
                      glasso_objective(oracle, S, lambda, false)) <= 1e-5);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          CHECK((fit.precision(i, j) != 0.0) == (oracle(i, j) != 0.0));
    }
  }
}

TEST_CASE("permutation equivariance") {
  Rng rng(555);
  const std::size_t m = 5;
  const SymMatrix S = oracles::random_covariance(m, rng);
  const std::size_t perm[5] = {3, 0, 4, 1, 2};
  SymMatrix PS(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      PS.set(i, j, S(perm[i], perm[j]));

  const GlassoFit base = fit_glasso(S, tight_options(0.12));
  const GlassoFit permuted = fit_glasso(PS, tight_options(0.12));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double expected = base.precision(perm[i], perm[j]);
      CHECK(std::fabs(permuted.precision(i, j) - expected) <= 1e-8);
      CHECK((permuted.precision(i, j) != 0.0) == (expected != 0.0));
    }
}

TEST_CASE("support-constrained MLE honors its support and KKT system") {
  Rng rng(808);
  const std::size_t m = 5;
  const SymMatrix S = oracles::random_covariance(m, rng);

  SymMatrix support(m);  // ring support
  for (std::size_t i = 0; i < m; ++i) support.set(i, (i + 1) % m, 1.0);

  GlassoOptions opts = tight_options(0.0);
  const GlassoFit fit = fit_support_mle(S, support, opts);
  REQUIRE(fit.converged);

  const SymMatrix W = invert_pd(fit.precision);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (support(i, j) != 0.0) {
        // free entries: stationarity forces W to match S
        CHECK(std::fabs(W(i, j) - S(i, j)) <= 1e-6);
      } else {
        CHECK(fit.precision(i, j) == 0.0);
      }
    }

  // trivial supports
  const GlassoFit full = fit_support_mle(
      S, SymMatrix::from_lower(m, std::vector<double>(m * m, 1.0)), opts);
  const SymMatrix Sinv = invert_pd(S);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      CHECK(std::fabs(full.precision(i, j) - Sinv(i, j)) <= 1e-6);

  const GlassoFit diag = fit_support_mle(S, SymMatrix(m), opts);
  for (std::size_t i = 0; i < m; ++i)
    CHECK(diag.precision(i, i) == doctest::Approx(1.0 / S(i, i)));
}

TEST_CASE("hitting the sweep cap returns the best iterate unconverged") {
  Rng rng(60);
  const SymMatrix S = oracles::random_covariance(6, rng);
  GlassoOptions opts;
  opts.lambda = 0.01;
  opts.outer_tol = 1e-12;
  opts.max_outer_iters = 1;
  const GlassoFit fit = fit_glasso(S, opts);
  CHECK_FALSE(fit.converged);
  CHECK(fit.iterations == 1);
  CHECK(is_positive_definite(fit.precision));
}
