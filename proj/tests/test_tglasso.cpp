#include <doctest.h>

#include <cmath>
#include <limits>

#include "mpgraph/rng.hpp"
#include "mpgraph/synth.hpp"
#include "mpgraph/tglasso.hpp"
#include "oracles.hpp"

using namespace mpgraph;

namespace {

std::size_t offdiag_nonzeros(const SymMatrix& T) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < T.dim(); ++i)
    for (std::size_t j = i + 1; j < T.dim(); ++j)
      if (T(i, j) != 0.0) ++e;
  return e;
}

}  // namespace

TEST_CASE("hard threshold zeroes small off-diagonals and keeps the diagonal") {
  SymMatrix T(2);
  T.set(0, 0, 1);
  T.set(1, 1, 1);
  T.set(0, 1, 0.3);
  const SymMatrix out = hard_threshold(T, 0.5);
  CHECK(out(0, 1) == 0.0);
  CHECK(out(0, 0) == 1.0);
  CHECK(out(1, 1) == 1.0);
}

TEST_CASE("hard threshold at zero is the identity map") {
  Rng rng(3);
  const SymMatrix T = oracles::random_pd(4, rng);
  const SymMatrix out = hard_threshold(T, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(out(i, j) == T(i, j));
}

TEST_CASE("hard threshold keeps entries exactly at the level") {
  SymMatrix T(3);
  for (std::size_t i = 0; i < 3; ++i) T.set(i, i, 1.25);
  T.set(0, 1, 0.6);
  T.set(1, 2, 0.6);
  T.set(0, 2, 0.05);
  const SymMatrix out = hard_threshold(T, 0.1);
  CHECK(out(0, 2) == 0.0);
  CHECK(out(0, 1) == 0.6);
  CHECK(out(1, 2) == 0.6);

  const SymMatrix at = hard_threshold(T, 0.6);
  CHECK(at(0, 1) == 0.6);  // strict inequality: survives
}

TEST_CASE("hard threshold rejects negative levels") {
  CHECK_THROWS_AS(hard_threshold(SymMatrix::identity(2), -0.1),
                  std::invalid_argument);
}

TEST_CASE("gaussian log-likelihood closed forms") {
  for (std::size_t m : {2ul, 5ul}) {
    CHECK(gaussian_loglik(SymMatrix::identity(m), SymMatrix::identity(m), 10) ==
          doctest::Approx(-5.0 * static_cast<double>(m)));
  }
  SymMatrix Theta(1), S(1);
  Theta.set(0, 0, 2.0);
  S.set(0, 0, 1.0);
  CHECK(gaussian_loglik(Theta, S, 4) ==
        doctest::Approx(2.0 * (std::log(2.0) - 2.0)));
}

TEST_CASE("the MLE maximizes the likelihood over PD perturbations") {
  Rng rng(17);
  const SymMatrix S = oracles::random_covariance(4, rng);
  const SymMatrix Theta = invert_pd(S);
  const double at_mle = gaussian_loglik(Theta, S, 30);
  for (int rep = 0; rep < 50; ++rep) {
    SymMatrix candidate = Theta;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j)
        candidate.set(i, j, candidate(i, j) + 0.03 * rng.normal());
    try {
      CHECK(gaussian_loglik(candidate, S, 30) <= at_mle + 1e-9);
    } catch (const not_positive_definite&) {
    }
  }
}

TEST_CASE("eBIC closed form for the edgeless identity model") {
  CHECK(ebic_score(SymMatrix::identity(5), SymMatrix::identity(5), 10, 5,
                   0.5) == doctest::Approx(50.0));
}

TEST_CASE("one spurious edge costs the eBIC exactly its penalty") {
  const std::size_t m = 5, n = 40;
  const double gamma = 0.5;
  SymMatrix S = SymMatrix::identity(m);
  SymMatrix sparse = SymMatrix::identity(m);
  SymMatrix with_edge = sparse;
  with_edge.set(0, 1, 1e-9);  // negligible likelihood effect
  const double delta = ebic_score(with_edge, S, n, m, gamma) -
                       ebic_score(sparse, S, n, m, gamma);
  CHECK(delta == doctest::Approx(std::log(static_cast<double>(n)) +
                                 4.0 * gamma * std::log(static_cast<double>(m)))
                     .epsilon(1e-6));
}

TEST_CASE("eBIC of an indefinite matrix is the +inf sentinel") {
  SymMatrix bad(2);
  bad.set(0, 0, 1);
  bad.set(1, 1, 1);
  bad.set(0, 1, 2);
  CHECK(std::isinf(ebic_score(bad, SymMatrix::identity(2), 10, 2, 0.5)));
}

TEST_CASE("eBIC preconditions") {
  CHECK_THROWS_AS(ebic_score(SymMatrix::identity(2), SymMatrix::identity(2), 1,
                             2, 0.5),
                  std::invalid_argument);
}

TEST_CASE("grid argmin matches an independent straight-line recomputation") {
  // 3-node chain data, fixed seed; the oracle repeats the algorithm's
  // arithmetic from the public pieces only.
  GroundTruthModel model = chain_precision(3);
  Rng data_rng(71);
  const DataMatrix X = sample_gaussian(model, 60, data_rng);

  BaseEstimatorConfig config;
  const SymMatrix theta_tilde = fit_thresholded(X, config);

  const std::size_t n = X.rows, m = X.cols;
  SymMatrix S = sample_covariance(X, config.center);
  SymMatrix C(m);
  for (std::size_t i = 0; i < m; ++i) {
    C.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < m; ++j)
      C.set(i, j, S(i, j) / std::sqrt(S(i, i) * S(j, j)));
  }
  GlassoOptions opts = config.glasso_opts;
  opts.lambda = std::sqrt(std::log(static_cast<double>(m)) /
                          static_cast<double>(n));
  const GlassoFit fit = fit_glasso(C, opts);
  const double theta_max = fit.precision.max_abs_offdiag();
  REQUIRE(theta_max > 0.0);

  double best_ebic = std::numeric_limits<double>::infinity();
  SymMatrix best;
  for (int g = 10; g >= 1; --g) {  // scan top-down so ties keep larger tau
    const SymMatrix cand = hard_threshold(fit.precision, theta_max * g / 10.0);
    const GlassoFit refit = fit_support_mle(C, cand, opts);
    if (!refit.converged) continue;
    const double e = static_cast<double>(offdiag_nonzeros(cand));
    const double adjusted =
        -2.0 * gaussian_loglik(refit.precision, C, n) +
        e * std::log(static_cast<double>(n)) +
        4.0 * e * config.gamma * std::log(static_cast<double>(m));
    if (adjusted < best_ebic) {
      best_ebic = adjusted;
      best = cand;
    }
  }

  REQUIRE(best.dim() == m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      CHECK(theta_tilde(i, j) == best(i, j));
}

TEST_CASE("support nesting and grid monotonicity") {
  GroundTruthModel model = chain_precision(10);
  Rng data_rng(9);
  const DataMatrix X = sample_gaussian(model, 400, data_rng);

  const std::size_t n = X.rows, m = X.cols;
  SymMatrix S = sample_covariance(X, true);
  SymMatrix C(m);
  for (std::size_t i = 0; i < m; ++i) {
    C.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < m; ++j)
      C.set(i, j, S(i, j) / std::sqrt(S(i, i) * S(j, j)));
  }
  GlassoOptions opts;
  opts.lambda = std::sqrt(std::log(static_cast<double>(m)) /
                          static_cast<double>(n));
  const GlassoFit fit = fit_glasso(C, opts);
  const double theta_max = fit.precision.max_abs_offdiag();

  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (int g = 1; g <= 10; ++g) {
    const SymMatrix cand = hard_threshold(fit.precision, theta_max * g / 10.0);
    const std::size_t e = offdiag_nonzeros(cand);
    CHECK(e <= prev);
    prev = e;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (cand(i, j) != 0.0) CHECK(fit.precision(i, j) != 0.0);
  }

  // the estimator's own output is nested in the glasso support too
  BaseEstimatorConfig config;
  const SymMatrix theta_tilde = fit_thresholded(X, config);
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(theta_tilde(i, i) > 0.0);
    for (std::size_t j = i + 1; j < m; ++j) {
      CHECK(theta_tilde(i, j) == theta_tilde(j, i));
      if (theta_tilde(i, j) != 0.0) CHECK(fit.precision(i, j) != 0.0);
    }
  }
}

TEST_CASE("strong-signal chain support is recovered on the full patch") {
  GroundTruthModel model = chain_precision(10);
  Rng data_rng(1234);
  const DataMatrix X = sample_gaussian(model, 400, data_rng);
  const SymMatrix theta_tilde = fit_thresholded(X, BaseEstimatorConfig{});
  EdgeSet support;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j)
      if (theta_tilde(i, j) != 0.0) support.emplace_back(i, j);
  CHECK(support == model.edges);
}

TEST_CASE("an edgeless glasso fit skips the threshold search") {
  // exactly orthogonal columns: the sample correlation is the identity,
  // the glasso fit is diagonal and theta_max = 0, so the fit comes back
  // unchanged with no threshold search
  DataMatrix X(4, 2);
  const double col0[4] = {1, -1, 1, -1};
  const double col1[4] = {1, 1, -1, -1};
  for (std::size_t i = 0; i < 4; ++i) {
    X(i, 0) = col0[i];
    X(i, 1) = col1[i];
  }
  const SymMatrix out = fit_thresholded(X, BaseEstimatorConfig{});
  CHECK(out(0, 1) == 0.0);
  CHECK(out(0, 0) > 0.0);
  CHECK(out(1, 1) > 0.0);
}

TEST_CASE("degenerate constant columns are rejected") {
  DataMatrix X(30, 3);
  Rng rng(8);
  for (std::size_t i = 0; i < 30; ++i) {
    X(i, 0) = rng.normal();
    X(i, 1) = 2.5;  // constant
    X(i, 2) = rng.normal();
  }
  CHECK_THROWS_AS(fit_thresholded(X, BaseEstimatorConfig{}), degenerate_input);
}

TEST_CASE("null-data patches carry at most the forced argmax edge") {
  // With the grid topping out at the largest |entry|, a nonempty glasso
  // support always leaves at least one edge; on independent data the eBIC
  // should prune everything else.
  int sparse_enough = 0;
  const int seeds = 30;
  for (int seed = 0; seed < seeds; ++seed) {
    DataMatrix X(200, 5);
    Rng rng(1000 + seed);
    for (auto& v : X.values) v = rng.normal();
    const SymMatrix out = fit_thresholded(X, BaseEstimatorConfig{});
    if (offdiag_nonzeros(out) <= 1) ++sparse_enough;
  }
  CHECK(sparse_enough >= seeds - 5);
}

TEST_CASE("fit_thresholded validates patch dimensions") {
  CHECK_THROWS_AS(fit_thresholded(DataMatrix(1, 4), BaseEstimatorConfig{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_thresholded(DataMatrix(10, 1), BaseEstimatorConfig{}),
                  std::invalid_argument);
}
