#include "mpgraph/tglasso.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mpgraph {

void BaseEstimatorConfig::validate() const {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("base estimator: gamma must be in [0, 1]");
  if (grid_size < 1)
    throw std::invalid_argument("base estimator: grid_size must be >= 1");
  glasso_opts.validate();
}

SymMatrix hard_threshold(const SymMatrix& Theta, double tau) {
  if (tau < 0.0) throw std::invalid_argument("hard_threshold: tau < 0");
  const std::size_t m = Theta.dim();
  SymMatrix out = Theta;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::fabs(Theta(i, j)) < tau) out.set(i, j, 0.0);
  return out;
}

double gaussian_loglik(const SymMatrix& Theta, const SymMatrix& S,
                       std::size_t n) {
  return 0.5 * static_cast<double>(n) *
         (log_det_pd(Theta) - trace_product(S, Theta));
}

namespace {

std::size_t count_edges(const SymMatrix& Theta) {
  std::size_t e = 0;
  const std::size_t m = Theta.dim();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (Theta(i, j) != 0.0) ++e;
  return e;
}

}  // namespace

double ebic_score(const SymMatrix& Theta, const SymMatrix& S, std::size_t n,
                  std::size_t m, double gamma) {
  if (n < 2 || m < 2)
    throw std::invalid_argument("ebic_score: need n >= 2 and m >= 2");
  const double e = static_cast<double>(count_edges(Theta));
  try {
    const double ll = gaussian_loglik(Theta, S, n);
    return -2.0 * ll + e * std::log(static_cast<double>(n)) +
           4.0 * e * gamma * std::log(static_cast<double>(m));
  } catch (const not_positive_definite&) {
    return std::numeric_limits<double>::infinity();
  }
}

SymMatrix fit_thresholded(const DataMatrix& patch,
                          const BaseEstimatorConfig& config,
                          BaseEstimatorDiagnostics* diag) {
  config.validate();
  const std::size_t n = patch.rows;
  const std::size_t m = patch.cols;
  if (n < 2 || m < 2)
    throw std::invalid_argument("fit_thresholded: need n >= 2 and m >= 2");

  SymMatrix S = sample_covariance(patch, config.center);

  // Constant (or identically zero) columns leave no variance to fit.
  for (std::size_t j = 0; j < m; ++j) {
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = patch(i, j);
      mean_sq += v * v;
    }
    mean_sq /= static_cast<double>(n);
    if (S(j, j) <= 1e-12 * mean_sq)
      throw degenerate_input("fit_thresholded: column " + std::to_string(j) +
                             " has zero sample variance");
  }

  if (config.standardize) {
    // Work on the correlation matrix so the uniform penalty and threshold
    // grid act on a variance-free scale.
    SymMatrix C(m);
    for (std::size_t i = 0; i < m; ++i) {
      C.set(i, i, 1.0);
      for (std::size_t j = i + 1; j < m; ++j)
        C.set(i, j, S(i, j) / std::sqrt(S(i, i) * S(j, j)));
    }
    S = std::move(C);
  }

  GlassoOptions opts = config.glasso_opts;
  opts.lambda = std::sqrt(std::log(static_cast<double>(m)) /
                          static_cast<double>(n));
  const GlassoFit fit = fit_glasso(S, opts);

  if (diag) {
    *diag = BaseEstimatorDiagnostics{};
    diag->glasso_converged = fit.converged;
  }

  const double theta_max = fit.precision.max_abs_offdiag();
  if (diag) diag->theta_max = theta_max;
  if (theta_max == 0.0) {
    if (diag) diag->edge_count = 0;
    return fit.precision;  // already edgeless, nothing to threshold
  }

  // Candidates are scored sparsest first so each refit warm-starts from
  // the previous (nested) support.
  std::vector<ThresholdCandidate> grid(
      static_cast<std::size_t>(config.grid_size));
  GlassoFit refit;
  bool have_refit = false;
  std::size_t refit_edges = 0;
  for (int g = config.grid_size; g >= 1; --g) {
    ThresholdCandidate& cand = grid[static_cast<std::size_t>(g - 1)];
    cand.tau = theta_max * static_cast<double>(g) /
               static_cast<double>(config.grid_size);
    cand.thresholded = hard_threshold(fit.precision, cand.tau);
    cand.edge_count = count_edges(cand.thresholded);
    // eBIC scores the maximized likelihood over the candidate's support
    // (covariance-selection refit), not the shrunken thresholded values.
    // Supports are nested along the grid, so an unchanged edge count means
    // an unchanged support and the previous refit carries over.
    if (!have_refit || cand.edge_count != refit_edges) {
      const GlassoFit next = fit_support_mle(S, cand.thresholded, opts,
                                             have_refit ? &refit : nullptr);
      if (!next.converged) continue;  // ebic stays +inf, candidate skipped
      refit = next;
      have_refit = true;
      refit_edges = cand.edge_count;
    }
    cand.loglik = gaussian_loglik(refit.precision, S, n);
    const double e = static_cast<double>(cand.edge_count);
    cand.ebic = -2.0 * *cand.loglik +
                e * std::log(static_cast<double>(n)) +
                4.0 * e * config.gamma * std::log(static_cast<double>(m));
  }

  // Scan from the largest threshold down so equal eBIC values resolve to
  // the sparser graph.
  int best = -1;
  for (int g = static_cast<int>(grid.size()) - 1; g >= 0; --g) {
    if (std::isinf(grid[static_cast<std::size_t>(g)].ebic)) continue;
    if (best < 0 || grid[static_cast<std::size_t>(g)].ebic <
                        grid[static_cast<std::size_t>(best)].ebic)
      best = g;
  }

  if (best < 0) {
    // No candidate could be scored (every refit diverged). Keep the densest
    // (smallest-threshold) support; its graph is the closest subgraph of
    // the glasso fit.
    if (diag) {
      diag->all_candidates_non_pd = true;
      diag->tau_star = grid.front().tau;
      diag->edge_count = grid.front().edge_count;
    }
    return grid.front().thresholded;
  }

  const ThresholdCandidate& chosen = grid[static_cast<std::size_t>(best)];
  if (diag) {
    diag->tau_star = chosen.tau;
    diag->edge_count = chosen.edge_count;
  }
  return chosen.thresholded;
}

}  // namespace mpgraph
