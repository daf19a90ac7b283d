#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "mpgraph/common.hpp"
#include "mpgraph/glasso.hpp"
#include "mpgraph/sym_matrix.hpp"

namespace mpgraph {

struct ThresholdCandidate {
  double tau = 0.0;
  SymMatrix thresholded;
  std::size_t edge_count = 0;    // upper-triangular nonzeros
  std::optional<double> loglik;  // of the support refit; empty if it diverged
  double ebic = std::numeric_limits<double>::infinity();
};

struct BaseEstimatorConfig {
  double gamma = 0.5;       // eBIC weight
  GlassoOptions glasso_opts;  // lambda is overwritten with sqrt(log m / n)
  int grid_size = 10;
  bool center = true;       // column mean-centering of the patch
  bool standardize = true;  // run the fit on the patch correlation matrix

  void validate() const;
};

/// Per-call diagnostics surfaced to the ensemble engine.
struct BaseEstimatorDiagnostics {
  bool glasso_converged = true;
  double theta_max = 0.0;    // largest |off-diagonal| of the glasso fit
  double tau_star = 0.0;     // chosen threshold (0 when theta_max == 0)
  std::size_t edge_count = 0;
  bool all_candidates_non_pd = false;
};

/// Zeroes off-diagonal entries with |Theta_ij| < tau (strict, so entries
/// exactly at tau survive); diagonal untouched.
SymMatrix hard_threshold(const SymMatrix& Theta, double tau);

/// (n/2) (log det Theta - tr(S Theta)); additive Gaussian constants are
/// dropped since they cancel between candidates sharing n and m.
double gaussian_loglik(const SymMatrix& Theta, const SymMatrix& S,
                       std::size_t n);

/// eBIC = -2 loglik + e log n + 4 e gamma log m, where e counts the
/// upper-triangular nonzeros of Theta. +infinity when Theta is not PD.
double ebic_score(const SymMatrix& Theta, const SymMatrix& S, std::size_t n,
                  std::size_t m, double gamma);

/// Thresholded graph estimator for one minipatch: glasso at
/// lambda0 = sqrt(log m / n), hard-threshold over an even grid up to the
/// largest off-diagonal magnitude, keep the eBIC-minimizing candidate
/// (ties broken toward the larger threshold). Candidates are scored with
/// the likelihood of the support-constrained MLE refit rather than the
/// shrunken thresholded values; the returned matrix is the thresholded
/// one at the chosen level.
SymMatrix fit_thresholded(const DataMatrix& patch,
                          const BaseEstimatorConfig& config,
                          BaseEstimatorDiagnostics* diag = nullptr);

}  // namespace mpgraph
