#pragma once

#include <vector>

#include "mpgraph/sym_matrix.hpp"

namespace mpgraph {

struct GlassoOptions {
  double lambda = 0.0;            // off-diagonal l1 penalty
  bool penalize_diagonal = false;
  double outer_tol = 1e-4;        // relative to mean |off-diag of S|
  double inner_tol = 1e-6;        // max coefficient change per lasso sweep
  int max_outer_iters = 100;
  int max_inner_iters = 1000;

  void validate() const;
};

struct GlassoFit {
  SymMatrix precision;   // Theta
  SymMatrix covariance;  // W = Theta^{-1}, maintained by the solver
  int iterations = 0;    // outer sweeps performed
  bool converged = false;
  double objective = 0.0;
  std::vector<double> objective_path;  // one entry per outer sweep
};

/// Penalized Gaussian log-likelihood
///   log det Theta - tr(S Theta) - lambda * sum_{i != j} |Theta_ij|
/// with the diagonal included in the penalty iff penalize_diagonal.
double glasso_objective(const SymMatrix& Theta, const SymMatrix& S,
                        double lambda, bool penalize_diagonal);

/// Graphical lasso solved by block coordinate ascent over columns of Theta.
/// Each column update solves an l1-penalized quadratic subproblem by
/// coordinate descent and the inverse W is maintained through exact block
/// updates, so the recorded objective never decreases across sweeps.
///
/// Convergence: mean absolute change of the off-diagonal entries of W over
/// one sweep <= outer_tol * mean |off-diagonal of S|. On hitting
/// max_outer_iters the best (last) iterate is returned with
/// converged = false.
GlassoFit fit_glasso(const SymMatrix& S, const GlassoOptions& opts);

/// Gaussian MLE constrained to a fixed edge support: maximizes
/// log det Theta - tr(S Theta) with off-diagonal entries outside the
/// support pinned to zero (covariance selection). Same column updates as
/// fit_glasso with no penalty. support(i, j) != 0 marks a free entry;
/// warm_start, when given, must be positive definite with its inverse.
GlassoFit fit_support_mle(const SymMatrix& S, const SymMatrix& support,
                          const GlassoOptions& opts,
                          const GlassoFit* warm_start = nullptr);

}  // namespace mpgraph
