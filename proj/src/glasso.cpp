#include "mpgraph/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpgraph {

void GlassoOptions::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("glasso: lambda < 0");
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0))
    throw std::invalid_argument("glasso: tolerances must be positive");
  if (max_outer_iters < 1 || max_inner_iters < 1)
    throw std::invalid_argument("glasso: iteration caps must be >= 1");
}

double glasso_objective(const SymMatrix& Theta, const SymMatrix& S,
                        double lambda, bool penalize_diagonal) {
  const std::size_t m = Theta.dim();
  if (S.dim() != m)
    throw std::invalid_argument("glasso_objective: dimension mismatch");
  double penalty = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j)
      penalty += 2.0 * std::fabs(Theta(i, j));
    if (penalize_diagonal) penalty += std::fabs(Theta(i, i));
  }
  return log_det_pd(Theta) - trace_product(S, Theta) - lambda * penalty;
}

namespace {

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Shared column block-coordinate core for the penalized problem
// (support == nullptr) and the support-constrained MLE (lambda == 0,
// support marks the free off-diagonal entries).
GlassoFit run_column_bcd(const SymMatrix& S, const GlassoOptions& opts,
                         const SymMatrix* support, const GlassoFit* warm) {
  const std::size_t m = S.dim();
  const double lambda = opts.lambda;
  const double lambda_diag = opts.penalize_diagonal ? lambda : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (S(i, i) < 0.0)
      throw std::invalid_argument("glasso: covariance diagonal must be >= 0");
    if (!(S(i, i) + lambda_diag > 0.0) || !(S(i, i) + lambda > 0.0))
      throw degenerate_input("glasso: zero-variance node " + std::to_string(i));
  }

  GlassoFit fit;
  if (m == 1) {
    const double theta = 1.0 / (S(0, 0) + lambda_diag);
    fit.precision = SymMatrix(1);
    fit.covariance = SymMatrix(1);
    fit.precision.set(0, 0, theta);
    fit.covariance.set(0, 0, 1.0 / theta);
    fit.converged = true;
    fit.objective =
        glasso_objective(fit.precision, S, lambda, opts.penalize_diagonal);
    fit.objective_path.push_back(fit.objective);
    return fit;
  }

  if (warm) {
    fit.precision = warm->precision;
    fit.covariance = warm->covariance;
  } else {
    // Cold start: Theta = diag(S + lambda I)^{-1}, W its exact inverse.
    fit.precision = SymMatrix(m);
    fit.covariance = SymMatrix(m);
    for (std::size_t i = 0; i < m; ++i) {
      fit.precision.set(i, i, 1.0 / (S(i, i) + lambda));
      fit.covariance.set(i, i, S(i, i) + lambda);
    }
  }

  SymMatrix& Theta = fit.precision;
  SymMatrix& W = fit.covariance;

  // Convergence scale: mean |off-diagonal of S|.
  double s_offdiag_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      s_offdiag_mean += std::fabs(S(i, j));
  s_offdiag_mean /= static_cast<double>(pair_count(m));
  const double w_change_thr = opts.outer_tol * s_offdiag_mean;

  const std::size_t r = m - 1;
  std::vector<std::size_t> rest(r);
  std::vector<double> B(r * r);   // (Theta_11)^{-1} for the current column
  std::vector<double> alpha(r);
  std::vector<double> resid(r);   // B * alpha
  std::vector<double> s12(r);
  std::vector<char> free_entry(r, 1);
  std::vector<double> w_prev(m * m);
  std::vector<double> th_prev(m * m);

  const double* s = S.data();
  double* th = Theta.data();
  double* w = W.data();
  bool blew_up = false;

  for (int sweep = 1; sweep <= opts.max_outer_iters && !blew_up; ++sweep) {
    std::copy(w, w + m * m, w_prev.begin());
    std::copy(th, th + m * m, th_prev.begin());

    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t a = 0, p = 0; a < m; ++a)
        if (a != j) rest[p++] = a;

      // B = W_11 - w_12 w_12^T / w_22  (block inverse identity).
      const double wjj = w[j * m + j];
      for (std::size_t a = 0; a < r; ++a) {
        const std::size_t ia = rest[a];
        const double wia_j = w[ia * m + j];
        for (std::size_t b = 0; b <= a; ++b) {
          const std::size_t ib = rest[b];
          const double v = w[ia * m + ib] - wia_j * w[ib * m + j] / wjj;
          B[a * r + b] = v;
          B[b * r + a] = v;
        }
        s12[a] = s[ia * m + j];
        alpha[a] = th[ia * m + j];
        if (support) free_entry[a] = (*support)(ia, j) != 0.0 ? 1 : 0;
      }

      const double c = s[j * m + j] + lambda_diag;  // curvature scale, > 0

      for (std::size_t a = 0; a < r; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < r; ++b) acc += B[a * r + b] * alpha[b];
        resid[a] = acc;
      }

      // Coordinate descent on
      //   (c/2) a^T B a + s12^T a + lambda ||a||_1
      // over the free coordinates, warm-started at the current column so
      // the full objective is monotone regardless of the stopping point.
      for (int inner = 0; inner < opts.max_inner_iters; ++inner) {
        double max_delta = 0.0;
        for (std::size_t a = 0; a < r; ++a) {
          if (support && !free_entry[a]) continue;
          const double baa = B[a * r + a];
          if (!(baa > 0.0)) continue;
          const double old = alpha[a];
          const double rho = resid[a] - baa * old;
          const double next =
              soft_threshold(-(c * rho + s12[a]), lambda) / (c * baa);
          const double delta = next - old;
          if (delta != 0.0) {
            alpha[a] = next;
            for (std::size_t b = 0; b < r; ++b)
              resid[b] += B[b * r + a] * delta;
            max_delta = std::max(max_delta, std::fabs(delta));
          }
        }
        if (max_delta <= opts.inner_tol) break;
      }

      // Refresh resid = B alpha exactly before it feeds the W update.
      for (std::size_t a = 0; a < r; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < r; ++b) acc += B[a * r + b] * alpha[b];
        resid[a] = acc;
      }

      // New column of Theta; the Schur complement is t = 1/c.
      double quad = 0.0;
      for (std::size_t a = 0; a < r; ++a) quad += alpha[a] * resid[a];
      const double t = 1.0 / c;
      th[j * m + j] = t + quad;
      for (std::size_t a = 0; a < r; ++a) {
        th[rest[a] * m + j] = alpha[a];
        th[j * m + rest[a]] = alpha[a];
      }

      // Restore W = Theta^{-1} through the same block identity:
      // w_22 = c, w_12 = -c B alpha, W_11 = B + c (B alpha)(B alpha)^T.
      w[j * m + j] = c;
      for (std::size_t a = 0; a < r; ++a) {
        const double v = -c * resid[a];
        w[rest[a] * m + j] = v;
        w[j * m + rest[a]] = v;
      }
      for (std::size_t a = 0; a < r; ++a) {
        const std::size_t ia = rest[a];
        for (std::size_t b = 0; b <= a; ++b) {
          const std::size_t ib = rest[b];
          const double v = B[a * r + b] + c * resid[a] * resid[b];
          w[ia * m + ib] = v;
          w[ib * m + ia] = v;
        }
      }

      // An unbounded constrained MLE (singular restricted covariance)
      // shows up as the diagonal running away.
      if (th[j * m + j] > 1e12) {
        blew_up = true;
        break;
      }
    }
    if (blew_up) break;

    fit.iterations = sweep;
    fit.objective_path.push_back(
        glasso_objective(Theta, S, lambda, opts.penalize_diagonal));

    // Column stationarity pins active off-diagonal W entries to S +- lambda
    // right away, so the W-based change alone can read as zero while Theta
    // is still moving; track both and require both to settle.
    double w_change = 0.0, th_change = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j2 = i + 1; j2 < m; ++j2) {
        w_change += std::fabs(w[i * m + j2] - w_prev[i * m + j2]);
        th_change += std::fabs(th[i * m + j2] - th_prev[i * m + j2]);
      }
    const auto pairs = static_cast<double>(pair_count(m));
    if (std::max(w_change, th_change) / pairs <= w_change_thr) {
      fit.converged = true;
      break;
    }
  }

  if (blew_up) fit.converged = false;
  if (fit.objective_path.empty())
    fit.objective_path.push_back(
        glasso_objective(Theta, S, lambda, opts.penalize_diagonal));
  fit.objective = fit.objective_path.back();
  return fit;
}

}  // namespace

GlassoFit fit_glasso(const SymMatrix& S, const GlassoOptions& opts) {
  opts.validate();
  return run_column_bcd(S, opts, nullptr, nullptr);
}

GlassoFit fit_support_mle(const SymMatrix& S, const SymMatrix& support,
                          const GlassoOptions& opts,
                          const GlassoFit* warm_start) {
  opts.validate();
  if (support.dim() != S.dim())
    throw std::invalid_argument("fit_support_mle: dimension mismatch");
  GlassoOptions mle_opts = opts;
  mle_opts.lambda = 0.0;
  mle_opts.penalize_diagonal = false;
  return run_column_bcd(S, mle_opts, &support, warm_start);
}

}  // namespace mpgraph
