#include "mpgraph/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpgraph {

SymMatrix SymMatrix::from_lower(std::size_t dim, std::vector<double> full) {
  if (dim == 0) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  if (full.size() != dim * dim)
    throw std::invalid_argument("SymMatrix: buffer size mismatch");
  SymMatrix out(dim);
  out.data_ = std::move(full);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      out.data_[i * dim + j] = out.data_[j * dim + i];
  return out;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) out.data_[i * dim + i] = 1.0;
  return out;
}

double SymMatrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::fabs(v));
  return best;
}

double SymMatrix::max_abs_offdiag() const {
  double best = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      best = std::max(best, std::fabs(data_[i * dim_ + j]));
  return best;
}

SymMatrix sample_covariance(const DataMatrix& patch, bool center) {
  const std::size_t n = patch.rows;
  const std::size_t m = patch.cols;
  if (n < 2 || m < 1)
    throw std::invalid_argument("sample_covariance: need n >= 2 and m >= 1");

  std::vector<double> work(patch.values);
  if (center) {
    for (std::size_t j = 0; j < m; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += work[i * m + j];
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) work[i * m + j] -= mean;
    }
  }

  SymMatrix S(m);
  double* s = S.data();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += work[i * m + a] * work[i * m + b];
      acc /= static_cast<double>(n);
      s[a * m + b] = acc;
      s[b * m + a] = acc;
    }
  }
  return S;
}

std::vector<double> cholesky(const SymMatrix& A) {
  const std::size_t m = A.dim();
  std::vector<double> L(m * m, 0.0);
  const double* a = A.data();
  for (std::size_t j = 0; j < m; ++j) {
    double diag = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) diag -= L[j * m + k] * L[j * m + k];
    if (!(diag > 0.0))
      throw not_positive_definite("cholesky: pivot <= 0 at index " +
                                  std::to_string(j));
    const double ljj = std::sqrt(diag);
    L[j * m + j] = ljj;
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= L[i * m + k] * L[j * m + k];
      L[i * m + j] = v / ljj;
    }
  }
  return L;
}

bool is_positive_definite(const SymMatrix& A) {
  try {
    cholesky(A);
    return true;
  } catch (const not_positive_definite&) {
    return false;
  }
}

double log_det_pd(const SymMatrix& A) {
  const std::size_t m = A.dim();
  const std::vector<double> L = cholesky(A);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += std::log(L[i * m + i]);
  return 2.0 * acc;
}

SymMatrix invert_pd(const SymMatrix& A) {
  const std::size_t m = A.dim();
  std::vector<double> L = cholesky(A);

  // Invert L in place (forward substitution on the identity).
  std::vector<double> Linv(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    Linv[j * m + j] = 1.0 / L[j * m + j];
    for (std::size_t i = j + 1; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t k = j; k < i; ++k) acc += L[i * m + k] * Linv[k * m + j];
      Linv[i * m + j] = -acc / L[i * m + i];
    }
  }

  // A^{-1} = L^{-T} L^{-1}; only the lower triangle is accumulated.
  SymMatrix out(m);
  double* o = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::size_t k = i; k < m; ++k)
        acc += Linv[k * m + i] * Linv[k * m + j];
      o[i * m + j] = acc;
      o[j * m + i] = acc;
    }
  }
  return out;
}

namespace {

// Count of eigenvalues of the tridiagonal matrix (diag d, off-diag e)
// strictly less than x, via the Sturm sequence of leading minors.
std::size_t sturm_count(const std::vector<double>& d,
                        const std::vector<double>& e, double x) {
  const std::size_t m = d.size();
  std::size_t count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < m; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double min_eigenvalue(const SymMatrix& A, double tol) {
  const std::size_t m = A.dim();
  if (!(tol > 0.0)) throw std::invalid_argument("min_eigenvalue: tol <= 0");
  if (m == 1) return A(0, 0);

  // Householder reduction to symmetric tridiagonal form.
  std::vector<double> B(A.data(), A.data() + m * m);
  std::vector<double> d(m), e(m - 1);
  for (std::size_t k = 0; k + 2 <= m; ++k) {
    // Annihilate column k below the first subdiagonal.
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) norm2 += B[i * m + k] * B[i * m + k];
    const double alpha_sq = norm2;
    if (alpha_sq <= 0.0) continue;
    double alpha = std::sqrt(alpha_sq);
    if (B[(k + 1) * m + k] > 0.0) alpha = -alpha;

    std::vector<double> v(m, 0.0);
    v[k + 1] = B[(k + 1) * m + k] - alpha;
    for (std::size_t i = k + 2; i < m; ++i) v[i] = B[i * m + k];
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 <= 0.0) continue;

    // B <- H B H with H = I - 2 v v^T / (v^T v)
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = k + 1; j < m; ++j) acc += B[i * m + j] * v[j];
      w[i] = 2.0 * acc / vnorm2;
    }
    double kappa = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) kappa += v[i] * w[i];
    kappa /= vnorm2;
    for (std::size_t i = k + 1; i < m; ++i) w[i] -= kappa * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        B[i * m + j] -= v[i] * w[j] + w[i] * v[j];
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) d[i] = B[i * m + i];
  for (std::size_t i = 0; i + 1 < m; ++i) e[i] = B[(i + 1) * m + i];

  // Gershgorin bracket, then bisect for the smallest eigenvalue.
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < m; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(e[i - 1]);
    if (i + 1 < m) radius += std::fabs(e[i]);
    lo = std::min(lo, d[i] - radius);
    hi = std::max(hi, d[i] + radius);
  }

  const int max_iters = 200;
  int iter = 0;
  while (hi - lo > tol) {
    if (++iter > max_iters)
      throw numerical_failure("min_eigenvalue: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) >= 1)
      hi = mid;  // at least one eigenvalue below mid
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double trace_product(const SymMatrix& A, const SymMatrix& B) {
  const std::size_t m = A.dim();
  if (B.dim() != m)
    throw std::invalid_argument("trace_product: dimension mismatch");
  const double* a = A.data();
  const double* b = B.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < m * m; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace mpgraph
