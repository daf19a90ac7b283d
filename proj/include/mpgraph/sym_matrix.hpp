#pragma once

#include <cstddef>
#include <vector>

#include "mpgraph/common.hpp"

namespace mpgraph {

/// Dense symmetric matrix. Full square storage, row-major; the lower
/// triangle is authoritative and mirrored into the upper triangle on
/// construction and through set().
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  }

  /// Adopts a full dim*dim row-major buffer, symmetrizing from the lower
  /// triangle.
  static SymMatrix from_lower(std::size_t dim, std::vector<double> full);

  static SymMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * dim_ + j];
  }

  /// Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  double max_abs() const;
  double max_abs_offdiag() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Sample covariance (1/n) X^T X of an n-by-m patch, optionally column
/// mean-centered first. MLE denominator n.
SymMatrix sample_covariance(const DataMatrix& patch, bool center);

/// Lower Cholesky factor L with L L^T = A. Throws not_positive_definite
/// iff a pivot <= 0 is encountered. Returned buffer is dim*dim row-major
/// with zeros above the diagonal.
std::vector<double> cholesky(const SymMatrix& A);

/// log det A for positive definite A, computed as 2 sum_i log L_ii.
double log_det_pd(const SymMatrix& A);

/// Inverse of a positive definite matrix via its Cholesky factor.
SymMatrix invert_pd(const SymMatrix& A);

/// Smallest eigenvalue of a symmetric matrix to absolute tolerance tol.
/// Householder tridiagonalization followed by Sturm-sequence bisection.
double min_eigenvalue(const SymMatrix& A, double tol = 1e-6);

/// True iff cholesky(A) succeeds.
bool is_positive_definite(const SymMatrix& A);

/// tr(A * B) for symmetric A, B of equal dimension.
double trace_product(const SymMatrix& A, const SymMatrix& B);

}  // namespace mpgraph
