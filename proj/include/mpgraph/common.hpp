#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpgraph {

/// Raised when a Cholesky pivot is non-positive, i.e. the input matrix is
/// not positive definite.
class not_positive_definite : public std::runtime_error {
 public:
  explicit not_positive_definite(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised when an iterative kernel fails to meet its tolerance contract.
class numerical_failure : public std::runtime_error {
 public:
  explicit numerical_failure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised for inputs that are structurally unusable (e.g. constant columns
/// whose sample variance vanishes).
class degenerate_input : public std::runtime_error {
 public:
  explicit degenerate_input(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised by file readers; carries a human-readable location.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major observation matrix, rows = samples, columns = nodes.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // rows * cols, row-major

  DataMatrix() = default;
  DataMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0.0) {}

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * cols + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values[i * cols + j];
  }
};

/// Unordered node pair normalized to i < j, 0-based.
using Edge = std::pair<std::size_t, std::size_t>;
using EdgeSet = std::vector<Edge>;

/// Number of unordered pairs over M nodes.
inline std::size_t pair_count(std::size_t M) { return M * (M - 1) / 2; }

/// Linear index of pair (i, j), i < j, into an upper-triangular array
/// laid out row by row: (0,1), (0,2), ..., (0,M-1), (1,2), ...
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t M) {
  return i * (2 * M - i - 1) / 2 + (j - i - 1);
}

}  // namespace mpgraph
