#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpgraph/common.hpp"
#include "mpgraph/rng.hpp"
#include "mpgraph/sym_matrix.hpp"
#include "mpgraph/tglasso.hpp"

namespace mpgraph {

struct MPGraphConfig {
  std::size_t n = 0;   // observations per minipatch; 0 = derive from m
  std::size_t m = 0;   // nodes per minipatch; 0 = derive from the node count
  std::size_t K = 1000;
  double pi_thr = 0.5;
  BaseEstimatorConfig base;
  std::uint64_t master_seed = 1;
  int workers = 1;
  std::string log_path;  // optional per-iteration log (TSV), empty = off

  void validate() const;
};

struct Minipatch {
  std::vector<std::size_t> obs_idx;   // sorted, distinct, < N
  std::vector<std::size_t> node_idx;  // sorted, distinct, < M
  std::size_t k = 0;                  // iteration index, 0-based
};

/// Upper-triangular edge-selection (s) and co-sampling (d) counters over
/// all unordered node pairs.
class SelectionState {
 public:
  SelectionState() = default;
  explicit SelectionState(std::size_t M)
      : M_(M), s_counts_(pair_count(M), 0), d_counts_(pair_count(M), 0) {}

  std::size_t node_count() const { return M_; }
  std::uint32_t s(std::size_t i, std::size_t j) const {
    return s_counts_[pair_index(i, j, M_)];
  }
  std::uint32_t d(std::size_t i, std::size_t j) const {
    return d_counts_[pair_index(i, j, M_)];
  }
  const std::vector<std::uint32_t>& s_counts() const { return s_counts_; }
  const std::vector<std::uint32_t>& d_counts() const { return d_counts_; }

  std::size_t patches_done = 0;
  std::size_t failed_fits = 0;

  /// Entry-wise addition; merging per-worker states is order-free.
  void merge(const SelectionState& other);

  friend void update_counters(SelectionState& state, const Minipatch& patch,
                              const SymMatrix& theta_tilde);

 private:
  std::size_t M_ = 0;
  std::vector<std::uint32_t> s_counts_;
  std::vector<std::uint32_t> d_counts_;
};

struct MPGraphResult {
  std::size_t M = 0;
  std::vector<double> frequencies;  // upper-triangular, pair_index layout
  EdgeSet stable_edges;             // 0-based pairs, sorted
  MPGraphConfig config;             // with n and m resolved
  SelectionState state;

  double frequency(std::size_t i, std::size_t j) const {
    return frequencies[pair_index(i, j, M)];
  }
};

struct ResolvedSize {
  std::size_t n = 0;
  std::size_t m = 0;
  bool n_clamped = false;  // requested/derived n exceeded N
};

/// Default sizing: m = round(m_frac * M) floored at min(M, 5), n = ceil(m / 0.8);
/// explicit values pass through. n is clamped to N with a flag. The library
/// default node fraction is 0.10, the top of the recommended 5-10% band:
/// at K = 1000 it keeps the expected pair co-sampling count near the
/// coverage_diagnostics floor, where selection frequencies are meaningful.
ResolvedSize resolve_minipatch_size(std::size_t N, std::size_t M,
                                    std::size_t n_req, std::size_t m_req,
                                    double m_frac = 0.10);

/// Uniform without-replacement draw of n observation and m node indices
/// from the supplied stream.
Minipatch sample_minipatch(Rng& rng, std::size_t N, std::size_t M,
                           std::size_t n, std::size_t m, std::size_t k);

/// d(i,j) += 1 for every pair in the patch; s(i,j) += 1 where the
/// thresholded estimate carries an edge.
void update_counters(SelectionState& state, const Minipatch& patch,
                     const SymMatrix& theta_tilde);

/// Entry-wise s / max(1, d); never co-sampled pairs map to 0.
std::vector<double> selection_frequencies(const SelectionState& state);

/// Full ensemble: K iterations of sample -> base estimator -> counter
/// update, OpenMP-parallel over iterations when config.workers > 1.
/// Per-iteration RNG streams derive from (master_seed, k), so results are
/// identical for any worker count.
MPGraphResult run_mpgraph(const DataMatrix& X, const MPGraphConfig& config);

/// Single-threaded reference loop; kept as the comparison baseline for the
/// parallel engine in tests and benchmarks.
MPGraphResult run_mpgraph_serial(const DataMatrix& X,
                                 const MPGraphConfig& config);

struct CoverageReport {
  double expected_per_pair = 0.0;  // E[R_ij] = K * m(m-1) / (M(M-1))
  double floor = 0.0;
  bool warn = false;
};

/// Pre-run estimate of how often each node pair will be co-sampled; low
/// values mean poorly supported selection frequencies.
CoverageReport coverage_diagnostics(const MPGraphConfig& config, std::size_t M,
                                    double floor = 10.0);

}  // namespace mpgraph
