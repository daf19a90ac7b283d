#include "mpgraph/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mpgraph {

void MPGraphConfig::validate() const {
  if (K < 1) throw std::invalid_argument("mpgraph: K must be >= 1");
  if (!(pi_thr > 0.0 && pi_thr < 1.0))
    throw std::invalid_argument("mpgraph: pi_thr must lie in (0, 1)");
  if (workers < 1) throw std::invalid_argument("mpgraph: workers must be >= 1");
  base.validate();
}

void SelectionState::merge(const SelectionState& other) {
  if (other.M_ != M_)
    throw std::invalid_argument("SelectionState::merge: dimension mismatch");
  for (std::size_t i = 0; i < s_counts_.size(); ++i) {
    s_counts_[i] += other.s_counts_[i];
    d_counts_[i] += other.d_counts_[i];
  }
  patches_done += other.patches_done;
  failed_fits += other.failed_fits;
}

ResolvedSize resolve_minipatch_size(std::size_t N, std::size_t M,
                                    std::size_t n_req, std::size_t m_req,
                                    double m_frac) {
  if (N < 2 || M < 2)
    throw std::invalid_argument("resolve_minipatch_size: need N >= 2, M >= 2");
  ResolvedSize out;
  if (m_req > 0) {
    out.m = m_req;
  } else {
    if (!(m_frac > 0.0 && m_frac <= 1.0))
      throw std::invalid_argument("resolve_minipatch_size: m_frac out of range");
    auto m = static_cast<std::size_t>(
        std::llround(m_frac * static_cast<double>(M)));
    m = std::max<std::size_t>(m, std::min<std::size_t>(M, 5));
    out.m = std::min(m, M);
  }
  if (n_req > 0) {
    out.n = n_req;
  } else {
    // default aspect ratio m/n = 0.8, n rounded up
    out.n = static_cast<std::size_t>(
        std::ceil(static_cast<double>(out.m) / 0.8));
  }
  if (out.n > N) {
    out.n = N;
    out.n_clamped = true;
  }
  out.n = std::max<std::size_t>(out.n, 2);
  return out;
}

Minipatch sample_minipatch(Rng& rng, std::size_t N, std::size_t M,
                           std::size_t n, std::size_t m, std::size_t k) {
  if (n > N || n < 1)
    throw std::invalid_argument("sample_minipatch: n out of range");
  if (m > M || m < 1)
    throw std::invalid_argument("sample_minipatch: m out of range");
  Minipatch patch;
  patch.k = k;
  // Observation indices are always drawn before node indices.
  patch.obs_idx = rng.sample_without_replacement(N, n);
  patch.node_idx = rng.sample_without_replacement(M, m);
  return patch;
}

void update_counters(SelectionState& state, const Minipatch& patch,
                     const SymMatrix& theta_tilde) {
  const std::size_t m = patch.node_idx.size();
  if (theta_tilde.dim() != m)
    throw std::invalid_argument("update_counters: dimension mismatch");
  const std::size_t M = state.M_;
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = patch.node_idx[a];
    if (i >= M) throw std::invalid_argument("update_counters: index out of range");
    for (std::size_t b = a + 1; b < m; ++b) {
      const std::size_t j = patch.node_idx[b];
      const std::size_t idx = pair_index(i, j, M);
      state.d_counts_[idx] += 1;
      if (theta_tilde(a, b) != 0.0) state.s_counts_[idx] += 1;
    }
  }
}

std::vector<double> selection_frequencies(const SelectionState& state) {
  const auto& s = state.s_counts();
  const auto& d = state.d_counts();
  std::vector<double> freq(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    freq[i] = static_cast<double>(s[i]) /
              static_cast<double>(std::max<std::uint32_t>(1, d[i]));
  return freq;
}

namespace {

struct IterationRecord {
  std::uint64_t node_digest = 0;
  std::uint32_t edge_count = 0;
  bool converged = true;
  bool failed = false;
  std::string error;
};

std::uint64_t fnv1a_indices(const std::vector<std::size_t>& idx) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t v : idx) {
    std::uint64_t x = v;
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFFULL;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

IterationRecord process_iteration(const DataMatrix& X, std::size_t n,
                                  std::size_t m, std::uint64_t master_seed,
                                  std::size_t k,
                                  const BaseEstimatorConfig& base,
                                  SelectionState& local) {
  IterationRecord rec;
  Rng rng(mix_seed(master_seed, k));
  const Minipatch patch = sample_minipatch(rng, X.rows, X.cols, n, m, k);

  DataMatrix sub(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &X.values[patch.obs_idx[i] * X.cols];
    for (std::size_t j = 0; j < m; ++j) sub(i, j) = row[patch.node_idx[j]];
  }

  BaseEstimatorDiagnostics diag;
  const SymMatrix theta_tilde = fit_thresholded(sub, base, &diag);
  update_counters(local, patch, theta_tilde);
  local.patches_done += 1;
  if (!diag.glasso_converged) local.failed_fits += 1;

  rec.node_digest = fnv1a_indices(patch.node_idx);
  rec.edge_count = static_cast<std::uint32_t>(diag.edge_count);
  rec.converged = diag.glasso_converged;
  return rec;
}

void write_iteration_log(const std::string& path,
                         const std::vector<IterationRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open iteration log: " + path);
  out << "k\tnodes_digest\tedge_count\tconverged\n";
  char buf[96];
  for (std::size_t k = 0; k < records.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu\t%016llx\t%u\t%d\n", k,
                  static_cast<unsigned long long>(records[k].node_digest),
                  records[k].edge_count, records[k].converged ? 1 : 0);
    out << buf;
  }
}

MPGraphResult run_engine(const DataMatrix& X, const MPGraphConfig& config,
                         bool allow_parallel) {
  config.validate();
  const std::size_t N = X.rows;
  const std::size_t M = X.cols;
  if (N < 2 || M < 2)
    throw std::invalid_argument("run_mpgraph: data must be at least 2x2");
  for (std::size_t i = 0; i < X.values.size(); ++i) {
    if (!std::isfinite(X.values[i]))
      throw std::invalid_argument(
          "run_mpgraph: non-finite value at row " +
          std::to_string(i / M + 1) + ", column " + std::to_string(i % M + 1));
  }

  MPGraphConfig resolved = config;
  if (resolved.n == 0 || resolved.m == 0) {
    const ResolvedSize size =
        resolve_minipatch_size(N, M, resolved.n, resolved.m);
    resolved.n = size.n;
    resolved.m = size.m;
  }
  if (resolved.n > N)
    throw std::invalid_argument("run_mpgraph: n exceeds observation count");
  if (resolved.m > M)
    throw std::invalid_argument("run_mpgraph: m exceeds node count");
  if (resolved.n < 2 || resolved.m < 2)
    throw std::invalid_argument(
        "run_mpgraph: minipatches need n >= 2 and m >= 2");

  const std::size_t K = resolved.K;
  std::vector<IterationRecord> records(K);
  SelectionState state(M);

  int workers = resolved.workers;
#ifndef _OPENMP
  workers = 1;
#endif
  if (!allow_parallel) workers = 1;

  if (workers > 1) {
#ifdef _OPENMP
    std::vector<SelectionState> parts(static_cast<std::size_t>(workers),
                                      SelectionState(M));
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long kk = 0; kk < static_cast<long long>(K); ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      auto& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
      try {
        records[k] = process_iteration(X, resolved.n, resolved.m,
                                       resolved.master_seed, k, resolved.base,
                                       local);
      } catch (const std::exception& e) {
        records[k].failed = true;
        records[k].error = e.what();
      }
    }
    for (const auto& part : parts) state.merge(part);
#endif
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      try {
        records[k] = process_iteration(X, resolved.n, resolved.m,
                                       resolved.master_seed, k, resolved.base,
                                       state);
      } catch (const std::exception& e) {
        records[k].failed = true;
        records[k].error = e.what();
      }
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    if (records[k].failed)
      throw std::runtime_error("run_mpgraph: iteration " + std::to_string(k) +
                               " failed: " + records[k].error);
  }

  MPGraphResult result;
  result.M = M;
  result.config = resolved;
  result.frequencies = selection_frequencies(state);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j)
      if (result.frequencies[pair_index(i, j, M)] >= resolved.pi_thr)
        result.stable_edges.emplace_back(i, j);
  result.state = std::move(state);

  if (!resolved.log_path.empty()) write_iteration_log(resolved.log_path, records);
  return result;
}

}  // namespace

MPGraphResult run_mpgraph(const DataMatrix& X, const MPGraphConfig& config) {
  return run_engine(X, config, true);
}

MPGraphResult run_mpgraph_serial(const DataMatrix& X,
                                 const MPGraphConfig& config) {
  return run_engine(X, config, false);
}

CoverageReport coverage_diagnostics(const MPGraphConfig& config, std::size_t M,
                                    double floor) {
  CoverageReport report;
  report.floor = floor;
  std::size_t m = config.m;
  if (m == 0 && M >= 2) m = resolve_minipatch_size(M, M, 0, 0).m;
  if (M >= 2 && m >= 2) {
    report.expected_per_pair =
        static_cast<double>(config.K) * static_cast<double>(m) *
        static_cast<double>(m - 1) /
        (static_cast<double>(M) * static_cast<double>(M - 1));
  }
  report.warn = report.expected_per_pair < floor;
  return report;
}

}  // namespace mpgraph
