#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpgraph/common.hpp"
#include "mpgraph/engine.hpp"
#include "mpgraph/synth.hpp"

namespace mpgraph {

/// Pair-level confusion counts over the C(M,2) candidate edges.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

struct MetricReport {
  double tpr = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t selected_count = 0;
  double runtime_seconds = 0.0;
};

Confusion confusion(const EdgeSet& estimated, const EdgeSet& truth,
                    std::size_t M);

/// Degenerate denominators (nothing selected, no true edges) map to 0.
MetricReport metrics(const Confusion& c);

bool exact_recovery(const EdgeSet& estimated, const EdgeSet& truth);

struct RecoveryCell {
  Scenario scenario = Scenario::Chain;
  std::size_t M = 0;
  std::size_t N = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double recovery_rate = 0.0;
  bool failed = false;  // every trial in the cell failed
  std::string error;
};

struct RecoveryCurveOptions {
  MPGraphConfig engine;   // n == 0 / m == 0 resolve per cell
  double n_frac = 0.0;    // when > 0 and engine.n == 0: n grows with N,
                          // n = max(ceil(m / 0.8), round(n_frac * N))
  int cell_workers = 1;   // parallelism across (cell, trial) units
};

/// Exact-recovery rate per (M, N) grid cell, averaged over seeded trials.
/// Trial seeds derive from (engine.master_seed, cell, trial), so the table
/// is independent of scheduling.
std::vector<RecoveryCell> recovery_curve(Scenario scenario,
                                         const std::vector<std::size_t>& M_values,
                                         const std::vector<std::size_t>& N_values,
                                         std::size_t trials,
                                         const RecoveryCurveOptions& options);

}  // namespace mpgraph
