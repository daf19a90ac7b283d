#include "mpgraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpgraph {

namespace {

void check_edges(const EdgeSet& edges, std::size_t M) {
  for (const auto& [i, j] : edges) {
    if (i >= j || j >= M)
      throw std::invalid_argument("confusion: pair out of range or not i < j");
  }
}

}  // namespace

Confusion confusion(const EdgeSet& estimated, const EdgeSet& truth,
                    std::size_t M) {
  check_edges(estimated, M);
  check_edges(truth, M);

  EdgeSet est = estimated;
  EdgeSet tru = truth;
  std::sort(est.begin(), est.end());
  std::sort(tru.begin(), tru.end());

  EdgeSet both;
  std::set_intersection(est.begin(), est.end(), tru.begin(), tru.end(),
                        std::back_inserter(both));

  Confusion c;
  c.tp = both.size();
  c.fp = est.size() - both.size();
  c.fn = tru.size() - both.size();
  c.tn = pair_count(M) - c.tp - c.fp - c.fn;
  return c;
}

MetricReport metrics(const Confusion& c) {
  MetricReport r;
  r.selected_count = c.tp + c.fp;
  const double tp = static_cast<double>(c.tp);
  r.tpr = (c.tp + c.fn) > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
  r.precision = (c.tp + c.fp) > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
  const double denom = r.precision + r.tpr;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.tpr / denom : 0.0;
  return r;
}

bool exact_recovery(const EdgeSet& estimated, const EdgeSet& truth) {
  EdgeSet est = estimated;
  EdgeSet tru = truth;
  std::sort(est.begin(), est.end());
  std::sort(tru.begin(), tru.end());
  return est == tru;
}

std::vector<RecoveryCell> recovery_curve(
    Scenario scenario, const std::vector<std::size_t>& M_values,
    const std::vector<std::size_t>& N_values, std::size_t trials,
    const RecoveryCurveOptions& options) {
  if (trials < 1)
    throw std::invalid_argument("recovery_curve: trials must be >= 1");

  const std::size_t n_cells = M_values.size() * N_values.size();
  std::vector<RecoveryCell> cells(n_cells);
  std::vector<std::uint8_t> recovered(n_cells * trials, 0);
  std::vector<std::uint8_t> failed(n_cells * trials, 0);
  std::vector<std::string> unit_error(n_cells * trials);

  const auto total = static_cast<long long>(n_cells * trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(options.cell_workers) \
    if (options.cell_workers > 1)
#endif
  for (long long unit = 0; unit < total; ++unit) {
    const auto cell = static_cast<std::size_t>(unit) / trials;
    const auto trial = static_cast<std::size_t>(unit) % trials;
    const std::size_t M = M_values[cell / N_values.size()];
    const std::size_t N = N_values[cell % N_values.size()];

    const std::uint64_t base = mix_seed(options.engine.master_seed, cell);
    const std::uint64_t trial_base = mix_seed(base, trial);

    try {
      MPGraphConfig cfg = options.engine;
      cfg.workers = 1;  // parallelism lives at the (cell, trial) level
      cfg.master_seed = mix_seed(trial_base, 2);
      if (cfg.m == 0) cfg.m = resolve_minipatch_size(std::max<std::size_t>(N, 2), M, 0, 0).m;
      if (cfg.n == 0) {
        std::size_t n = static_cast<std::size_t>(
            std::ceil(static_cast<double>(cfg.m) / 0.8));
        if (options.n_frac > 0.0)
          n = std::max(n, static_cast<std::size_t>(std::llround(
                              options.n_frac * static_cast<double>(N))));
        cfg.n = n;  // deliberately not clamped; undersized N must fail
      }

      GroundTruthModel model = make_model(scenario, M, mix_seed(trial_base, 0));
      Rng data_rng(mix_seed(trial_base, 1));
      const DataMatrix X = sample_gaussian(model, N, data_rng);

      const MPGraphResult result = run_mpgraph(X, cfg);
      recovered[unit] =
          exact_recovery(result.stable_edges, model.edges) ? 1 : 0;
    } catch (const std::exception& e) {
      failed[unit] = 1;
      unit_error[unit] = e.what();
    }
  }

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    RecoveryCell& out = cells[cell];
    out.scenario = scenario;
    out.M = M_values[cell / N_values.size()];
    out.N = N_values[cell % N_values.size()];
    out.trials = trials;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      hits += recovered[cell * trials + t];
      out.failures += failed[cell * trials + t];
      if (out.error.empty() && failed[cell * trials + t])
        out.error = unit_error[cell * trials + t];
    }
    out.recovery_rate = static_cast<double>(hits) / static_cast<double>(trials);
    out.failed = out.failures == trials;
  }
  return cells;
}

}  // namespace mpgraph
