// mpgraph: command-line front end for minipatch graphical model selection.
//
// Subcommands:
//   fit        estimate a stable edge set from an observation matrix
//   simulate   generate synthetic ground-truth models and Gaussian data
//   benchmark  simulate -> fit -> evaluate in one pass

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpgraph/engine.hpp"
#include "mpgraph/eval.hpp"
#include "mpgraph/io.hpp"
#include "mpgraph/synth.hpp"
#include "mpgraph/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace mpgraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void write_manifest(const fs::path& dir, const ordered_json& manifest) {
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out)
    throw parse_error("cannot write manifest: " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

struct FitArgs {
  std::string input;
  std::string format = "csv";
  std::size_t n = 0;
  std::size_t m = 0;
  double m_frac = 0.05;
  double pi_thr = 0.5;
  std::size_t K = 1000;
  double gamma = 0.5;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = ".";
  bool emit_frequencies = false;
  bool no_center = false;
};

int run_fit(const FitArgs& args) {
  Timer timer;
  const DataMatrix X = read_matrix(args.input,
                                   matrix_format_from_name(args.format));
  if (X.rows < 2 || X.cols < 2)
    throw std::invalid_argument("input matrix must be at least 2x2");

  const ResolvedSize size =
      resolve_minipatch_size(X.rows, X.cols, args.n, args.m, args.m_frac);
  if (size.n_clamped)
    std::cerr << "warning: n clamped to the " << X.rows
              << " available observations\n";

  MPGraphConfig config;
  config.n = size.n;
  config.m = size.m;
  config.K = args.K;
  config.pi_thr = args.pi_thr;
  config.base.gamma = args.gamma;
  config.base.center = !args.no_center;
  config.master_seed = args.seed;
  config.workers = args.workers;

  const CoverageReport coverage = coverage_diagnostics(config, X.cols);
  if (coverage.warn)
    std::cerr << "warning: expected pair co-sampling count "
              << coverage.expected_per_pair << " is below " << coverage.floor
              << "; selection frequencies will be noisy (raise --m-frac, --m "
                 "or --K)\n";

  const MPGraphResult result = run_mpgraph(X, config);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  std::vector<double> freq_values;
  freq_values.reserve(result.stable_edges.size());
  for (const auto& [i, j] : result.stable_edges)
    freq_values.push_back(result.frequency(i, j));
  write_edge_list((out_dir / "stable_edges.tsv").string(),
                  result.stable_edges, freq_values);

  if (args.emit_frequencies) {
    DataMatrix F(X.cols, X.cols);
    for (std::size_t i = 0; i < X.cols; ++i)
      for (std::size_t j = i + 1; j < X.cols; ++j) {
        F(i, j) = result.frequency(i, j);
        F(j, i) = F(i, j);
      }
    write_f64bin_matrix((out_dir / "frequencies.f64bin").string(), F);
  }

  ordered_json manifest;
  manifest["command"] = "fit";
  manifest["version"] = kVersion;
  manifest["master_seed"] = args.seed;
  manifest["config"] = {{"input", args.input},
                        {"format", args.format},
                        {"N", X.rows},
                        {"M", X.cols},
                        {"n", result.config.n},
                        {"m", result.config.m},
                        {"m_frac", args.m_frac},
                        {"K", args.K},
                        {"pi_thr", args.pi_thr},
                        {"gamma", args.gamma},
                        {"center", !args.no_center},
                        {"workers", args.workers},
                        {"emit_frequencies", args.emit_frequencies}};
  manifest["inputs"] = {{args.input, file_digest(args.input)}};
  ordered_json outputs = ordered_json::array({"stable_edges.tsv"});
  if (args.emit_frequencies) outputs.push_back("frequencies.f64bin");
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  manifest["stable_edge_count"] = result.stable_edges.size();
  manifest["failed_fits"] = result.state.failed_fits;
  manifest["runtime_seconds"] = timer.seconds();
  write_manifest(out_dir, manifest);

  std::cout << "stable edges: " << result.stable_edges.size() << " ("
            << result.config.n << "x" << result.config.m << " minipatches, K="
            << args.K << ")\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario = "chain";
  std::size_t M = 0;
  std::size_t N = 0;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out = ".";
};

int run_simulate(const SimulateArgs& args) {
  Timer timer;
  if (args.M < 2) throw std::invalid_argument("--M must be >= 2");
  if (args.N < 1) throw std::invalid_argument("--N must be >= 1");

  const Scenario scenario = scenario_from_name(args.scenario);
  const GroundTruthModel model =
      make_model(scenario, args.M, mix_seed(args.seed, 0));
  Rng data_rng(mix_seed(args.seed, 1));
  const DataMatrix X = sample_gaussian(model, args.N, data_rng);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  const MatrixFormat format = matrix_format_from_name(args.format);
  const std::string data_name =
      format == MatrixFormat::Csv ? "data.csv" : "data.f64bin";
  write_matrix((out_dir / data_name).string(), X, format);

  std::vector<double> weights;
  weights.reserve(model.edges.size());
  for (const auto& [i, j] : model.edges) weights.push_back(model.precision(i, j));
  write_edge_list((out_dir / "truth_edges.tsv").string(), model.edges, weights);
  write_model((out_dir / "model.txt").string(), model);

  ordered_json manifest;
  manifest["command"] = "simulate";
  manifest["version"] = kVersion;
  manifest["master_seed"] = args.seed;
  manifest["config"] = {{"scenario", args.scenario},
                        {"M", args.M},
                        {"N", args.N},
                        {"format", args.format},
                        {"pd_repair_applied", model.pd_repair_applied}};
  manifest["inputs"] = ordered_json::object();
  manifest["outputs"] =
      ordered_json::array({data_name, "truth_edges.tsv", "model.txt",
                           "manifest.json"});
  manifest["edge_count"] = model.edges.size();
  manifest["runtime_seconds"] = timer.seconds();
  write_manifest(out_dir, manifest);

  std::cout << "wrote " << data_name << " (" << args.N << "x" << args.M
            << "), " << model.edges.size() << " true edges\n";
  return kExitOk;
}

struct BenchmarkArgs {
  std::string scenario = "chain";
  std::size_t M = 0;
  std::size_t N = 0;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::size_t n = 0;
  std::size_t m = 0;
  double m_frac = 0.05;
  double pi_thr = 0.5;
  std::size_t K = 1000;
  double gamma = 0.5;
  int workers = 1;
  std::string out = ".";
  bool no_center = false;
  bool curve = false;
  std::vector<std::size_t> curve_N;
  double n_frac = 0.5;
};

int run_benchmark(const BenchmarkArgs& args) {
  if (args.M < 2) throw std::invalid_argument("--M must be >= 2");
  const Scenario scenario = scenario_from_name(args.scenario);
  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);

  MPGraphConfig config;
  config.n = args.n;
  config.m = args.m;
  config.K = args.K;
  config.pi_thr = args.pi_thr;
  config.base.gamma = args.gamma;
  config.base.center = !args.no_center;
  config.master_seed = args.seed;
  config.workers = args.workers;

  ordered_json manifest;
  manifest["command"] = "benchmark";
  manifest["version"] = kVersion;
  manifest["master_seed"] = args.seed;
  manifest["config"] = {{"scenario", args.scenario},
                        {"M", args.M},
                        {"N", args.N},
                        {"trials", args.trials},
                        {"n", args.n},
                        {"m", args.m},
                        {"m_frac", args.m_frac},
                        {"K", args.K},
                        {"pi_thr", args.pi_thr},
                        {"gamma", args.gamma},
                        {"center", !args.no_center},
                        {"workers", args.workers},
                        {"curve", args.curve}};
  manifest["inputs"] = ordered_json::object();

  Timer total;
  if (args.curve) {
    if (args.curve_N.empty())
      throw std::invalid_argument("--curve requires --curve-N");
    RecoveryCurveOptions options;
    options.engine = config;
    options.n_frac = args.n_frac;
    options.cell_workers = args.workers;
    options.engine.workers = 1;
    const std::vector<RecoveryCell> cells = recovery_curve(
        scenario, {args.M}, args.curve_N, args.trials, options);

    std::ofstream out(out_dir / "curve.tsv", std::ios::binary);
    out << "scenario\tM\tN\ttrial_count\trecovery_rate\n";
    char buf[160];
    for (const auto& cell : cells) {
      std::snprintf(buf, sizeof(buf), "%s\t%zu\t%zu\t%zu\t%.6f\n",
                    scenario_name(cell.scenario).c_str(), cell.M, cell.N,
                    cell.trials, cell.recovery_rate);
      out << buf;
      std::cout << buf;
      if (cell.failed)
        std::cerr << "warning: cell N=" << cell.N
                  << " failed: " << cell.error << '\n';
    }
    manifest["outputs"] = ordered_json::array({"curve.tsv", "manifest.json"});
    manifest["runtime_seconds"] = total.seconds();
    write_manifest(out_dir, manifest);
    return kExitOk;
  }

  if (args.N < 2) throw std::invalid_argument("--N must be >= 2");

  std::ofstream out(out_dir / "report.tsv", std::ios::binary);
  out << "scenario\tM\tN\ttrial\tselected\ttpr\tprecision\tf1\tseconds\n";
  std::cout << "scenario\tM\tN\ttrial\tselected\ttpr\tprecision\tf1\tseconds\n";

  double sum_sel = 0, sum_tpr = 0, sum_prec = 0, sum_f1 = 0, sum_sec = 0;
  char buf[200];
  for (std::size_t t = 0; t < args.trials; ++t) {
    const std::uint64_t base = mix_seed(args.seed, t);
    const GroundTruthModel model =
        make_model(scenario, args.M, mix_seed(base, 0));
    Rng data_rng(mix_seed(base, 1));
    const DataMatrix X = sample_gaussian(model, args.N, data_rng);

    MPGraphConfig trial_config = config;
    trial_config.master_seed = mix_seed(base, 2);
    const ResolvedSize size =
        resolve_minipatch_size(args.N, args.M, args.n, args.m, args.m_frac);
    trial_config.n = size.n;
    trial_config.m = size.m;

    Timer timer;
    const MPGraphResult result = run_mpgraph(X, trial_config);
    const double seconds = timer.seconds();

    const MetricReport report =
        metrics(confusion(result.stable_edges, model.edges, args.M));
    std::snprintf(buf, sizeof(buf), "%s\t%zu\t%zu\t%zu\t%zu\t%.3f\t%.3f\t%.3f\t%.3f\n",
                  args.scenario.c_str(), args.M, args.N, t + 1,
                  result.stable_edges.size(), report.tpr, report.precision,
                  report.f1, seconds);
    out << buf;
    std::cout << buf;
    sum_sel += static_cast<double>(result.stable_edges.size());
    sum_tpr += report.tpr;
    sum_prec += report.precision;
    sum_f1 += report.f1;
    sum_sec += seconds;
  }

  if (args.trials > 1) {
    const auto T = static_cast<double>(args.trials);
    std::snprintf(buf, sizeof(buf),
                  "%s\t%zu\t%zu\tmean\t%.1f\t%.3f\t%.3f\t%.3f\t%.3f\n",
                  args.scenario.c_str(), args.M, args.N, sum_sel / T,
                  sum_tpr / T, sum_prec / T, sum_f1 / T, sum_sec / T);
    out << buf;
    std::cout << buf;
  }

  manifest["outputs"] = ordered_json::array({"report.tsv", "manifest.json"});
  manifest["runtime_seconds"] = total.seconds();
  write_manifest(out_dir, manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian graphical model selection via minipatch ensembles"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit", "Estimate a stable edge set from an observation matrix");
  fit->add_option("--input", fit_args.input, "Observation matrix file")
      ->required();
  fit->add_option("--format", fit_args.format, "Input format: csv or f64bin")
      ->check(CLI::IsMember({"csv", "f64bin"}));
  fit->add_option("--n", fit_args.n, "Observations per minipatch");
  fit->add_option("--m", fit_args.m, "Nodes per minipatch");
  fit->add_option("--m-frac", fit_args.m_frac,
                  "Minipatch node fraction when --m is absent (default 0.05)");
  fit->add_option("--pi-thr", fit_args.pi_thr,
                  "Selection frequency threshold (default 0.5)");
  fit->add_option("--K", fit_args.K, "Minipatch count (default 1000)");
  fit->add_option("--gamma", fit_args.gamma, "eBIC gamma (default 0.5)");
  fit->add_option("--seed", fit_args.seed, "Master seed");
  fit->add_option("--workers", fit_args.workers, "Worker threads");
  fit->add_option("--out", fit_args.out, "Output directory");
  fit->add_flag("--emit-frequencies", fit_args.emit_frequencies,
                "Also write the full selection-frequency matrix (f64bin)");
  fit->add_flag("--no-center", fit_args.no_center,
                "Skip column mean-centering of each minipatch");

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Generate a synthetic model and Gaussian samples");
  sim->add_option("--scenario", sim_args.scenario, "chain, er, or sw")
      ->check(CLI::IsMember({"chain", "er", "sw"}));
  sim->add_option("--M", sim_args.M, "Number of nodes")->required();
  sim->add_option("--N", sim_args.N, "Number of observations")->required();
  sim->add_option("--seed", sim_args.seed, "Master seed");
  sim->add_option("--format", sim_args.format, "Data format: csv or f64bin")
      ->check(CLI::IsMember({"csv", "f64bin"}));
  sim->add_option("--out", sim_args.out, "Output directory");

  BenchmarkArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "benchmark", "Simulate, fit and evaluate in one pass");
  bench->add_option("--scenario", bench_args.scenario, "chain, er, or sw")
      ->check(CLI::IsMember({"chain", "er", "sw"}));
  bench->add_option("--M", bench_args.M, "Number of nodes")->required();
  bench->add_option("--N", bench_args.N, "Number of observations");
  bench->add_option("--seed", bench_args.seed, "Master seed");
  bench->add_option("--trials", bench_args.trials, "Trial count (default 1)");
  bench->add_option("--n", bench_args.n, "Observations per minipatch");
  bench->add_option("--m", bench_args.m, "Nodes per minipatch");
  bench->add_option("--m-frac", bench_args.m_frac,
                    "Minipatch node fraction when --m is absent");
  bench->add_option("--pi-thr", bench_args.pi_thr, "Selection threshold");
  bench->add_option("--K", bench_args.K, "Minipatch count");
  bench->add_option("--gamma", bench_args.gamma, "eBIC gamma");
  bench->add_option("--workers", bench_args.workers, "Worker threads");
  bench->add_option("--out", bench_args.out, "Output directory");
  bench->add_flag("--no-center", bench_args.no_center,
                  "Skip column mean-centering of each minipatch");
  bench->add_flag("--curve", bench_args.curve,
                  "Recovery-curve mode over an N grid");
  bench->add_option("--curve-N", bench_args.curve_N,
                    "N values for --curve (comma separated)")
      ->delimiter(',');
  bench->add_option("--n-frac", bench_args.n_frac,
                    "In --curve mode, n = max(ceil(m/0.8), n-frac * N)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) return run_fit(fit_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (bench->parsed()) return run_benchmark(bench_args);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
