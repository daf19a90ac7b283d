#include "mpgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mpgraph {

namespace {

constexpr double kMinEigenFloor = 0.05;

// Collect the nonzero off-diagonal pattern and verify it matches edges.
EdgeSet edges_from_pattern(const SymMatrix& precision) {
  EdgeSet edges;
  const std::size_t M = precision.dim();
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i + 1; j < M; ++j)
      if (precision(i, j) != 0.0) edges.emplace_back(i, j);
  return edges;
}

// Weight draw shared by the random scenarios: uniform magnitude in
// [0.3, 0.6], random sign.
double draw_weight(Rng& rng) {
  const double mag = 0.3 + 0.3 * rng.uniform();
  return rng.uniform() < 0.5 ? -mag : mag;
}

// Inflate the diagonal until the smallest eigenvalue clears the floor.
// Only the diagonal moves, so the support is untouched.
void repair_positive_definiteness(GroundTruthModel& model) {
  const double lambda_min = min_eigenvalue(model.precision, 1e-6);
  if (lambda_min >= kMinEigenFloor) return;
  const double shift = kMinEigenFloor - lambda_min + 2e-6;
  const std::size_t M = model.precision.dim();
  for (std::size_t i = 0; i < M; ++i)
    model.precision.set(i, i, model.precision(i, i) + shift);
  model.pd_repair_applied = true;
}

GroundTruthModel from_edge_weights(const EdgeSet& edges,
                                   const std::vector<double>& weights,
                                   std::size_t M, Scenario scenario) {
  GroundTruthModel model;
  model.scenario = scenario;
  model.precision = SymMatrix(M);
  for (std::size_t i = 0; i < M; ++i) model.precision.set(i, i, 1.0);
  for (std::size_t e = 0; e < edges.size(); ++e)
    model.precision.set(edges[e].first, edges[e].second, weights[e]);
  model.edges = edges;
  repair_positive_definiteness(model);
  return model;
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Chain: return "chain";
    case Scenario::ErdosRenyi: return "er";
    case Scenario::SmallWorld: return "sw";
  }
  throw std::invalid_argument("unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "chain") return Scenario::Chain;
  if (name == "er") return Scenario::ErdosRenyi;
  if (name == "sw") return Scenario::SmallWorld;
  throw std::invalid_argument("unknown scenario: " + name);
}

const SymMatrix& GroundTruthModel::covariance() const {
  if (!covariance_) covariance_ = invert_pd(precision);
  return *covariance_;
}

GroundTruthModel chain_precision(std::size_t M) {
  if (M < 2) throw std::invalid_argument("chain_precision: M must be >= 2");
  GroundTruthModel model;
  model.scenario = Scenario::Chain;
  model.precision = SymMatrix(M);
  for (std::size_t i = 0; i < M; ++i) {
    model.precision.set(i, i, 1.25);
    if (i + 1 < M) {
      model.precision.set(i, i + 1, 0.6);
      model.edges.emplace_back(i, i + 1);
    }
  }
  return model;
}

GroundTruthModel erdos_renyi_precision(std::size_t M, Rng& rng) {
  if (M < 2)
    throw std::invalid_argument("erdos_renyi_precision: M must be >= 2");
  const std::size_t target = M - 1;
  std::set<Edge> chosen;
  while (chosen.size() < target) {
    const auto i = static_cast<std::size_t>(rng.uniform_below(M));
    const auto j = static_cast<std::size_t>(rng.uniform_below(M));
    if (i == j) continue;
    chosen.insert({std::min(i, j), std::max(i, j)});
  }
  EdgeSet edges(chosen.begin(), chosen.end());
  std::vector<double> weights(edges.size());
  for (auto& w : weights) w = draw_weight(rng);
  return from_edge_weights(edges, weights, M, Scenario::ErdosRenyi);
}

GroundTruthModel small_world_precision(std::size_t M, Rng& rng,
                                       double rewire_prob) {
  if (M < 4)
    throw std::invalid_argument("small_world_precision: M must be >= 4");
  if (rewire_prob < 0.0 || rewire_prob > 1.0)
    throw std::invalid_argument("small_world_precision: bad rewire_prob");

  std::set<Edge> graph;
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t v = (i + 1) % M;
    graph.insert({std::min(i, v), std::max(i, v)});
  }

  // Re-target the far endpoint of each lattice edge with probability
  // rewire_prob, redrawing on self-loops and existing edges.
  for (std::size_t u = 0; u < M; ++u) {
    if (rng.uniform() >= rewire_prob) continue;
    const std::size_t v = (u + 1) % M;
    const Edge old_edge{std::min(u, v), std::max(u, v)};
    bool found = false;
    std::size_t w = 0;
    for (std::size_t attempt = 0; attempt < 64 * M; ++attempt) {
      w = static_cast<std::size_t>(rng.uniform_below(M));
      if (w == u) continue;
      if (graph.count({std::min(u, w), std::max(u, w)})) continue;
      found = true;
      break;
    }
    if (!found) continue;  // node saturated; keep the lattice edge
    graph.erase(old_edge);
    graph.insert({std::min(u, w), std::max(u, w)});
  }

  EdgeSet edges(graph.begin(), graph.end());
  std::vector<double> weights(edges.size());
  for (auto& w : weights) w = draw_weight(rng);
  return from_edge_weights(edges, weights, M, Scenario::SmallWorld);
}

DataMatrix sample_gaussian(const GroundTruthModel& model, std::size_t N,
                           Rng& rng) {
  if (N < 1) throw std::invalid_argument("sample_gaussian: N must be >= 1");
  const std::size_t M = model.precision.dim();
  const std::vector<double> L = cholesky(model.covariance());

  DataMatrix X(N, M);
  std::vector<double> z(M);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < M; ++j) z[j] = rng.normal();
    double* row = &X.values[i * M];
    for (std::size_t j = 0; j < M; ++j) {
      double acc = 0.0;
      const double* lrow = &L[j * M];
      for (std::size_t k = 0; k <= j; ++k) acc += lrow[k] * z[k];
      row[j] = acc;
    }
  }
  return X;
}

GroundTruthModel make_model(Scenario scenario, std::size_t M,
                            std::uint64_t seed) {
  Rng rng(seed);
  GroundTruthModel model;
  switch (scenario) {
    case Scenario::Chain: model = chain_precision(M); break;
    case Scenario::ErdosRenyi: model = erdos_renyi_precision(M, rng); break;
    case Scenario::SmallWorld: model = small_world_precision(M, rng); break;
  }
  model.seed = seed;

  // Invariant check: edges must mirror the nonzero pattern exactly.
  const EdgeSet pattern = edges_from_pattern(model.precision);
  if (pattern != model.edges)
    throw numerical_failure("model edge set does not match nonzero pattern");
  return model;
}

}  // namespace mpgraph
