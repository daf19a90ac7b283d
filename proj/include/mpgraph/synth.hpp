#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mpgraph/common.hpp"
#include "mpgraph/rng.hpp"
#include "mpgraph/sym_matrix.hpp"

namespace mpgraph {

enum class Scenario { Chain, ErdosRenyi, SmallWorld };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

/// Ground-truth precision matrix, its edge set and (cached) covariance.
struct GroundTruthModel {
  SymMatrix precision;
  EdgeSet edges;  // 0-based (i, j) with i < j, sorted
  Scenario scenario = Scenario::Chain;
  bool pd_repair_applied = false;
  std::uint64_t seed = 0;

  /// (precision)^{-1}, computed on first use.
  const SymMatrix& covariance() const;

 private:
  mutable std::optional<SymMatrix> covariance_;
};

/// Tridiagonal precision: diagonal 1.25, first off-diagonals 0.6.
GroundTruthModel chain_precision(std::size_t M);

/// Exactly M-1 distinct edges drawn uniformly over all pairs; weights
/// uniform on [-0.6, -0.3] u [0.3, 0.6]; unit diagonal. The diagonal is
/// inflated when needed to keep the smallest eigenvalue at or above 0.05.
GroundTruthModel erdos_renyi_precision(std::size_t M, Rng& rng);

/// Watts-Strogatz ring (one neighbor per side, M edges) with each lattice
/// edge independently re-targeted with probability 0.5; weights and
/// diagonal as in the Erdos-Renyi scenario. rewire_prob is exposed for
/// the degenerate p = 0 ring.
GroundTruthModel small_world_precision(std::size_t M, Rng& rng,
                                       double rewire_prob = 0.5);

/// N i.i.d. rows from N(0, precision^{-1}) via the lower Cholesky factor
/// of the covariance.
DataMatrix sample_gaussian(const GroundTruthModel& model, std::size_t N,
                           Rng& rng);

GroundTruthModel make_model(Scenario scenario, std::size_t M,
                            std::uint64_t seed);

}  // namespace mpgraph
