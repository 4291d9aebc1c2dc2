#pragma once

#include <cstddef>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/partition.hpp"

namespace gossip {

/// Pairwise Lloyd update: U = P_i u P_j is re-split into the two Voronoi cells
/// of U (induced distances) generated by the current centroids of P_i and
/// P_j. Ties go to the lower robot index. Non-adjacent pairs are unchanged.
Partition gossip_lloyd_exchange(const WeightedGraph& graph, const Partition& partition, RobotId i, RobotId j,
                                const PhiWeights& phi);

struct LloydRound {
  std::vector<Vertex> positions;  // region centroids after the move
  Partition partition;            // Voronoi partition of the old positions
};

/// One synchronous Decentralized Lloyd round: Voronoi partition of the
/// current positions, then every robot moves to its region centroid.
LloydRound decentralized_lloyd_round(const WeightedGraph& graph, const std::vector<Vertex>& positions,
                                     const PhiWeights& phi);

struct LloydRun {
  std::vector<Vertex> positions;
  Partition partition;
  std::vector<double> costs;  // H_exp after each round
  std::size_t rounds = 0;
  bool converged = false;     // positions reached a fixed point
};

/// Iterates rounds until the positions stop changing or max_rounds pass.
LloydRun run_decentralized_lloyd(const WeightedGraph& graph, std::vector<Vertex> positions, const PhiWeights& phi,
                                 std::size_t max_rounds = 10'000);

}  // namespace gossip
