#include "gossip/baselines.hpp"

#include <algorithm>
#include <set>

#include "gossip/detail/local_graph.hpp"

namespace gossip {

Partition gossip_lloyd_exchange(const WeightedGraph& graph, const Partition& partition, RobotId i, RobotId j,
                                const PhiWeights& phi) {
  if (i == j) throw DomainError("exchange needs two distinct robots");
  const RobotId lo = std::min(i, j);
  const RobotId hi = std::max(i, j);
  const VertexSubset region_lo = partition.region(lo);
  const VertexSubset region_hi = partition.region(hi);
  const detail::LocalGraph local(graph, set_union(region_lo, region_hi));
  if (local.component_count() != 1) return partition;

  const Vertex c_lo = centroid(graph, region_lo, phi);
  const Vertex c_hi = centroid(graph, region_hi, phi);
  std::vector<double> d_lo;
  std::vector<double> d_hi;
  local.distances_from(static_cast<std::uint32_t>(local.local(c_lo)), d_lo);
  local.distances_from(static_cast<std::uint32_t>(local.local(c_hi)), d_hi);

  Partition next = partition;
  std::vector<Vertex> side_lo;
  std::vector<Vertex> side_hi;
  for (std::uint32_t x = 0; x < local.size(); ++x) {
    (d_lo[x] <= d_hi[x] ? side_lo : side_hi).push_back(local.global(x));
  }
  next.assign(VertexSubset(graph.vertex_count(), side_lo), lo);
  next.assign(VertexSubset(graph.vertex_count(), side_hi), hi);
  return next;
}

LloydRound decentralized_lloyd_round(const WeightedGraph& graph, const std::vector<Vertex>& positions,
                                     const PhiWeights& phi) {
  // voronoi_partition rejects duplicate positions.
  Partition partition = voronoi_partition(graph, positions);
  return {centroids(graph, partition, phi), std::move(partition)};
}

LloydRun run_decentralized_lloyd(const WeightedGraph& graph, std::vector<Vertex> positions, const PhiWeights& phi,
                                 std::size_t max_rounds) {
  LloydRun run;
  run.positions = std::move(positions);
  std::set<std::vector<Vertex>> seen;
  while (run.rounds < max_rounds) {
    LloydRound round = decentralized_lloyd_round(graph, run.positions, phi);
    ++run.rounds;
    run.costs.push_back(h_exp(graph, round.partition, phi));
    const bool fixed = round.positions == run.positions;
    run.partition = std::move(round.partition);
    if (fixed) {
      run.converged = true;
      break;
    }
    // Centroid ties can in principle make positions cycle; stop on a repeat.
    if (!seen.insert(run.positions).second) break;
    run.positions = std::move(round.positions);
  }
  return run;
}

}  // namespace gossip
