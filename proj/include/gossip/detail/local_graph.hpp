#pragma once

#include <cstdint>
#include <vector>

#include "gossip/graph.hpp"

namespace gossip::detail {

/// Subgraph induced by a vertex subset, re-indexed 0..n-1 in ascending
/// global-id order so local order equals the global total order.
class LocalGraph {
 public:
  LocalGraph(const WeightedGraph& graph, const VertexSubset& region);

  std::size_t size() const { return global_.size(); }
  Vertex global(std::uint32_t local) const { return global_[local]; }
  const std::vector<Vertex>& globals() const { return global_; }

  /// Local id of a global vertex, or -1 if it is not in the subgraph.
  std::int64_t local(Vertex v) const;

  /// Distances from a local source to every local vertex (kUnreachable if
  /// disconnected). Bitwise equal to one_to_all restricted to the region.
  void distances_from(std::uint32_t source, std::vector<double>& out) const;

  std::size_t component_count() const;

 private:
  struct Arc {
    std::uint32_t to;
    double weight;
  };
  std::vector<Vertex> global_;
  std::vector<std::int64_t> to_local_;  // sized to the whole graph
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  bool uniform_ = true;
  double weight_ = 1.0;
};

}  // namespace gossip::detail
