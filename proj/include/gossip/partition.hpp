#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gossip/graph.hpp"

namespace gossip {

using RobotId = std::uint32_t;

/// Strictly positive per-vertex priority weights with their cached total.
class PhiWeights {
 public:
  PhiWeights() = default;
  explicit PhiWeights(std::vector<double> phi);

  static PhiWeights uniform(std::size_t vertex_count, double value = 1.0);

  double operator[](Vertex v) const { return phi_[v]; }
  std::size_t size() const { return phi_.size(); }
  double total() const { return total_; }
  const std::vector<double>& values() const { return phi_; }

 private:
  std::vector<double> phi_;
  double total_ = 0.0;
};

/// Connected N-partition stored as a per-vertex owner array.
///
/// Construction only checks that owners are in range; call validate() (or
/// validation_error()) to check the covering, nonempty and connected
/// conditions, each of which is reported separately.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<RobotId> owner, std::size_t robot_count);

  std::size_t robot_count() const { return robot_count_; }
  std::size_t vertex_count() const { return owner_.size(); }
  RobotId owner(Vertex v) const { return owner_[v]; }
  const std::vector<RobotId>& owners() const { return owner_; }

  VertexSubset region(RobotId i) const;
  std::vector<VertexSubset> regions() const;
  std::size_t region_size(RobotId i) const;

  /// Gives every vertex of `side` to robot `i`.
  void assign(const VertexSubset& side, RobotId i);

  bool every_region_nonempty() const;
  bool every_region_connected(const WeightedGraph& graph) const;
  /// Empty string when valid, otherwise a description of the first failure.
  std::string validation_error(const WeightedGraph& graph) const;
  void validate(const WeightedGraph& graph) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<RobotId> owner_;
  std::size_t robot_count_ = 0;
};

/// Costs are sums of products of inexact weights, so two mathematically equal
/// costs can differ in the last bits depending on summation order. Every
/// "strictly cheaper" decision goes through this test, which demands a margin
/// of kCostRelTol relative to the larger magnitude.
inline constexpr double kCostRelTol = 1e-10;

inline bool cost_less(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return a < b - kCostRelTol * scale;
}

/// Unordered adjacent robot pairs (i < j), sorted lexicographically.
using AdjacencyEdges = std::vector<std::pair<RobotId, RobotId>>;

/// Sum over the region of induced-subgraph distance from h times phi.
double h_one(const WeightedGraph& graph, const VertexSubset& region, Vertex h, const PhiWeights& phi);

/// H_one(h; region) for every member h (index-aligned with region.members()).
std::vector<double> h_one_all(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi);

/// Lowest-id minimizer of H_one over the region.
Vertex centroid(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi);

/// Every minimizer of H_one over the region, ascending.
std::vector<Vertex> centroid_set(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi);

struct RegionCost {
  Vertex centroid = 0;
  double cost = 0.0;  // H_one(centroid; region), unnormalized
};

RegionCost region_cost(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi);

/// Multicenter cost of explicit centers over a partition, normalized by total phi.
double h_multicenter(const WeightedGraph& graph, std::span<const Vertex> centers, const Partition& partition,
                     const PhiWeights& phi);

/// Expected task-to-owner distance with every robot at its region centroid.
double h_exp(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi);

std::vector<Vertex> centroids(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi);

/// Voronoi partition of the whole graph generated by distinct vertices; a
/// vertex tied between generators goes to the lowest robot index.
Partition voronoi_partition(const WeightedGraph& graph, std::span<const Vertex> generators);

AdjacencyEdges adjacency_edges(const WeightedGraph& graph, const Partition& partition);

/// True iff some choice of generalized centroids c_i generates the partition as
/// a Voronoi partition (tie apportionment free). The lowest-id centroid vector
/// is tried first.
bool is_centroidal_voronoi(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi);

/// True iff no adjacent pair of regions admits a strictly cheaper two-center
/// split of their union.
bool is_pairwise_optimal(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi);

}  // namespace gossip
