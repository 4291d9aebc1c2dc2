#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/errors.hpp"

namespace gossip {

/// Vertex ids are dense in [0, vertex_count). The numeric order is the total
/// order used for every tie-break in the library (centroids, paths, pairs).
using Vertex = std::uint32_t;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 0.0;
};

struct Neighbor {
  Vertex vertex = 0;
  double weight = 0.0;
};

/// Undirected, simple, connected graph with strictly positive edge weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Validates and builds the adjacency structure. Throws FormatError on
  /// self loops, duplicate edges, out-of-range endpoints or non-positive
  /// weights, and ConnectivityError when the graph is not connected.
  WeightedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                std::vector<Point2> coords = {});

  std::size_t vertex_count() const { return adjacency_offsets_.empty() ? 0 : adjacency_offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool uniform_weights() const { return uniform_weights_; }
  double max_edge_weight() const { return max_weight_; }
  const std::vector<Point2>& coords() const { return coords_; }

  /// Neighbors sorted by vertex id.
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adjacency_.data() + adjacency_offsets_[v],
            adjacency_.data() + adjacency_offsets_[v + 1]};
  }

  /// Weight of edge (u, v), or nullopt if they are not adjacent.
  std::optional<double> edge_weight(Vertex u, Vertex v) const;

  // Grid metadata, set only by from_occupancy_grid.
  std::size_t grid_rows() const { return grid_rows_; }
  std::size_t grid_cols() const { return grid_cols_; }
  const std::vector<std::int64_t>& cell_to_vertex() const { return cell_to_vertex_; }

 private:
  friend WeightedGraph from_occupancy_grid(std::string_view, double);

  std::vector<Edge> edges_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<Point2> coords_;
  bool uniform_weights_ = true;
  double max_weight_ = 0.0;
  std::size_t grid_rows_ = 0;
  std::size_t grid_cols_ = 0;
  std::vector<std::int64_t> cell_to_vertex_;
};

/// Membership set over the vertices of a graph. Members are kept sorted.
class VertexSubset {
 public:
  VertexSubset() = default;
  explicit VertexSubset(std::size_t universe) : mask_(universe, 0) {}
  VertexSubset(std::size_t universe, std::span<const Vertex> members);

  static VertexSubset all(std::size_t universe);

  std::size_t universe() const { return mask_.size(); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Vertex v) const { return v < mask_.size() && mask_[v] != 0; }
  const std::vector<Vertex>& members() const { return members_; }

  void insert(Vertex v);

  friend bool operator==(const VertexSubset& a, const VertexSubset& b) {
    return a.members_ == b.members_ && a.mask_.size() == b.mask_.size();
  }

 private:
  std::vector<std::uint8_t> mask_;
  std::vector<Vertex> members_;
};

VertexSubset set_union(const VertexSubset& a, const VertexSubset& b);
bool disjoint(const VertexSubset& a, const VertexSubset& b);

/// Shortest-path lengths from one source inside a region; vertices outside the
/// region or not reachable within it hold kUnreachable.
struct DistanceMap {
  Vertex source = 0;
  std::vector<double> dist;

  bool reachable(Vertex v) const { return dist[v] != kUnreachable; }
  double operator[](Vertex v) const { return dist[v]; }
};

/// Builds the 4-connected grid graph of the free cells ('.') of an ASCII
/// occupancy grid. Vertex ids are assigned row-major over free cells and every
/// edge weighs `resolution`.
WeightedGraph from_occupancy_grid(std::string_view grid_text, double resolution);

/// Exact shortest-path distances within the subgraph induced by `region`.
/// Uses BFS (hops x weight) on uniform-weight graphs, Dijkstra otherwise.
DistanceMap one_to_all(const WeightedGraph& graph, const VertexSubset& region, Vertex source);

// Both algorithms are exposed for the oracle-equivalence tests.
DistanceMap one_to_all_bfs(const WeightedGraph& graph, const VertexSubset& region, Vertex source);
DistanceMap one_to_all_dijkstra(const WeightedGraph& graph, const VertexSubset& region, Vertex source);

/// Shortest path [from, ..., to] inside `region`. Among equal-cost
/// predecessors the lowest vertex id wins.
std::vector<Vertex> shortest_path(const WeightedGraph& graph, const VertexSubset& region,
                                  Vertex from, Vertex to);

/// True iff `region` is nonempty and induces one connected component.
bool is_connected(const WeightedGraph& graph, const VertexSubset& region);

/// Number of connected components of the induced subgraph.
std::size_t component_count(const WeightedGraph& graph, const VertexSubset& region);

}  // namespace gossip
