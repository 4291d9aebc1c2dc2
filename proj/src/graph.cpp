#include "gossip/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <sstream>
#include <utility>

namespace gossip {

WeightedGraph::WeightedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                             std::vector<Point2> coords)
    : edges_(std::move(edges)), coords_(std::move(coords)) {
  if (!coords_.empty() && coords_.size() != vertex_count) {
    throw FormatError("coordinate count does not match vertex count");
  }
  std::vector<std::vector<Neighbor>> lists(vertex_count);
  for (Edge& e : edges_) {
    if (e.u >= vertex_count || e.v >= vertex_count) {
      throw FormatError("edge endpoint out of range: " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    if (e.u == e.v) throw FormatError("self loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw FormatError("edge weight must be positive and finite");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    lists[e.u].push_back({e.v, e.weight});
    lists[e.v].push_back({e.u, e.weight});
  }
  adjacency_offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto& l = lists[v];
    std::sort(l.begin(), l.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    for (std::size_t k = 1; k < l.size(); ++k) {
      if (l[k].vertex == l[k - 1].vertex) {
        throw FormatError("duplicate edge " + std::to_string(v) + " " + std::to_string(l[k].vertex));
      }
    }
    adjacency_offsets_[v + 1] = adjacency_offsets_[v] + l.size();
  }
  adjacency_.reserve(adjacency_offsets_.back());
  for (auto& l : lists) adjacency_.insert(adjacency_.end(), l.begin(), l.end());

  uniform_weights_ = true;
  max_weight_ = 0.0;
  for (const Edge& e : edges_) {
    if (e.weight != edges_.front().weight) uniform_weights_ = false;
    max_weight_ = std::max(max_weight_, e.weight);
  }

  if (vertex_count == 0) throw EmptyEnvironmentError("graph has no vertices");
  const std::size_t components = component_count(*this, VertexSubset::all(vertex_count));
  if (components != 1) {
    throw ConnectivityError("graph is disconnected: " + std::to_string(components) + " components");
  }
}

std::optional<double> WeightedGraph::edge_weight(Vertex u, Vertex v) const {
  const auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& n, Vertex x) { return n.vertex < x; });
  if (it == nbrs.end() || it->vertex != v) return std::nullopt;
  return it->weight;
}

VertexSubset::VertexSubset(std::size_t universe, std::span<const Vertex> members) : mask_(universe, 0) {
  for (Vertex v : members) {
    if (v >= universe) throw DomainError("vertex " + std::to_string(v) + " outside graph");
    mask_[v] = 1;
  }
  for (std::size_t v = 0; v < universe; ++v) {
    if (mask_[v]) members_.push_back(static_cast<Vertex>(v));
  }
}

VertexSubset VertexSubset::all(std::size_t universe) {
  VertexSubset s(universe);
  s.mask_.assign(universe, 1);
  s.members_.resize(universe);
  for (std::size_t v = 0; v < universe; ++v) s.members_[v] = static_cast<Vertex>(v);
  return s;
}

void VertexSubset::insert(Vertex v) {
  if (v >= mask_.size()) throw DomainError("vertex " + std::to_string(v) + " outside graph");
  if (mask_[v]) return;
  mask_[v] = 1;
  members_.insert(std::lower_bound(members_.begin(), members_.end(), v), v);
}

VertexSubset set_union(const VertexSubset& a, const VertexSubset& b) {
  std::vector<Vertex> merged;
  merged.reserve(a.size() + b.size());
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(merged));
  return VertexSubset(std::max(a.universe(), b.universe()), merged);
}

bool disjoint(const VertexSubset& a, const VertexSubset& b) {
  const auto& small = a.size() < b.size() ? a : b;
  const auto& large = a.size() < b.size() ? b : a;
  return std::none_of(small.members().begin(), small.members().end(),
                      [&](Vertex v) { return large.contains(v); });
}

WeightedGraph from_occupancy_grid(std::string_view grid_text, double resolution) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw DomainError("grid resolution must be positive");
  }
  std::vector<std::string> rows;
  std::istringstream in{std::string(grid_text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw EmptyEnvironmentError("occupancy grid has no rows");
  const std::size_t cols = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw FormatError("ragged grid: row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " cells, expected " + std::to_string(cols));
    }
    for (char c : rows[r]) {
      if (c != '.' && c != '#') {
        throw FormatError(std::string("unexpected grid character '") + c + "' in row " + std::to_string(r));
      }
    }
  }

  std::vector<std::int64_t> cell_to_vertex(rows.size() * cols, -1);
  std::vector<Point2> coords;
  Vertex next = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] == '.') {
        cell_to_vertex[r * cols + c] = next++;
        // Row 0 is drawn at the top; y grows upward.
        coords.push_back({(static_cast<double>(c) + 0.5) * resolution,
                          (static_cast<double>(rows.size() - 1 - r) + 0.5) * resolution});
      }
    }
  }
  if (next == 0) throw EmptyEnvironmentError("occupancy grid has no free cells");

  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto id = cell_to_vertex[r * cols + c];
      if (id < 0) continue;
      if (c + 1 < cols && cell_to_vertex[r * cols + c + 1] >= 0) {
        edges.push_back({static_cast<Vertex>(id), static_cast<Vertex>(cell_to_vertex[r * cols + c + 1]), resolution});
      }
      if (r + 1 < rows.size() && cell_to_vertex[(r + 1) * cols + c] >= 0) {
        edges.push_back({static_cast<Vertex>(id), static_cast<Vertex>(cell_to_vertex[(r + 1) * cols + c]), resolution});
      }
    }
  }

  WeightedGraph g(next, std::move(edges), std::move(coords));
  g.grid_rows_ = rows.size();
  g.grid_cols_ = cols;
  g.cell_to_vertex_ = std::move(cell_to_vertex);
  return g;
}

namespace {

void require_source(const WeightedGraph& graph, const VertexSubset& region, Vertex source) {
  if (source >= graph.vertex_count() || !region.contains(source)) {
    throw DomainError("source vertex " + std::to_string(source) + " is not in the region");
  }
}

}  // namespace

DistanceMap one_to_all_bfs(const WeightedGraph& graph, const VertexSubset& region, Vertex source) {
  require_source(graph, region, source);
  const double w = graph.edge_count() ? graph.edges().front().weight : 1.0;
  std::vector<std::int64_t> hops(graph.vertex_count(), -1);
  std::deque<Vertex> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (const Neighbor& n : graph.neighbors(v)) {
      if (hops[n.vertex] < 0 && region.contains(n.vertex)) {
        hops[n.vertex] = hops[v] + 1;
        queue.push_back(n.vertex);
      }
    }
  }
  DistanceMap out{source, std::vector<double>(graph.vertex_count(), kUnreachable)};
  for (std::size_t v = 0; v < hops.size(); ++v) {
    if (hops[v] >= 0) out.dist[v] = static_cast<double>(hops[v]) * w;
  }
  return out;
}

DistanceMap one_to_all_dijkstra(const WeightedGraph& graph, const VertexSubset& region, Vertex source) {
  require_source(graph, region, source);
  DistanceMap out{source, std::vector<double>(graph.vertex_count(), kUnreachable)};
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > out.dist[v]) continue;
    for (const Neighbor& n : graph.neighbors(v)) {
      if (!region.contains(n.vertex)) continue;
      const double nd = d + n.weight;
      if (nd < out.dist[n.vertex]) {
        out.dist[n.vertex] = nd;
        heap.push({nd, n.vertex});
      }
    }
  }
  return out;
}

DistanceMap one_to_all(const WeightedGraph& graph, const VertexSubset& region, Vertex source) {
  return graph.uniform_weights() ? one_to_all_bfs(graph, region, source)
                                 : one_to_all_dijkstra(graph, region, source);
}

std::vector<Vertex> shortest_path(const WeightedGraph& graph, const VertexSubset& region,
                                  Vertex from, Vertex to) {
  if (!region.contains(to)) throw DomainError("target vertex " + std::to_string(to) + " is not in the region");
  const DistanceMap dm = one_to_all(graph, region, from);
  if (!dm.reachable(to)) {
    throw NoPathError("no path from " + std::to_string(from) + " to " + std::to_string(to) + " within region");
  }
  std::vector<Vertex> path{to};
  Vertex v = to;
  while (v != from) {
    const double target = dm[v];
    const double tol = 1e-9 * std::max(1.0, target);
    std::optional<Vertex> pred;
    // Neighbors are sorted, so the first match is the lowest id.
    for (const Neighbor& n : graph.neighbors(v)) {
      if (!dm.reachable(n.vertex) || dm[n.vertex] >= target) continue;
      if (std::abs(dm[n.vertex] + n.weight - target) <= tol) {
        pred = n.vertex;
        break;
      }
    }
    if (!pred) throw NoPathError("shortest-path reconstruction failed");
    v = *pred;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t component_count(const WeightedGraph& graph, const VertexSubset& region) {
  std::vector<std::uint8_t> seen(graph.vertex_count(), 0);
  std::size_t components = 0;
  std::vector<Vertex> stack;
  for (Vertex s : region.members()) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const Neighbor& n : graph.neighbors(v)) {
        if (!seen[n.vertex] && region.contains(n.vertex)) {
          seen[n.vertex] = 1;
          stack.push_back(n.vertex);
        }
      }
    }
  }
  return components;
}

bool is_connected(const WeightedGraph& graph, const VertexSubset& region) {
  return !region.empty() && component_count(graph, region) == 1;
}

}  // namespace gossip
