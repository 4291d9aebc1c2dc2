#include "gossip/detail/local_graph.hpp"

#include <functional>
#include <queue>
#include <utility>

namespace gossip::detail {

LocalGraph::LocalGraph(const WeightedGraph& graph, const VertexSubset& region)
    : global_(region.members()), to_local_(graph.vertex_count(), -1) {
  for (std::size_t k = 0; k < global_.size(); ++k) to_local_[global_[k]] = static_cast<std::int64_t>(k);
  offsets_.assign(global_.size() + 1, 0);
  for (std::size_t k = 0; k < global_.size(); ++k) {
    for (const Neighbor& n : graph.neighbors(global_[k])) {
      const auto l = to_local_[n.vertex];
      if (l >= 0) arcs_.push_back({static_cast<std::uint32_t>(l), n.weight});
    }
    offsets_[k + 1] = arcs_.size();
  }
  uniform_ = graph.uniform_weights();
  weight_ = graph.edge_count() ? graph.edges().front().weight : 1.0;
}

std::int64_t LocalGraph::local(Vertex v) const {
  return v < to_local_.size() ? to_local_[v] : -1;
}

void LocalGraph::distances_from(std::uint32_t source, std::vector<double>& out) const {
  const std::size_t n = global_.size();
  out.assign(n, kUnreachable);
  if (uniform_) {
    std::vector<std::int64_t> hops(n, -1);
    std::vector<std::uint32_t> queue;
    queue.reserve(n);
    queue.push_back(source);
    hops[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t v = queue[head];
      for (std::size_t a = offsets_[v]; a < offsets_[v + 1]; ++a) {
        const std::uint32_t t = arcs_[a].to;
        if (hops[t] < 0) {
          hops[t] = hops[v] + 1;
          queue.push_back(t);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (hops[v] >= 0) out[v] = static_cast<double>(hops[v]) * weight_;
    }
    return;
  }
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > out[v]) continue;
    for (std::size_t a = offsets_[v]; a < offsets_[v + 1]; ++a) {
      const double nd = d + arcs_[a].weight;
      if (nd < out[arcs_[a].to]) {
        out[arcs_[a].to] = nd;
        heap.push({nd, arcs_[a].to});
      }
    }
  }
}

std::size_t LocalGraph::component_count() const {
  const std::size_t n = global_.size();
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> stack;
  std::size_t components = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (std::size_t a = offsets_[v]; a < offsets_[v + 1]; ++a) {
        if (!seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          stack.push_back(arcs_[a].to);
        }
      }
    }
  }
  return components;
}

}  // namespace gossip::detail
