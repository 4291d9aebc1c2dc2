#include "gossip/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "gossip/detail/local_graph.hpp"
#include "gossip/pairwise_rule.hpp"

namespace gossip {

PhiWeights::PhiWeights(std::vector<double> phi) : phi_(std::move(phi)) {
  for (std::size_t v = 0; v < phi_.size(); ++v) {
    if (!(phi_[v] > 0.0) || !std::isfinite(phi_[v])) {
      throw DomainError("phi must be strictly positive at every vertex (vertex " + std::to_string(v) + ")");
    }
  }
  // Ascending-id summation so the total is reproducible.
  total_ = std::accumulate(phi_.begin(), phi_.end(), 0.0);
}

PhiWeights PhiWeights::uniform(std::size_t vertex_count, double value) {
  return PhiWeights(std::vector<double>(vertex_count, value));
}

Partition::Partition(std::vector<RobotId> owner, std::size_t robot_count)
    : owner_(std::move(owner)), robot_count_(robot_count) {
  if (robot_count_ == 0) throw InvalidPartitionError("partition needs at least one robot");
  for (std::size_t v = 0; v < owner_.size(); ++v) {
    if (owner_[v] >= robot_count_) {
      throw InvalidPartitionError("vertex " + std::to_string(v) + " has owner " + std::to_string(owner_[v]) +
                                  " outside 0.." + std::to_string(robot_count_ - 1));
    }
  }
}

VertexSubset Partition::region(RobotId i) const {
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < owner_.size(); ++v) {
    if (owner_[v] == i) members.push_back(static_cast<Vertex>(v));
  }
  return VertexSubset(owner_.size(), members);
}

std::vector<VertexSubset> Partition::regions() const {
  std::vector<std::vector<Vertex>> members(robot_count_);
  for (std::size_t v = 0; v < owner_.size(); ++v) members[owner_[v]].push_back(static_cast<Vertex>(v));
  std::vector<VertexSubset> out;
  out.reserve(robot_count_);
  for (const auto& m : members) out.emplace_back(owner_.size(), m);
  return out;
}

std::size_t Partition::region_size(RobotId i) const {
  return static_cast<std::size_t>(std::count(owner_.begin(), owner_.end(), i));
}

void Partition::assign(const VertexSubset& side, RobotId i) {
  for (Vertex v : side.members()) owner_[v] = i;
}

bool Partition::every_region_nonempty() const {
  std::vector<std::uint8_t> seen(robot_count_, 0);
  for (RobotId o : owner_) seen[o] = 1;
  return std::all_of(seen.begin(), seen.end(), [](std::uint8_t s) { return s != 0; });
}

bool Partition::every_region_connected(const WeightedGraph& graph) const {
  for (const VertexSubset& r : regions()) {
    if (!is_connected(graph, r)) return false;
  }
  return true;
}

std::string Partition::validation_error(const WeightedGraph& graph) const {
  // Covering and disjointness hold by construction of the owner array; only
  // its length can be wrong.
  if (owner_.size() != graph.vertex_count()) {
    return "partition covers " + std::to_string(owner_.size()) + " vertices, graph has " +
           std::to_string(graph.vertex_count());
  }
  const auto rs = regions();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].empty()) return "region " + std::to_string(i) + " is empty";
  }
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::size_t c = component_count(graph, rs[i]);
    if (c != 1) return "region " + std::to_string(i) + " is disconnected (" + std::to_string(c) + " components)";
  }
  return {};
}

void Partition::validate(const WeightedGraph& graph) const {
  if (auto err = validation_error(graph); !err.empty()) throw InvalidPartitionError(err);
}

namespace {

void require_connected_region(const WeightedGraph& graph, const VertexSubset& region) {
  if (region.empty()) throw DomainError("region is empty");
  if (!is_connected(graph, region)) throw ConnectivityError("region is not connected");
}

}  // namespace

double h_one(const WeightedGraph& graph, const VertexSubset& region, Vertex h, const PhiWeights& phi) {
  if (!region.contains(h)) throw DomainError("center " + std::to_string(h) + " is not in the region");
  require_connected_region(graph, region);
  const DistanceMap dm = one_to_all(graph, region, h);
  double cost = 0.0;
  for (Vertex k : region.members()) cost += dm[k] * phi[k];
  return cost;
}

std::vector<double> h_one_all(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi) {
  require_connected_region(graph, region);
  const detail::LocalGraph local(graph, region);
  std::vector<double> costs(local.size());
  std::vector<double> dist;
  for (std::uint32_t h = 0; h < local.size(); ++h) {
    local.distances_from(h, dist);
    double cost = 0.0;
    for (std::uint32_t k = 0; k < local.size(); ++k) cost += dist[k] * phi[local.global(k)];
    costs[h] = cost;
  }
  return costs;
}

RegionCost region_cost(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi) {
  const auto costs = h_one_all(graph, region, phi);
  // Members are ascending, so keeping the first of tied minima gives the lowest id.
  std::size_t best = 0;
  for (std::size_t k = 1; k < costs.size(); ++k) {
    if (cost_less(costs[k], costs[best])) best = k;
  }
  return {region.members()[best], costs[best]};
}

Vertex centroid(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi) {
  return region_cost(graph, region, phi).centroid;
}

std::vector<Vertex> centroid_set(const WeightedGraph& graph, const VertexSubset& region, const PhiWeights& phi) {
  const auto costs = h_one_all(graph, region, phi);
  const double best = *std::min_element(costs.begin(), costs.end());
  std::vector<Vertex> out;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    if (!cost_less(best, costs[k])) out.push_back(region.members()[k]);
  }
  return out;
}

double h_multicenter(const WeightedGraph& graph, std::span<const Vertex> centers, const Partition& partition,
                     const PhiWeights& phi) {
  if (centers.size() != partition.robot_count()) throw DomainError("one center per robot required");
  const auto rs = partition.regions();
  double total = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) total += h_one(graph, rs[i], centers[i], phi);
  return total / phi.total();
}

double h_exp(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi) {
  double total = 0.0;
  for (const VertexSubset& r : partition.regions()) total += region_cost(graph, r, phi).cost;
  return total / phi.total();
}

std::vector<Vertex> centroids(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi) {
  std::vector<Vertex> out;
  for (const VertexSubset& r : partition.regions()) out.push_back(centroid(graph, r, phi));
  return out;
}

Partition voronoi_partition(const WeightedGraph& graph, std::span<const Vertex> generators) {
  if (generators.empty()) throw DomainError("at least one generator required");
  std::set<Vertex> unique(generators.begin(), generators.end());
  if (unique.size() != generators.size()) throw DomainError("Voronoi generators must be distinct");
  const auto all = VertexSubset::all(graph.vertex_count());
  std::vector<double> best(graph.vertex_count(), kUnreachable);
  std::vector<RobotId> owner(graph.vertex_count(), 0);
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const DistanceMap dm = one_to_all(graph, all, generators[i]);
    for (std::size_t v = 0; v < owner.size(); ++v) {
      // Strict comparison: ties stay with the lower robot index.
      if (dm.dist[v] < best[v]) {
        best[v] = dm.dist[v];
        owner[v] = static_cast<RobotId>(i);
      }
    }
  }
  return Partition(std::move(owner), generators.size());
}

AdjacencyEdges adjacency_edges(const WeightedGraph& graph, const Partition& partition) {
  std::set<std::pair<RobotId, RobotId>> pairs;
  for (const Edge& e : graph.edges()) {
    const RobotId a = partition.owner(e.u);
    const RobotId b = partition.owner(e.v);
    if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  }
  return {pairs.begin(), pairs.end()};
}

namespace {

bool no_greater(double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); }

// Backtracking search for a centroid vector that generates the partition as a
// Voronoi partition. Pair constraints are binary, so partial assignments can
// be checked incrementally.
class CentroidalVoronoiSearch {
 public:
  CentroidalVoronoiSearch(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi)
      : graph_(graph), regions_(partition.regions()), all_(VertexSubset::all(graph.vertex_count())) {
    for (const auto& r : regions_) candidates_.push_back(centroid_set(graph, r, phi));
    choice_.assign(regions_.size(), 0);
  }

  bool run() { return assign(0); }

 private:
  static constexpr std::size_t kNodeLimit = 1'000'000;

  const DistanceMap& distances(Vertex c) {
    auto it = cache_.find(c);
    if (it == cache_.end()) it = cache_.emplace(c, one_to_all(graph_, all_, c)).first;
    return it->second;
  }

  bool compatible(std::size_t i, Vertex ci, std::size_t j, Vertex cj) {
    const DistanceMap& di = distances(ci);
    const DistanceMap& dj = distances(cj);
    for (Vertex k : regions_[i].members()) {
      if (!no_greater(di[k], dj[k])) return false;
    }
    for (Vertex k : regions_[j].members()) {
      if (!no_greater(dj[k], di[k])) return false;
    }
    return true;
  }

  bool assign(std::size_t i) {
    if (i == regions_.size()) return true;
    for (std::size_t c = 0; c < candidates_[i].size(); ++c) {
      if (++nodes_ > kNodeLimit) return false;
      const Vertex ci = candidates_[i][c];
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = compatible(i, ci, j, candidates_[j][choice_[j]]);
      if (!ok) continue;
      choice_[i] = c;
      if (assign(i + 1)) return true;
    }
    return false;
  }

  const WeightedGraph& graph_;
  std::vector<VertexSubset> regions_;
  VertexSubset all_;
  std::vector<std::vector<Vertex>> candidates_;
  std::vector<std::size_t> choice_;
  std::map<Vertex, DistanceMap> cache_;
  std::size_t nodes_ = 0;
};

}  // namespace

bool is_centroidal_voronoi(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi) {
  CentroidalVoronoiSearch search(graph, partition, phi);
  return search.run();
}

bool is_pairwise_optimal(const WeightedGraph& graph, const Partition& partition, const PhiWeights& phi) {
  const auto rs = partition.regions();
  for (const auto& [i, j] : adjacency_edges(graph, partition)) {
    const ExchangeResult r = optimal_two_partition(graph, rs[i], rs[j], phi, ExchangeBudget{});
    if (r.improved) return false;
  }
  return true;
}

}  // namespace gossip
