#include "gossip/pairwise_rule.hpp"

#include <algorithm>
#include <string>

namespace gossip {

TwoPartitionSearch::TwoPartitionSearch(const WeightedGraph& graph, const VertexSubset& region_i,
                                       const VertexSubset& region_j, const PhiWeights& phi)
    : phi_(&phi), region_i_(region_i), region_j_(region_j), local_(graph, set_union(region_i, region_j)) {
  if (region_i.empty() || region_j.empty()) throw DomainError("exchange regions must be nonempty");
  if (!disjoint(region_i, region_j)) throw DomainError("exchange regions overlap");
  if (!is_connected(graph, region_i) || !is_connected(graph, region_j)) {
    throw ConnectivityError("exchange region is not connected");
  }

  const std::size_t n = local_.size();
  local_phi_.resize(n);
  for (std::uint32_t k = 0; k < n; ++k) local_phi_[k] = phi[local_.global(k)];
  rows_.resize(n);
  row_ready_.assign(n, 0);
  pair_count_ = static_cast<std::uint64_t>(n) * (n - 1);

  const RegionCost ci = region_cost(graph, region_i, phi);
  const RegionCost cj = region_cost(graph, region_j, phi);
  a_star_ = static_cast<std::uint32_t>(local_.local(ci.centroid));
  b_star_ = static_cast<std::uint32_t>(local_.local(cj.centroid));
  cost_a_ = ci.cost;
  cost_b_ = cj.cost;

  // Non-adjacent regions: no candidate can beat the incumbent, so the rule
  // leaves them unchanged without scanning.
  union_connected_ = local_.component_count() == 1;
  if (!union_connected_) cursor_ = pair_count_;
}

void TwoPartitionSearch::resume_from(const ExchangeResult& previous, std::uint64_t cursor) {
  if (cursor > pair_count_) throw DomainError("resume cursor beyond the candidate list");
  if (!union_connected_) return;
  cursor_ = cursor;
  improved_ = previous.improved;
  if (previous.improved) {
    from_regions_ = false;
    a_star_ = static_cast<std::uint32_t>(local_.local(previous.a_star));
    b_star_ = static_cast<std::uint32_t>(local_.local(previous.b_star));
    cost_a_ = previous.cost_a;
    cost_b_ = previous.cost_b;
  }
}

const std::vector<double>& TwoPartitionSearch::row(std::uint32_t source) {
  if (!row_ready_[source]) {
    local_.distances_from(source, rows_[source]);
    row_ready_[source] = 1;
    ++distance_computations_;
  }
  return rows_[source];
}

std::pair<std::uint32_t, std::uint32_t> TwoPartitionSearch::pair_at(std::uint64_t index) const {
  const std::uint64_t others = local_.size() - 1;
  const auto a = static_cast<std::uint32_t>(index / others);
  auto b = static_cast<std::uint32_t>(index % others);
  if (b >= a) ++b;
  return {a, b};
}

std::uint64_t TwoPartitionSearch::advance(std::uint64_t max_pairs) {
  if (max_pairs == 0) throw DomainError("exchange budget must be positive");
  const std::size_t n = local_.size();
  std::uint64_t done_here = 0;
  while (cursor_ < pair_count_ && done_here < max_pairs) {
    const auto [a, b] = pair_at(cursor_);
    const std::vector<double>& da = row(a);
    const std::vector<double>& db = row(b);
    double ca = 0.0;
    double cb = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (da[x] <= db[x]) {
        ca += da[x] * local_phi_[x];
      } else {
        cb += db[x] * local_phi_[x];
      }
    }
    if (cost_less(ca + cb, cost_a_ + cost_b_)) {
      from_regions_ = false;
      improved_ = true;
      a_star_ = a;
      b_star_ = b;
      cost_a_ = ca;
      cost_b_ = cb;
    }
    ++cursor_;
    ++done_here;
  }
  evaluated_ += done_here;
  return done_here;
}

ExchangeResult TwoPartitionSearch::result() const {
  ExchangeResult r;
  r.a_star = local_.global(a_star_);
  r.b_star = local_.global(b_star_);
  r.cost_a = cost_a_;
  r.cost_b = cost_b_;
  r.improved = improved_;
  r.pairs_evaluated = evaluated_;
  r.next_cursor = cursor_;
  r.pair_count = pair_count_;
  r.completed = done();
  r.distance_computations = distance_computations_;
  if (from_regions_) {
    r.side_a = region_i_;
    r.side_b = region_j_;
    return r;
  }
  // rows_ of the incumbent centers were filled when the incumbent was found,
  // unless it was restored by resume_from; recompute in that case.
  std::vector<double> da;
  std::vector<double> db;
  if (row_ready_[a_star_]) da = rows_[a_star_]; else local_.distances_from(a_star_, da);
  if (row_ready_[b_star_]) db = rows_[b_star_]; else local_.distances_from(b_star_, db);
  std::vector<Vertex> wa;
  std::vector<Vertex> wb;
  for (std::uint32_t x = 0; x < local_.size(); ++x) {
    (da[x] <= db[x] ? wa : wb).push_back(local_.global(x));
  }
  r.side_a = VertexSubset(region_i_.universe(), wa);
  r.side_b = VertexSubset(region_i_.universe(), wb);
  return r;
}

ExchangeResult optimal_two_partition(const WeightedGraph& graph, const VertexSubset& region_i,
                                     const VertexSubset& region_j, const PhiWeights& phi, ExchangeBudget budget,
                                     const ExchangeResult* resume) {
  if (budget.max_pairs == 0) throw DomainError("exchange budget must be positive");
  TwoPartitionSearch search(graph, region_i, region_j, phi);
  if (resume != nullptr) {
    search.resume_from(*resume, budget.resume_cursor);
  } else if (budget.resume_cursor != 0) {
    search.resume_from(ExchangeResult{}, budget.resume_cursor);
  }
  search.advance(budget.max_pairs);
  return search.result();
}

SideAssignment assign_sides(const WeightedGraph& graph, const ExchangeResult& result, Vertex pos_i, Vertex pos_j) {
  const bool i_in_a = result.side_a.contains(pos_i);
  const bool j_in_b = result.side_b.contains(pos_j);
  const bool i_in_b = result.side_b.contains(pos_i);
  const bool j_in_a = result.side_a.contains(pos_j);
  if (i_in_a && j_in_b) return {false};
  if (i_in_b && j_in_a) return {true};

  const auto all = VertexSubset::all(graph.vertex_count());
  const DistanceMap from_i = one_to_all(graph, all, pos_i);
  const DistanceMap from_j = one_to_all(graph, all, pos_j);
  const double keep = from_i[result.a_star] + from_j[result.b_star];
  const double swap = from_i[result.b_star] + from_j[result.a_star];
  return {cost_less(swap, keep)};
}

PairwiseExchange pairwise_exchange(const WeightedGraph& graph, const Partition& partition, RobotId i, RobotId j,
                                   const PhiWeights& phi, ExchangeBudget budget,
                                   std::optional<RobotPositions> positions, const ExchangeResult* resume) {
  if (i == j) throw DomainError("exchange needs two distinct robots");
  if (i >= partition.robot_count() || j >= partition.robot_count()) throw DomainError("robot index out of range");
  const RobotId lo = std::min(i, j);
  const RobotId hi = std::max(i, j);
  ExchangeResult r = optimal_two_partition(graph, partition.region(lo), partition.region(hi), phi, budget, resume);

  SideAssignment sides;
  if (positions && r.improved) {
    const Vertex pos_lo = lo == i ? positions->pos_i : positions->pos_j;
    const Vertex pos_hi = lo == i ? positions->pos_j : positions->pos_i;
    sides = assign_sides(graph, r, pos_lo, pos_hi);
  }
  Partition next = partition;
  if (r.improved) {
    next.assign(sides.swapped ? r.side_b : r.side_a, lo);
    next.assign(sides.swapped ? r.side_a : r.side_b, hi);
  }
  return {std::move(next), std::move(r), sides};
}

}  // namespace gossip
