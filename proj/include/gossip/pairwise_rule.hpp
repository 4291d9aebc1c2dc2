#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "gossip/detail/local_graph.hpp"
#include "gossip/graph.hpp"
#include "gossip/partition.hpp"

namespace gossip {

inline constexpr std::uint64_t kUnlimitedPairs = std::numeric_limits<std::uint64_t>::max();

/// How much of the candidate list to scan in one invocation, and where to
/// start. The candidate list holds every ordered pair (a, b), a != b, of the
/// union, lexicographic by (a, b) vertex id.
struct ExchangeBudget {
  std::uint64_t max_pairs = kUnlimitedPairs;
  std::uint64_t resume_cursor = 0;
};

struct ExchangeResult {
  VertexSubset side_a;  // W_{a*}
  VertexSubset side_b;  // W_{b*}
  Vertex a_star = 0;
  Vertex b_star = 0;
  double cost_a = 0.0;  // H_one(a*; W_{a*}), unnormalized
  double cost_b = 0.0;
  bool improved = false;
  std::uint64_t pairs_evaluated = 0;
  std::uint64_t next_cursor = 0;
  std::uint64_t pair_count = 0;  // |S|
  bool completed = false;
  // Per-source distance rows computed (one one-to-all search each).
  std::uint64_t distance_computations = 0;

  double total_cost() const { return cost_a + cost_b; }
};

/// Anytime search for the cheapest two-center split of U = P_i u P_j.
///
/// The incumbent starts as (P_i, Cd(P_i)), (P_j, Cd(P_j)) and is replaced only
/// on strict improvement. A candidate (a, b) splits U into
/// W_a = {x : d_U(x,a) <= d_U(x,b)} and W_b = U \ W_a, so ties go to the a-side.
class TwoPartitionSearch {
 public:
  /// Throws DomainError if the regions are empty or overlap and
  /// ConnectivityError if either is disconnected.
  TwoPartitionSearch(const WeightedGraph& graph, const VertexSubset& region_i, const VertexSubset& region_j,
                     const PhiWeights& phi);

  /// Continue from an earlier, truncated result over the same two regions.
  void resume_from(const ExchangeResult& previous, std::uint64_t cursor);

  /// Evaluates up to max_pairs candidates; returns how many were evaluated.
  std::uint64_t advance(std::uint64_t max_pairs);

  bool done() const { return cursor_ >= pair_count_; }
  std::uint64_t cursor() const { return cursor_; }
  std::uint64_t pair_count() const { return pair_count_; }

  ExchangeResult result() const;

 private:
  const std::vector<double>& row(std::uint32_t source);
  std::pair<std::uint32_t, std::uint32_t> pair_at(std::uint64_t index) const;

  const PhiWeights* phi_;
  VertexSubset region_i_;
  VertexSubset region_j_;
  detail::LocalGraph local_;
  std::vector<double> local_phi_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::uint8_t> row_ready_;
  bool union_connected_ = true;

  std::uint64_t pair_count_ = 0;
  std::uint64_t cursor_ = 0;
  std::uint64_t evaluated_ = 0;
  std::uint64_t distance_computations_ = 0;

  // Incumbent. Centers are local ids; from_regions means the incumbent is
  // still the caller's pair of regions rather than a Voronoi-style split.
  bool from_regions_ = true;
  std::uint32_t a_star_ = 0;
  std::uint32_t b_star_ = 0;
  double cost_a_ = 0.0;
  double cost_b_ = 0.0;
  bool improved_ = false;
};

/// One invocation of the pairwise partitioning rule over P_i, P_j (caller has
/// ordered i < j). Pass the previous result to continue a truncated search.
ExchangeResult optimal_two_partition(const WeightedGraph& graph, const VertexSubset& region_i,
                                     const VertexSubset& region_j, const PhiWeights& phi, ExchangeBudget budget,
                                     const ExchangeResult* resume = nullptr);

struct SideAssignment {
  bool swapped = false;  // false: i takes W_{a*}, j takes W_{b*}
};

/// Matches the two output sides to robots i and j given where they stand.
/// A robot already standing in one side keeps it when the other robot stands
/// in the other side; otherwise the assignment minimizing
/// d(pos_i, a*) + d(pos_j, b*) against the swapped sum wins, ties to identity.
SideAssignment assign_sides(const WeightedGraph& graph, const ExchangeResult& result, Vertex pos_i, Vertex pos_j);

struct RobotPositions {
  Vertex pos_i = 0;
  Vertex pos_j = 0;
};

struct PairwiseExchange {
  Partition partition;
  ExchangeResult result;
  SideAssignment sides;
};

/// Applies the exchange map to robots i and j of the partition. Robots are
/// reordered so the lower index plays the role of P_i. Without positions the
/// lower index always receives W_{a*}.
PairwiseExchange pairwise_exchange(const WeightedGraph& graph, const Partition& partition, RobotId i, RobotId j,
                                   const PhiWeights& phi, ExchangeBudget budget = {},
                                   std::optional<RobotPositions> positions = std::nullopt,
                                   const ExchangeResult* resume = nullptr);

}  // namespace gossip
