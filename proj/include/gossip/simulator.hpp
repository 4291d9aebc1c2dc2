#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/pairwise_rule.hpp"
#include "gossip/partition.hpp"

namespace gossip {

enum class RobotMode { kMoving, kWaiting, kRelocating };
enum class DestinationMode { kUniformRegion, kOpenBoundary };
enum class ExchangeRule { kGossipCoverage, kGossipLloyd };
enum class EventKind { kExchange, kMeetingNoChange, kArrival, kDeparture };

std::string to_string(DestinationMode mode);
std::string to_string(ExchangeRule rule);
std::string to_string(EventKind kind);
DestinationMode parse_destination_mode(const std::string& text);
ExchangeRule parse_exchange_rule(const std::string& text);

struct RobotState {
  RobotId id = 0;
  Vertex current_vertex = 0;  // last vertex occupied
  std::deque<Vertex> path;    // remaining vertices, excluding current_vertex
  double edge_progress = 0.0; // meters along the edge toward path.front()
  RobotMode mode = RobotMode::kWaiting;
  double wait_remaining = 0.0;
  bool busy = false;
};

struct SimConfig {
  double speed = 0.4;          // m/s
  double r_comm = 2.5;         // m, graph distance
  double lambda_comm = 0.3;    // meetings per second while in range
  double tau = 3.5;            // s, wait at each destination
  double dt = 0.1;             // s, integration step
  DestinationMode destination_mode = DestinationMode::kUniformRegion;
  ExchangeRule rule = ExchangeRule::kGossipCoverage;
  std::uint64_t exchange_budget = kUnlimitedPairs;
  std::uint64_t seed = 1;
  double max_time = 36'000.0;
  double convergence_window = 60.0;
  bool record_motion_events = true;

  /// Throws DomainError when a rate or duration is not positive, dt > tau, or
  /// r_comm does not exceed the largest edge weight.
  void validate(const WeightedGraph& graph) const;

  /// Applies `key = value` overrides; unknown keys throw FormatError.
  void apply(const std::map<std::string, std::string>& values);
};

struct SimEvent {
  double time = 0.0;
  EventKind kind = EventKind::kExchange;
  std::int64_t robot_i = -1;
  std::int64_t robot_j = -1;
  double h_exp = 0.0;  // after the event
};

struct SimTrace {
  std::vector<SimEvent> events;
  Partition final_partition;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_time = 0.0;
  std::uint64_t exchange_count = 0;   // meetings that changed the partition
  std::uint64_t meeting_count = 0;    // all meetings
  std::uint64_t meetings_to_last_change = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Poisson thinning: chance that an eligible pair meets during one step.
double meeting_probability(double lambda_comm, double dt);

/// Draws a destination uniformly from the region, or from its open boundary
/// (members with a neighbor outside the region). An empty boundary falls back
/// to the whole region.
Vertex sample_destination(std::mt19937_64& rng, const WeightedGraph& graph, const VertexSubset& region,
                          DestinationMode mode);

/// Vertices of the region adjacent to a vertex outside it.
std::vector<Vertex> open_boundary(const WeightedGraph& graph, const VertexSubset& region);

/// Called after every recorded event with the partition at that moment.
using EventObserver = std::function<void(const SimEvent&, const Partition&)>;

/// Robots wander their regions under the random destination and wait
/// protocol and exchange territory at Poisson-thinned meetings.
class Simulation {
 public:
  /// Robots start waiting (zero remaining) at `start_positions`, or at their
  /// region centroids when none are given.
  Simulation(const WeightedGraph& graph, Partition initial, const PhiWeights& phi, SimConfig config,
             std::optional<std::vector<Vertex>> start_positions = std::nullopt);

  /// Advances time by dt: motion first, then meeting resolution.
  void step();

  /// Steps until convergence or max_time.
  SimTrace run(const EventObserver& observer = {});

  /// In-range pairs (i < j), neither busy, at graph distance < r_comm.
  std::vector<std::pair<RobotId, RobotId>> eligible_pairs() const;

  double time() const { return time_; }
  const Partition& partition() const { return partition_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  double cost() const;
  bool converged() const { return converged_; }
  const SimTrace& trace() const { return trace_; }

 private:
  void advance_robot(RobotState& robot);
  void start_leg(RobotState& robot);
  void on_region_changed(RobotState& robot);
  void resolve_meetings();
  bool exchange(RobotId i, RobotId j);
  bool at_fixed_point() const;
  const DistanceMap& robot_distances(RobotId i) const;
  void record(EventKind kind, std::int64_t i, std::int64_t j);

  const WeightedGraph* graph_;
  const PhiWeights* phi_;
  SimConfig config_;
  Partition partition_;
  std::vector<RobotState> robots_;
  std::vector<double> region_costs_;
  std::mt19937_64 rng_;
  double time_ = 0.0;
  double last_change_time_ = 0.0;
  double next_check_time_ = 0.0;
  bool converged_ = false;
  double meet_probability_ = 0.0;
  std::map<std::pair<RobotId, RobotId>, std::uint64_t> cursors_;
  VertexSubset all_vertices_;
  std::uint64_t steps_ = 0;
  mutable std::vector<std::optional<DistanceMap>> distance_cache_;
  SimTrace trace_;
  const EventObserver* observer_ = nullptr;
};

/// Runs one seeded simulation and returns its trace.
SimTrace run(const WeightedGraph& graph, const Partition& initial, const PhiWeights& phi, const SimConfig& config,
             const EventObserver& observer = {});

}  // namespace gossip
