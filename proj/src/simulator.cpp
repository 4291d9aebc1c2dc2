#include "gossip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gossip/baselines.hpp"

namespace gossip {

namespace {

constexpr double kEps = 1e-9;

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw FormatError("invalid number for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const auto n = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return n;
  } catch (const std::exception&) {
    throw FormatError("invalid integer for " + key + ": '" + value + "'");
  }
}

}  // namespace

std::string to_string(DestinationMode mode) {
  return mode == DestinationMode::kUniformRegion ? "uniform" : "boundary";
}

std::string to_string(ExchangeRule rule) {
  return rule == ExchangeRule::kGossipCoverage ? "gossip-coverage" : "gossip-lloyd";
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kExchange: return "EXCHANGE";
    case EventKind::kMeetingNoChange: return "MEETING_NOCHANGE";
    case EventKind::kArrival: return "ARRIVAL";
    case EventKind::kDeparture: return "DEPARTURE";
  }
  return "?";
}

DestinationMode parse_destination_mode(const std::string& text) {
  if (text == "uniform" || text == "uniform-region") return DestinationMode::kUniformRegion;
  if (text == "boundary" || text == "open-boundary") return DestinationMode::kOpenBoundary;
  throw FormatError("unknown destination mode '" + text + "' (expected uniform or boundary)");
}

ExchangeRule parse_exchange_rule(const std::string& text) {
  if (text == "gossip-coverage") return ExchangeRule::kGossipCoverage;
  if (text == "gossip-lloyd") return ExchangeRule::kGossipLloyd;
  throw FormatError("unknown exchange rule '" + text + "'");
}

void SimConfig::validate(const WeightedGraph& graph) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
  };
  positive(speed, "speed");
  positive(tau, "tau");
  positive(dt, "dt");
  positive(max_time, "max_time");
  positive(convergence_window, "convergence_window");
  if (!(lambda_comm >= 0.0) || !std::isfinite(lambda_comm)) throw DomainError("lambda_comm must be nonnegative");
  if (dt > tau) throw DomainError("dt must not exceed tau");
  if (!(r_comm > graph.max_edge_weight())) {
    throw DomainError("r_comm must exceed the largest edge weight (" + std::to_string(graph.max_edge_weight()) + ")");
  }
  if (exchange_budget == 0) throw DomainError("exchange budget must be positive");
}

void SimConfig::apply(const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "speed") speed = parse_double(key, value);
    else if (key == "r_comm" || key == "rcomm") r_comm = parse_double(key, value);
    else if (key == "lambda_comm" || key == "lambda") lambda_comm = parse_double(key, value);
    else if (key == "tau") tau = parse_double(key, value);
    else if (key == "dt") dt = parse_double(key, value);
    else if (key == "destination_mode" || key == "dest_mode") destination_mode = parse_destination_mode(value);
    else if (key == "algorithm" || key == "rule") rule = parse_exchange_rule(value);
    else if (key == "exchange_budget" || key == "budget") {
      exchange_budget = value == "unlimited" ? kUnlimitedPairs : parse_count(key, value);
    } else if (key == "seed") seed = parse_count(key, value);
    else if (key == "max_time") max_time = parse_double(key, value);
    else if (key == "convergence_window") convergence_window = parse_double(key, value);
    else if (key == "record_motion_events") record_motion_events = value == "true" || value == "1";
    else throw FormatError("unknown config key '" + key + "'");
  }
}

double meeting_probability(double lambda_comm, double dt) { return -std::expm1(-lambda_comm * dt); }

std::vector<Vertex> open_boundary(const WeightedGraph& graph, const VertexSubset& region) {
  std::vector<Vertex> out;
  for (Vertex v : region.members()) {
    const auto nbrs = graph.neighbors(v);
    if (std::any_of(nbrs.begin(), nbrs.end(), [&](const Neighbor& n) { return !region.contains(n.vertex); })) {
      out.push_back(v);
    }
  }
  return out;
}

Vertex sample_destination(std::mt19937_64& rng, const WeightedGraph& graph, const VertexSubset& region,
                          DestinationMode mode) {
  if (region.empty()) throw DomainError("cannot sample a destination from an empty region");
  std::vector<Vertex> boundary;
  if (mode == DestinationMode::kOpenBoundary) boundary = open_boundary(graph, region);
  const std::vector<Vertex>& pool = boundary.empty() ? region.members() : boundary;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

Simulation::Simulation(const WeightedGraph& graph, Partition initial, const PhiWeights& phi, SimConfig config,
                       std::optional<std::vector<Vertex>> start_positions)
    : graph_(&graph),
      phi_(&phi),
      config_(config),
      partition_(std::move(initial)),
      rng_(config.seed),
      all_vertices_(VertexSubset::all(graph.vertex_count())) {
  config_.validate(graph);
  partition_.validate(graph);
  if (phi.size() != graph.vertex_count()) throw DomainError("phi size does not match the graph");
  const auto regions = partition_.regions();
  for (const auto& r : regions) region_costs_.push_back(region_cost(graph, r, phi).cost);
  if (start_positions && start_positions->size() != partition_.robot_count()) {
    throw DomainError("one start position per robot required");
  }
  for (RobotId i = 0; i < partition_.robot_count(); ++i) {
    RobotState r;
    r.id = i;
    if (start_positions) {
      if ((*start_positions)[i] >= graph.vertex_count()) throw DomainError("start position outside graph");
      r.current_vertex = (*start_positions)[i];
    } else {
      r.current_vertex = centroid(graph, regions[i], phi);
    }
    robots_.push_back(std::move(r));
  }
  distance_cache_.resize(robots_.size());
  meet_probability_ = meeting_probability(config_.lambda_comm, config_.dt);
  next_check_time_ = config_.convergence_window;
  trace_.seed = config_.seed;
  trace_.initial_cost = cost();
}

double Simulation::cost() const {
  double total = 0.0;
  for (double c : region_costs_) total += c;
  return total / phi_->total();
}

void Simulation::record(EventKind kind, std::int64_t i, std::int64_t j) {
  const bool motion = kind == EventKind::kArrival || kind == EventKind::kDeparture;
  if (motion && !config_.record_motion_events) return;
  SimEvent e{time_, kind, i, j, cost()};
  trace_.events.push_back(e);
  if (observer_ && *observer_) (*observer_)(e, partition_);
}

const DistanceMap& Simulation::robot_distances(RobotId i) const {
  auto& slot = distance_cache_[i];
  if (!slot || slot->source != robots_[i].current_vertex) {
    slot = one_to_all(*graph_, all_vertices_, robots_[i].current_vertex);
  }
  return *slot;
}

void Simulation::start_leg(RobotState& robot) {
  const VertexSubset region = partition_.region(robot.id);
  if (!region.contains(robot.current_vertex)) {
    on_region_changed(robot);
    return;
  }
  robot.edge_progress = 0.0;
  const Vertex dest = sample_destination(rng_, *graph_, region, config_.destination_mode);
  if (dest == robot.current_vertex) {
    // Sampling the current vertex means waiting another tau in place.
    robot.path.clear();
    robot.mode = RobotMode::kWaiting;
    robot.wait_remaining = config_.tau;
    return;
  }
  const auto path = shortest_path(*graph_, region, robot.current_vertex, dest);
  robot.path.assign(path.begin() + 1, path.end());
  robot.mode = RobotMode::kMoving;
  record(EventKind::kDeparture, robot.id, -1);
}

void Simulation::on_region_changed(RobotState& robot) {
  robot.edge_progress = 0.0;
  const VertexSubset region = partition_.region(robot.id);
  if (region.contains(robot.current_vertex)) {
    if (robot.mode != RobotMode::kWaiting) start_leg(robot);
    return;
  }
  // The robot gave away the vertex it stands on: head to the nearest vertex
  // of its new region through the whole environment.
  const DistanceMap& dist = robot_distances(robot.id);
  Vertex target = region.members().front();
  for (Vertex v : region.members()) {
    if (dist[v] < dist[target]) target = v;
  }
  const auto path = shortest_path(*graph_, all_vertices_, robot.current_vertex, target);
  robot.path.assign(path.begin() + 1, path.end());
  robot.mode = RobotMode::kRelocating;
  robot.wait_remaining = 0.0;
  record(EventKind::kDeparture, robot.id, -1);
}

void Simulation::advance_robot(RobotState& robot) {
  if (robot.mode == RobotMode::kWaiting) {
    robot.wait_remaining -= config_.dt;
    if (robot.wait_remaining <= kEps) start_leg(robot);
    return;
  }
  double budget = config_.speed * config_.dt;
  while (budget > 0.0 && !robot.path.empty()) {
    const double w = *graph_->edge_weight(robot.current_vertex, robot.path.front());
    const double need = w - robot.edge_progress;
    if (budget + kEps >= need) {
      robot.current_vertex = robot.path.front();
      robot.path.pop_front();
      robot.edge_progress = 0.0;
      budget -= need;
    } else {
      robot.edge_progress += budget;
      budget = 0.0;
    }
  }
  if (!robot.path.empty()) return;
  record(EventKind::kArrival, robot.id, -1);
  if (robot.mode == RobotMode::kRelocating) {
    start_leg(robot);
  } else {
    robot.mode = RobotMode::kWaiting;
    robot.wait_remaining = config_.tau;
  }
}

std::vector<std::pair<RobotId, RobotId>> Simulation::eligible_pairs() const {
  std::vector<std::pair<RobotId, RobotId>> out;
  for (RobotId i = 0; i < robots_.size(); ++i) {
    if (robots_[i].busy) continue;
    const DistanceMap& di = robot_distances(i);
    for (RobotId j = i + 1; j < robots_.size(); ++j) {
      if (robots_[j].busy) continue;
      if (di[robots_[j].current_vertex] < config_.r_comm) out.emplace_back(i, j);
    }
  }
  return out;
}

bool Simulation::exchange(RobotId i, RobotId j) {
  ++trace_.meeting_count;
  bool changed = false;
  if (config_.rule == ExchangeRule::kGossipCoverage) {
    const auto key = std::make_pair(i, j);
    const std::uint64_t cursor = cursors_.contains(key) ? cursors_[key] : 0;
    PairwiseExchange ex =
        pairwise_exchange(*graph_, partition_, i, j, *phi_, ExchangeBudget{config_.exchange_budget, cursor},
                          RobotPositions{robots_[i].current_vertex, robots_[j].current_vertex});
    if (ex.result.improved) {
      partition_ = std::move(ex.partition);
      changed = true;
      std::erase_if(cursors_, [&](const auto& kv) {
        return kv.first.first == i || kv.first.second == i || kv.first.first == j || kv.first.second == j;
      });
    } else {
      // An incomplete scan picks up where it stopped at the pair's next meeting.
      cursors_[key] = ex.result.completed ? 0 : ex.result.next_cursor;
    }
  } else {
    Partition next = gossip_lloyd_exchange(*graph_, partition_, i, j, *phi_);
    if (next != partition_) {
      partition_ = std::move(next);
      changed = true;
    }
  }

  if (!changed) {
    record(EventKind::kMeetingNoChange, i, j);
    return false;
  }
  region_costs_[i] = region_cost(*graph_, partition_.region(i), *phi_).cost;
  region_costs_[j] = region_cost(*graph_, partition_.region(j), *phi_).cost;
  ++trace_.exchange_count;
  trace_.meetings_to_last_change = trace_.meeting_count;
  last_change_time_ = time_;
  next_check_time_ = time_ + config_.convergence_window;
  record(EventKind::kExchange, i, j);
  on_region_changed(robots_[i]);
  on_region_changed(robots_[j]);
  return true;
}

void Simulation::resolve_meetings() {
  const auto pairs = eligible_pairs();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<RobotId, RobotId>> fired;
  // One draw per in-range pair, always, so the random stream does not depend
  // on which meetings end up blocked.
  for (const auto& p : pairs) {
    if (unit(rng_) < meet_probability_) fired.push_back(p);
  }
  for (const auto& [i, j] : fired) {
    if (robots_[i].busy || robots_[j].busy) continue;
    robots_[i].busy = true;
    robots_[j].busy = true;
    exchange(i, j);
  }
  for (auto& r : robots_) r.busy = false;
}

bool Simulation::at_fixed_point() const {
  if (config_.rule == ExchangeRule::kGossipCoverage) return is_pairwise_optimal(*graph_, partition_, *phi_);
  for (const auto& [i, j] : adjacency_edges(*graph_, partition_)) {
    if (gossip_lloyd_exchange(*graph_, partition_, i, j, *phi_) != partition_) return false;
  }
  return true;
}

void Simulation::step() {
  ++steps_;
  time_ = static_cast<double>(steps_) * config_.dt;
  for (auto& robot : robots_) advance_robot(robot);
  resolve_meetings();
  if (!converged_ && time_ + kEps >= next_check_time_) {
    if (at_fixed_point()) {
      converged_ = true;
    } else {
      next_check_time_ = time_ + config_.convergence_window;
    }
  }
}

SimTrace Simulation::run(const EventObserver& observer) {
  observer_ = &observer;
  if (partition_.robot_count() == 1) converged_ = true;
  while (!converged_ && time_ + kEps < config_.max_time) step();
  observer_ = nullptr;
  trace_.final_partition = partition_;
  trace_.final_cost = cost();
  trace_.final_time = time_;
  trace_.converged = converged_;
  return trace_;
}

SimTrace run(const WeightedGraph& graph, const Partition& initial, const PhiWeights& phi, const SimConfig& config,
             const EventObserver& observer) {
  Simulation sim(graph, initial, phi, config);
  return sim.run(observer);
}

}  // namespace gossip
