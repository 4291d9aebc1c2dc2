#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "gossip/errors.hpp"
#include "gossip/simulator.hpp"
#include "test_util.hpp"

using namespace gossip;
using testutil::rows_split;
using testutil::l_split;
using testutil::grid_2x5;
using testutil::path_graph;

namespace {

SimConfig quiet_config() {
  SimConfig c;
  c.lambda_comm = 0.0;
  c.destination_mode = DestinationMode::kOpenBoundary;
  c.max_time = 100.0;
  return c;
}

// Path of 10, robot 0 owns the left half: its open boundary is vertex 4 alone,
// so a robot starting at 0 must walk exactly 4 edges.
std::size_t steps_to_walk(double weight, double speed) {
  const auto g = path_graph(10, weight);
  const auto phi = PhiWeights::uniform(10);
  auto cfg = quiet_config();
  cfg.speed = speed;
  cfg.r_comm = weight * 1.5;
  Simulation sim(g, Partition({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2), phi, cfg, std::vector<Vertex>{0, 9});
  sim.step();  // wait of zero expires, leg toward 4 is planned
  REQUIRE(sim.robots()[0].mode == RobotMode::kMoving);
  std::size_t steps = 0;
  while (sim.robots()[0].mode == RobotMode::kMoving) {
    sim.step();
    ++steps;
    REQUIRE(steps < 100000);
  }
  CHECK(sim.robots()[0].current_vertex == 4);
  CHECK(sim.robots()[0].mode == RobotMode::kWaiting);
  return steps;
}

}  // namespace

TEST_CASE("meeting probability from Poisson thinning") {
  CHECK(meeting_probability(0.3, 0.1) == doctest::Approx(0.02955).epsilon(1e-4));
  CHECK(meeting_probability(0.3, 0.1) == doctest::Approx(1.0 - std::exp(-0.03)).epsilon(1e-14));
  CHECK(meeting_probability(0.0, 0.1) == 0.0);
}

TEST_CASE("travel takes ceil(L / (v dt)) steps") {
  CHECK(steps_to_walk(1.0, 0.4) == 100);
  CHECK(steps_to_walk(0.6, 0.4) == 60);
  CHECK(steps_to_walk(1.0, 0.35) == 115);  // 4 / 0.035 = 114.3
  CHECK(steps_to_walk(3.0, 0.5) == 240);
}

TEST_CASE("eligibility uses strict graph distance") {
  const auto g = path_graph(5);
  const auto phi = PhiWeights::uniform(5);
  auto cfg = quiet_config();
  cfg.r_comm = 2.0;
  const Partition p({0, 0, 1, 1, 1}, 2);
  CHECK(Simulation(g, p, phi, cfg, std::vector<Vertex>{0, 2}).eligible_pairs().empty());
  CHECK(Simulation(g, p, phi, cfg, std::vector<Vertex>{1, 2}).eligible_pairs().size() == 1);
  CHECK(Simulation(g, p, phi, cfg, std::vector<Vertex>{3, 3}).eligible_pairs().size() == 1);
}

TEST_CASE("zero meeting rate never exchanges") {
  const auto g = grid_2x5();
  const auto phi = PhiWeights::uniform(10);
  auto cfg = quiet_config();
  cfg.max_time = 300.0;
  const auto trace = run(g, rows_split(), phi, cfg);
  CHECK(trace.exchange_count == 0);
  CHECK(trace.meeting_count == 0);
  CHECK(trace.final_partition == rows_split());
  CHECK_FALSE(trace.converged);
  CHECK(trace.final_time == doctest::Approx(300.0));
}

TEST_CASE("single robot converges immediately") {
  const auto g = grid_2x5();
  const auto phi = PhiWeights::uniform(10);
  const Partition whole(std::vector<RobotId>(10, 0), 1);
  const auto trace = run(g, whole, phi, SimConfig{});
  CHECK(trace.converged);
  CHECK(trace.exchange_count == 0);
  CHECK(trace.final_time == 0.0);
  const double expected = h_one(g, VertexSubset::all(10), centroid(g, VertexSubset::all(10), phi), phi) / 10.0;
  CHECK(trace.initial_cost == doctest::Approx(expected));
  CHECK(trace.final_cost == doctest::Approx(expected));
}

TEST_CASE("rows of the two-by-five grid converge to the optimum") {
  for (DestinationMode mode : {DestinationMode::kUniformRegion, DestinationMode::kOpenBoundary}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = grid_2x5();
      const auto phi = PhiWeights::uniform(10);
      SimConfig cfg;
      cfg.seed = seed;
      cfg.destination_mode = mode;
      const auto trace = run(g, rows_split(), phi, cfg);
      CHECK(trace.converged);
      CHECK(trace.initial_cost == doctest::Approx(1.2));
      CHECK(trace.final_cost == doctest::Approx(1.0));
      CHECK(is_pairwise_optimal(g, trace.final_partition, phi));
    }
  }
}

TEST_CASE("gossip Lloyd stays at a centroidal Voronoi partition") {
  const auto g = grid_2x5();
  const auto phi = PhiWeights::uniform(10);
  SimConfig cfg;
  cfg.rule = ExchangeRule::kGossipLloyd;
  const auto trace = run(g, rows_split(), phi, cfg);
  CHECK(trace.converged);
  CHECK(trace.exchange_count == 0);
  CHECK(trace.final_cost == doctest::Approx(1.2));
}

TEST_CASE("traces are deterministic") {
  std::mt19937_64 rng(4);
  const auto g = from_occupancy_grid(testutil::random_obstacle_grid(rng, 8, 8, 0.2), 1.0);
  const auto phi = PhiWeights::uniform(g.vertex_count());
  const auto p = testutil::random_connected_partition(rng, g, 4);
  SimConfig cfg;
  cfg.seed = 99;
  cfg.r_comm = 3.5;
  const auto a = run(g, p, phi, cfg);
  const auto b = run(g, p, phi, cfg);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    CHECK(a.events[k].time == b.events[k].time);
    CHECK(a.events[k].kind == b.events[k].kind);
    CHECK(a.events[k].robot_i == b.events[k].robot_i);
    CHECK(a.events[k].h_exp == b.events[k].h_exp);
  }
  CHECK(a.final_partition == b.final_partition);
}

TEST_CASE("budgeted exchanges still converge to a pairwise-optimal partition") {
  std::mt19937_64 rng(12);
  const auto g = from_occupancy_grid(testutil::random_obstacle_grid(rng, 6, 6, 0.15), 1.0);
  const auto phi = PhiWeights::uniform(g.vertex_count());
  const auto p = testutil::random_connected_partition(rng, g, 3);
  SimConfig cfg;
  cfg.exchange_budget = 5;
  cfg.r_comm = 3.5;
  cfg.lambda_comm = 2.0;
  const auto trace = run(g, p, phi, cfg);
  CHECK(trace.converged);
  CHECK(is_pairwise_optimal(g, trace.final_partition, phi));
}

TEST_CASE("open boundary and destination sampling") {
  const auto g = grid_2x5();
  const auto p = l_split();
  CHECK(open_boundary(g, p.region(0)) == std::vector<Vertex>{2, 6});
  CHECK(open_boundary(g, rows_split().region(0)).size() == 5);
  CHECK(open_boundary(g, VertexSubset::all(10)).empty());

  std::mt19937_64 rng(1);
  std::map<Vertex, int> hits;
  for (int k = 0; k < 4000; ++k) hits[sample_destination(rng, g, p.region(0), DestinationMode::kOpenBoundary)]++;
  CHECK(hits.size() == 2);
  CHECK(std::abs(hits[2] - 2000) < 200);

  hits.clear();
  for (int k = 0; k < 5000; ++k) hits[sample_destination(rng, g, VertexSubset::all(10), DestinationMode::kOpenBoundary)]++;
  CHECK(hits.size() == 10);
  for (const auto& [v, n] : hits) CHECK(std::abs(n - 500) < 120);

  VertexSubset single(10);
  single.insert(7);
  CHECK(sample_destination(rng, g, single, DestinationMode::kUniformRegion) == 7);
  CHECK(sample_destination(rng, g, single, DestinationMode::kOpenBoundary) == 7);
  CHECK_THROWS_AS(sample_destination(rng, g, VertexSubset(10), DestinationMode::kUniformRegion), DomainError);
}

TEST_CASE("config validation and overrides") {
  const auto g = grid_2x5(0.6);
  SimConfig c;
  CHECK_NOTHROW(c.validate(g));
  c.r_comm = 0.6;
  CHECK_THROWS_AS(c.validate(g), DomainError);
  c = SimConfig{};
  c.dt = 4.0;
  CHECK_THROWS_AS(c.validate(g), DomainError);
  c = SimConfig{};
  c.speed = 0.0;
  CHECK_THROWS_AS(c.validate(g), DomainError);
  c = SimConfig{};
  c.lambda_comm = -1.0;
  CHECK_THROWS_AS(c.validate(g), DomainError);

  c = SimConfig{};
  c.apply({{"lambda", "0.5"}, {"dest_mode", "boundary"}, {"budget", "unlimited"}, {"algorithm", "gossip-lloyd"},
           {"seed", "7"}});
  CHECK(c.lambda_comm == 0.5);
  CHECK(c.destination_mode == DestinationMode::kOpenBoundary);
  CHECK(c.exchange_budget == kUnlimitedPairs);
  CHECK(c.rule == ExchangeRule::kGossipLloyd);
  CHECK(c.seed == 7);
  CHECK_THROWS_AS(c.apply({{"warp", "9"}}), FormatError);
  CHECK_THROWS_AS(c.apply({{"tau", "soon"}}), FormatError);

  SimConfig bad;
  bad.r_comm = 0.5;
  CHECK_THROWS_AS(Simulation(g, rows_split(), PhiWeights::uniform(10), bad), DomainError);
}
