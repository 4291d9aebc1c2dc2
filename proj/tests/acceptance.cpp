// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/baselines.hpp"
#include "gossip/experiments.hpp"
#include "gossip/io.hpp"
#include "gossip/pairwise_rule.hpp"
#include "gossip/simulator.hpp"
#include "test_util.hpp"

using namespace gossip;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> body;
};

std::string printf_string(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// --- 1 ----------------------------------------------------------------------

Outcome two_by_five_golden() {
  const auto g = testutil::grid_2x5();
  const auto phi = PhiWeights::uniform(10);
  const Partition parts[3] = {testutil::rows_split(), testutil::columns_split(), testutil::l_split()};
  const double expected[3] = {1.2, 1.1, 1.0};
  const bool expected_po[3] = {false, false, true};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    const double c = h_exp(g, parts[k], phi);
    const bool po = is_pairwise_optimal(g, parts[k], phi);
    const bool cv = is_centroidal_voronoi(g, parts[k], phi);
    ok = ok && std::abs(c - expected[k]) <= 1e-9 && po == expected_po[k] && cv;
    detail += printf_string("%c: H=%.12g po=%d cv=%d; ", 'a' + k, c, po, cv);
  }
  return {ok, detail};
}

// --- 2 ----------------------------------------------------------------------

Outcome chernoff() {
  const auto k = chernoff_samples(0.1, 0.01);
  return {k == 116, printf_string("K=%llu", static_cast<unsigned long long>(k))};
}

// --- 3 ----------------------------------------------------------------------

// Random instance: a small connected graph, a connected 2- or 3-partition, and
// the pair (0, 1). With three regions the third one can offer shortcuts that
// the induced distances of U must ignore.
struct PairInstance {
  WeightedGraph graph;
  PhiWeights phi;
  Partition partition;
};

PairInstance random_pair_instance(std::mt19937_64& rng) {
  for (;;) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 14)(rng);
    const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    auto g = testutil::random_connected_graph(rng, n, extra, std::bernoulli_distribution(0.2)(rng));
    const std::size_t robots = n >= 6 && std::bernoulli_distribution(0.5)(rng) ? 3 : 2;
    auto p = testutil::random_connected_partition(rng, g, robots);
    const std::size_t u = p.region_size(0) + p.region_size(1);
    if (u > 12) continue;
    const auto adj = adjacency_edges(g, p);
    if (std::find(adj.begin(), adj.end(), std::pair<RobotId, RobotId>{0, 1}) == adj.end()) continue;
    auto phi = testutil::random_phi(rng, n);
    return {std::move(g), std::move(phi), std::move(p)};
  }
}

Outcome two_partition_oracle() {
  std::mt19937_64 rng(20240601);
  int matched = 0, disconnected = 0;
  const int instances = 250;
  std::string first_failure;
  for (int t = 0; t < instances; ++t) {
    const auto inst = random_pair_instance(rng);
    const auto& g = inst.graph;
    const auto pi = inst.partition.region(0);
    const auto pj = inst.partition.region(1);
    const auto r = optimal_two_partition(g, pi, pj, inst.phi, {});

    const auto u = set_union(pi, pj);
    const double incumbent = testutil::oracle_h_one(g, pi.members(), centroid(g, pi, inst.phi), inst.phi) +
                             testutil::oracle_h_one(g, pj.members(), centroid(g, pj, inst.phi), inst.phi);
    const double best = std::min(incumbent, testutil::oracle_best_two_partition(g, u.members(), inst.phi));
    // Weights and phi are multiples of 1/4, so both sides are exact sums.
    if (r.total_cost() == best) {
      ++matched;
    } else if (first_failure.empty()) {
      first_failure = printf_string(" first mismatch at %d: got %.17g want %.17g", t, r.total_cost(), best);
    }
    if (!is_connected(g, r.side_a) || !is_connected(g, r.side_b) || set_union(r.side_a, r.side_b) != u ||
        !disjoint(r.side_a, r.side_b)) {
      ++disconnected;
    }
  }
  return {matched == instances && disconnected == 0,
          printf_string("%d/%d exact matches, %d bad sides", matched, instances, disconnected) + first_failure};
}

// --- 4 ----------------------------------------------------------------------

bool identical(const ExchangeResult& a, const ExchangeResult& b) {
  return a.side_a == b.side_a && a.side_b == b.side_b && a.a_star == b.a_star && a.b_star == b.b_star &&
         same_bits(a.cost_a, b.cost_a) && same_bits(a.cost_b, b.cost_b) && a.improved == b.improved &&
         a.completed && b.completed && a.pair_count == b.pair_count;
}

Outcome anytime_equivalence() {
  std::mt19937_64 rng(777);
  int same = 0, improved = 0;
  const int instances = 80;
  for (int t = 0; t < instances; ++t) {
    const auto inst = random_pair_instance(rng);
    const auto pi = inst.partition.region(0);
    const auto pj = inst.partition.region(1);
    const auto full = optimal_two_partition(inst.graph, pi, pj, inst.phi, {});
    auto step = optimal_two_partition(inst.graph, pi, pj, inst.phi, {1, 0});
    std::uint64_t calls = 1;
    while (!step.completed) {
      step = optimal_two_partition(inst.graph, pi, pj, inst.phi, {1, step.next_cursor}, &step);
      ++calls;
    }
    if (identical(full, step) && calls == std::max<std::uint64_t>(full.pair_count, 1)) ++same;
    improved += full.improved;
  }
  return {same == instances,
          printf_string("%d/%d bit-identical (%d instances improved)", same, instances, improved)};
}

// --- 5 ----------------------------------------------------------------------

Outcome convergence_suite() {
  std::mt19937_64 rng(4242);
  const int runs = 60;
  int terminated = 0, monotone = 0, valid = 0, pairwise = 0, centroidal = 0;
  std::uint64_t exchanges = 0;
  for (int t = 0; t < runs; ++t) {
    const auto g = from_occupancy_grid(testutil::random_obstacle_grid(rng, 8, 8, 0.2), 0.6);
    const std::size_t robots = 2 + static_cast<std::size_t>(t % 4);
    const auto phi = PhiWeights::uniform(g.vertex_count());
    const auto initial = random_initial_partition(g, robots, 1000 + t);
    SimConfig cfg;
    cfg.seed = 5000 + t;
    cfg.destination_mode = t % 2 ? DestinationMode::kOpenBoundary : DestinationMode::kUniformRegion;

    Simulation sim(g, initial, phi, cfg);
    double last = sim.cost();
    bool mono = true, always_valid = true;
    const EventObserver observer = [&](const SimEvent& e, const Partition& p) {
      if (!p.validation_error(g).empty()) always_valid = false;
      if (e.kind == EventKind::kExchange) {
        if (!(e.h_exp < last)) mono = false;
      } else if (e.h_exp != last) {
        mono = false;
      }
      last = e.h_exp;
    };
    const auto trace = sim.run(observer);
    exchanges += trace.exchange_count;
    terminated += trace.converged;
    monotone += mono;
    valid += always_valid && trace.final_partition.validation_error(g).empty();
    pairwise += is_pairwise_optimal(g, trace.final_partition, phi);
    centroidal += is_centroidal_voronoi(g, trace.final_partition, phi);
  }
  const bool ok = terminated == runs && monotone == runs && valid == runs && pairwise == runs && centroidal == runs;
  return {ok, printf_string("runs=%d terminated=%d monotone=%d valid=%d pairwise-optimal=%d centroidal-voronoi=%d "
                            "exchanges=%llu",
                            runs, terminated, monotone, valid, pairwise, centroidal,
                            static_cast<unsigned long long>(exchanges))};
}

// --- 6 ----------------------------------------------------------------------

Outcome inclusion_strictness() {
  const auto g = testutil::grid_2x5();
  const auto phi = PhiWeights::uniform(10);
  int total = 0, po = 0, cv = 0, po_not_cv = 0;
  bool rows_witness = false, columns_witness = false;
  // Vertex 0 always belongs to robot 0, so each unordered split is seen once.
  for (unsigned mask = 1; mask < (1u << 10) - 1; mask += 2) {
    std::vector<RobotId> owner(10);
    for (Vertex v = 0; v < 10; ++v) owner[v] = (mask >> v) & 1u ? 0 : 1;
    const Partition p(owner, 2);
    if (!p.validation_error(g).empty()) continue;
    ++total;
    const bool is_po = is_pairwise_optimal(g, p, phi);
    const bool is_cv = is_centroidal_voronoi(g, p, phi);
    po += is_po;
    cv += is_cv;
    po_not_cv += is_po && !is_cv;
    if (p == testutil::rows_split()) rows_witness = is_cv && !is_po;
    if (p == testutil::columns_split()) columns_witness = is_cv && !is_po;
  }
  const bool ok = po_not_cv == 0 && po < cv && rows_witness && columns_witness;
  return {ok, printf_string("connected 2-partitions=%d pairwise-optimal=%d centroidal-voronoi=%d po-not-cv=%d "
                            "witnesses rows=%d columns=%d",
                            total, po, cv, po_not_cv, rows_witness, columns_witness)};
}

// --- 7 ----------------------------------------------------------------------

Outcome distributional_dominance(const fs::path& maps) {
  const auto g = io::load_environment(maps / "lab-like.grid");
  const auto phi = PhiWeights::uniform(g.vertex_count());
  const auto initial = random_initial_partition(g, 9, 3);
  CampaignSpec spec;
  spec.samples = chernoff_samples(0.1, 0.01);
  spec.base_seed = 1;
  spec.algorithm = Algorithm::kGossipCoverage;
  auto coverage = run_campaign(g, initial, phi, spec);
  spec.algorithm = Algorithm::kGossipLloyd;
  auto lloyd = run_campaign(g, initial, phi, spec);

  // Both histograms share the origin at the best final cost seen by either.
  double origin = coverage.runs.front().final_cost;
  for (const auto* rep : {&coverage, &lloyd})
    for (const auto& r : rep->runs) origin = std::min(origin, r.final_cost);
  rebin(coverage, origin, spec.histogram_bin_width);
  rebin(lloyd, origin, spec.histogram_bin_width);

  const bool ok = coverage.mean_final_cost < lloyd.mean_final_cost &&
                  coverage.lowest_bin_fraction > lloyd.lowest_bin_fraction;
  return {ok, printf_string("K=%zu initial=%.4f mean final: coverage=%.4f lloyd=%.4f; lowest bin [%.4f, %.4f): "
                            "coverage=%llu lloyd=%llu; mean exchanges coverage=%.1f lloyd=%.1f",
                            coverage.runs.size(), coverage.runs.front().initial_cost, coverage.mean_final_cost,
                            lloyd.mean_final_cost, origin, origin + spec.histogram_bin_width,
                            static_cast<unsigned long long>(coverage.histogram.origin_bin_count()),
                            static_cast<unsigned long long>(lloyd.histogram.origin_bin_count()),
                            coverage.mean_exchanges, lloyd.mean_exchanges)};
}

// --- 8 ----------------------------------------------------------------------

std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (!line.starts_with("wall_time=")) out += line + '\n';
  return out;
}

bool same_directory_contents(const fs::path& a, const fs::path& b, int& files) {
  files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other)) return false;
    if (strip_wall_time(io::read_file(entry.path())) != strip_wall_time(io::read_file(other))) return false;
    ++files;
  }
  return files > 0;
}

Outcome determinism(const fs::path& maps, const fs::path& cli) {
  std::string detail;
  bool ok = true;

  // Library level: full traces, including motion events.
  const auto g = io::load_environment(maps / "square-obstacles-12x12.grid");
  const auto phi = PhiWeights::uniform(g.vertex_count());
  const auto initial = random_initial_partition(g, 4, 9);
  SimConfig cfg;
  cfg.seed = 31337;
  const auto t1 = run(g, initial, phi, cfg);
  const auto t2 = run(g, initial, phi, cfg);
  const bool traces = format_trace_csv(t1) == format_trace_csv(t2) && t1.final_partition == t2.final_partition;
  ok = ok && traces;
  detail += printf_string("trace(%zu events)=%s ", t1.events.size(), traces ? "same" : "DIFFERENT");

  CampaignSpec spec;
  spec.samples = 8;
  const auto c1 = run_campaign(g, initial, phi, spec);
  spec.workers = 1;
  const auto c2 = run_campaign(g, initial, phi, spec);
  const bool campaigns = format_campaign_csv(c1) == format_campaign_csv(c2) &&
                         format_campaign_summary(c1) == format_campaign_summary(c2) &&
                         format_histogram_csv(c1.histogram) == format_histogram_csv(c2.histogram);
  ok = ok && campaigns;
  detail += printf_string("campaign=%s ", campaigns ? "same" : "DIFFERENT");

  // CLI level: output files, byte for byte apart from the wall-clock line.
  const fs::path work = fs::temp_directory_path() / ("gossip-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(work);
  auto invoke = [&](const std::string& args) {
    const std::string cmd = "\"" + cli.string() + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string env = "--env \"" + (maps / "square-obstacles-12x12.grid").string() + "\" --robots 4 --init-seed 9";
  for (const char* sub : {"run", "campaign"}) {
    const std::string extra = std::string(sub) == "campaign" ? " --samples 6" : "";
    const bool ran = invoke(std::string(sub) + " " + env + " --seed 5" + extra + " --out-dir \"" +
                            (work / (std::string(sub) + "1")).string() + "\"") &&
                     invoke(std::string(sub) + " " + env + " --seed 5" + extra + " --out-dir \"" +
                            (work / (std::string(sub) + "2")).string() + "\"");
    int files = 0;
    const bool same = ran && same_directory_contents(work / (std::string(sub) + "1"), work / (std::string(sub) + "2"), files);
    ok = ok && same;
    detail += printf_string("cli %s(%d files)=%s ", sub, files, same ? "same" : "DIFFERENT");
  }
  fs::remove_all(work);
  return {ok, detail};
}

// --- 9 ----------------------------------------------------------------------

Outcome complexity_smoke() {
  auto measure = [](std::size_t n) {
    const auto g = testutil::path_graph(n);
    const auto phi = PhiWeights::uniform(n);
    std::vector<RobotId> owner(n);
    for (std::size_t v = 0; v < n; ++v) owner[v] = v < n / 2 ? 0 : 1;
    const Partition p(owner, 2);
    return optimal_two_partition(g, p.region(0), p.region(1), phi, {});
  };
  bool ok = true;
  std::string detail;
  for (std::size_t n : {40, 80, 160}) {
    const auto small = measure(n);
    const auto large = measure(2 * n);
    const double pairs = static_cast<double>(large.pairs_evaluated) / static_cast<double>(small.pairs_evaluated);
    // one one-to-all search touches |U| vertices
    const double work = static_cast<double>(large.distance_computations * 2 * n) /
                        static_cast<double>(small.distance_computations * n);
    ok = ok && std::abs(pairs - 4.0) <= 0.4 && std::abs(work - 4.0) <= 0.4;
    detail += printf_string("|U| %zu->%zu: pairs x%.3f, distance work x%.3f; ", n, 2 * n, pairs, work);
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path maps = argc > 1 ? fs::path(argv[1]) : fs::path(GOSSIP_MAPS_DIR);
  const fs::path cli = argc > 2 ? fs::path(argv[2]) : fs::path(GOSSIP_CLI_PATH);

  const std::vector<Criterion> criteria = {
      {1, "2x5 golden costs and predicates", 1.0, two_by_five_golden},
      {2, "Chernoff sample count", 0.0, chernoff},
      {3, "two-partition oracle equivalence", 60.0, two_partition_oracle},
      {4, "anytime equivalence", 0.0, anytime_equivalence},
      {5, "convergence property suite", 300.0, convergence_suite},
      {6, "inclusion strictness", 10.0, inclusion_strictness},
      {7, "distributional dominance on lab-like.grid", 900.0, [&] { return distributional_dominance(maps); }},
      {8, "determinism", 0.0, [&] { return determinism(maps, cli); }},
      {9, "complexity smoke", 0.0, complexity_smoke},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += printf_string(" [over the %.0f s limit]", c.time_limit_s);
    }
    failures += !o.pass;
    std::printf("%s  %d. %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
