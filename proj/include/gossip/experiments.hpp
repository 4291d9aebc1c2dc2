#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/partition.hpp"
#include "gossip/simulator.hpp"

namespace gossip {

enum class Algorithm { kGossipCoverage, kGossipLloyd, kDecentralizedLloyd };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& text);

/// Smallest K with K >= log(2/eta) / (2 eps^2), logarithm base 10 (the
/// convention that yields 116 samples for eps = 0.1,
/// eta = 0.01). Throws DomainError unless eps, eta are in (0, 1).
std::uint64_t chernoff_samples(double epsilon, double eta);

/// N distinct vertices drawn without replacement, then their Voronoi partition.
Partition random_initial_partition(const WeightedGraph& graph, std::size_t robots, std::uint64_t seed);

/// Same draw as random_initial_partition, returning the generators.
std::vector<Vertex> random_generators(const WeightedGraph& graph, std::size_t robots, std::uint64_t seed);

struct Histogram {
  double origin = 0.0;
  double bin_width = 0.1;
  std::int64_t first_bin = 0;       // index of counts[0]
  std::vector<std::uint64_t> counts;

  double lower_edge(std::size_t k) const { return origin + static_cast<double>(first_bin + static_cast<std::int64_t>(k)) * bin_width; }
  std::uint64_t total() const;
  /// Count in the bin [origin, origin + bin_width).
  std::uint64_t origin_bin_count() const;
};

/// Bins are [origin + k w, origin + (k+1) w) for integer k (negative allowed),
/// spanning the smallest to the largest value.
Histogram make_histogram(const std::vector<double>& values, double origin, double bin_width);

struct CampaignSpec {
  Algorithm algorithm = Algorithm::kGossipCoverage;
  std::uint64_t samples = 116;             // K
  std::optional<double> epsilon;           // when both set, K >= chernoff_samples
  std::optional<double> eta;
  std::uint64_t base_seed = 1;
  double histogram_bin_width = 0.10;
  std::optional<double> histogram_origin;  // default: smallest final cost
  unsigned workers = 0;                    // 0: hardware concurrency
  SimConfig sim;                           // seed is replaced per run

  void validate() const;
};

struct RunSummary {
  std::uint64_t run_index = 0;
  std::uint64_t seed = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::uint64_t exchanges = 0;
  std::uint64_t meetings = 0;
  std::uint64_t meetings_to_last_change = 0;
  double final_time = 0.0;
  bool converged = false;
  bool pairwise_optimal = false;
  bool centroidal_voronoi = false;
  Partition final_partition;
};

struct CampaignReport {
  Algorithm algorithm = Algorithm::kGossipCoverage;
  std::vector<RunSummary> runs;  // sorted by run index
  Histogram histogram;
  double mean_final_cost = 0.0;
  double mean_exchanges = 0.0;
  double mean_meetings_to_last_change = 0.0;
  double lowest_bin_fraction = 0.0;  // share of runs in the origin bin
  std::uint64_t converged_runs = 0;
};

/// Runs K seeded simulations (seed = base_seed + k) of the chosen algorithm
/// from the same initial partition, in parallel. Decentralized Lloyd is
/// deterministic, so every one of its runs repeats the same trajectory.
/// Throws InvalidPartitionError if any final partition is invalid.
CampaignReport run_campaign(const WeightedGraph& graph, const Partition& initial, const PhiWeights& phi,
                            const CampaignSpec& spec);

/// Recomputes histogram and summary fields from `runs` with a new origin.
void rebin(CampaignReport& report, double origin, double bin_width);

std::string format_campaign_csv(const CampaignReport& report);
std::string format_histogram_csv(const Histogram& histogram);
std::string format_campaign_summary(const CampaignReport& report);

std::string format_trace_csv(const SimTrace& trace);
/// `key=value` lines: exchanges, converged, final_cost, wall_time (seconds).
std::string format_run_summary(const SimTrace& trace, double wall_time_seconds);

}  // namespace gossip
