#include "gossip/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "gossip/baselines.hpp"

namespace gossip {

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGossipCoverage: return "gossip-coverage";
    case Algorithm::kGossipLloyd: return "gossip-lloyd";
    case Algorithm::kDecentralizedLloyd: return "decentralized-lloyd";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "gossip-coverage") return Algorithm::kGossipCoverage;
  if (text == "gossip-lloyd") return Algorithm::kGossipLloyd;
  if (text == "decentralized-lloyd") return Algorithm::kDecentralizedLloyd;
  throw FormatError("unknown algorithm '" + text + "'");
}

std::uint64_t chernoff_samples(double epsilon, double eta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  const double bound = std::log10(2.0 / eta) / (2.0 * epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

std::vector<Vertex> random_generators(const WeightedGraph& graph, std::size_t robots, std::uint64_t seed) {
  const std::size_t n = graph.vertex_count();
  if (robots == 0) throw DomainError("need at least one robot");
  if (robots > n) {
    throw DomainError("cannot place " + std::to_string(robots) + " robots on " + std::to_string(n) + " vertices");
  }
  std::mt19937_64 rng(seed);
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  // Partial Fisher-Yates: the first `robots` slots are the sample.
  for (std::size_t k = 0; k < robots; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(robots);
  return pool;
}

Partition random_initial_partition(const WeightedGraph& graph, std::size_t robots, std::uint64_t seed) {
  return voronoi_partition(graph, random_generators(graph, robots, seed));
}

std::uint64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::uint64_t Histogram::origin_bin_count() const {
  const std::int64_t k = -first_bin;
  if (k < 0 || k >= static_cast<std::int64_t>(counts.size())) return 0;
  return counts[static_cast<std::size_t>(k)];
}

namespace {

std::int64_t bin_of(double value, double origin, double width) {
  return static_cast<std::int64_t>(std::floor((value - origin) / width + 1e-9));
}

}  // namespace

Histogram make_histogram(const std::vector<double>& values, double origin, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("histogram bin width must be positive");
  Histogram h;
  h.origin = origin;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  std::int64_t lo = bin_of(values.front(), origin, bin_width);
  std::int64_t hi = lo;
  for (double v : values) {
    lo = std::min(lo, bin_of(v, origin, bin_width));
    hi = std::max(hi, bin_of(v, origin, bin_width));
  }
  h.first_bin = lo;
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double v : values) ++h.counts[static_cast<std::size_t>(bin_of(v, origin, bin_width) - lo)];
  return h;
}

void CampaignSpec::validate() const {
  if (samples == 0) throw DomainError("campaign needs at least one sample");
  if (!(histogram_bin_width > 0.0)) throw DomainError("histogram bin width must be positive");
  if (epsilon.has_value() != eta.has_value()) throw DomainError("epsilon and eta must be given together");
  if (epsilon && samples < chernoff_samples(*epsilon, *eta)) {
    throw DomainError("K=" + std::to_string(samples) + " is below the Chernoff bound " +
                      std::to_string(chernoff_samples(*epsilon, *eta)));
  }
}

namespace {

RunSummary summarize(std::uint64_t index, const WeightedGraph& graph, const PhiWeights& phi, const SimTrace& trace) {
  RunSummary s;
  s.run_index = index;
  s.seed = trace.seed;
  s.initial_cost = trace.initial_cost;
  s.final_cost = trace.final_cost;
  s.exchanges = trace.exchange_count;
  s.meetings = trace.meeting_count;
  s.meetings_to_last_change = trace.meetings_to_last_change;
  s.final_time = trace.final_time;
  s.converged = trace.converged;
  s.final_partition = trace.final_partition;
  s.pairwise_optimal = is_pairwise_optimal(graph, trace.final_partition, phi);
  s.centroidal_voronoi = is_centroidal_voronoi(graph, trace.final_partition, phi);
  return s;
}

}  // namespace

void rebin(CampaignReport& report, double origin, double bin_width) {
  std::vector<double> costs;
  for (const auto& r : report.runs) costs.push_back(r.final_cost);
  report.histogram = make_histogram(costs, origin, bin_width);
  const double k = static_cast<double>(report.runs.size());
  report.lowest_bin_fraction = k > 0 ? static_cast<double>(report.histogram.origin_bin_count()) / k : 0.0;
}

CampaignReport run_campaign(const WeightedGraph& graph, const Partition& initial, const PhiWeights& phi,
                            const CampaignSpec& spec) {
  spec.validate();
  spec.sim.validate(graph);
  initial.validate(graph);

  CampaignReport report;
  report.algorithm = spec.algorithm;
  report.runs.resize(spec.samples);

  if (spec.algorithm == Algorithm::kDecentralizedLloyd) {
    const LloydRun lloyd = run_decentralized_lloyd(graph, centroids(graph, initial, phi), phi);
    for (std::uint64_t k = 0; k < spec.samples; ++k) {
      SimTrace t;
      t.seed = spec.base_seed + k;
      t.initial_cost = h_exp(graph, initial, phi);
      t.final_partition = lloyd.partition;
      t.final_cost = h_exp(graph, lloyd.partition, phi);
      t.exchange_count = lloyd.rounds;
      t.converged = lloyd.converged;
      report.runs[k] = summarize(k, graph, phi, t);
    }
  } else {
    SimConfig base = spec.sim;
    base.rule = spec.algorithm == Algorithm::kGossipCoverage ? ExchangeRule::kGossipCoverage
                                                             : ExchangeRule::kGossipLloyd;
    base.record_motion_events = false;
    unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, spec.samples));

    std::atomic<std::uint64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
      for (;;) {
        const std::uint64_t k = next.fetch_add(1);
        if (k >= spec.samples) return;
        try {
          SimConfig cfg = base;
          cfg.seed = spec.base_seed + k;
          const SimTrace trace = run(graph, initial, phi, cfg);
          report.runs[k] = summarize(k, graph, phi, trace);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = spec.samples;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  for (const auto& r : report.runs) {
    if (auto err = r.final_partition.validation_error(graph); !err.empty()) {
      throw InvalidPartitionError("run " + std::to_string(r.run_index) + " (seed " + std::to_string(r.seed) +
                                  ") ended with an invalid partition: " + err);
    }
  }

  double cost_sum = 0.0;
  double exchange_sum = 0.0;
  double meeting_sum = 0.0;
  double min_cost = report.runs.front().final_cost;
  for (const auto& r : report.runs) {
    cost_sum += r.final_cost;
    exchange_sum += static_cast<double>(r.exchanges);
    meeting_sum += static_cast<double>(r.meetings_to_last_change);
    min_cost = std::min(min_cost, r.final_cost);
    if (r.converged) ++report.converged_runs;
  }
  const double k = static_cast<double>(report.runs.size());
  report.mean_final_cost = cost_sum / k;
  report.mean_exchanges = exchange_sum / k;
  report.mean_meetings_to_last_change = meeting_sum / k;
  rebin(report, spec.histogram_origin.value_or(min_cost), spec.histogram_bin_width);
  return report;
}

std::string format_campaign_csv(const CampaignReport& report) {
  std::string out =
      "run,seed,initial_cost,final_cost,exchanges,meetings,meetings_to_last_change,final_time,converged,"
      "pairwise_optimal,centroidal_voronoi\n";
  for (const auto& r : report.runs) {
    out += std::to_string(r.run_index) + ',' + std::to_string(r.seed) + ',' + fmt("%.9f", r.initial_cost) + ',' +
           fmt("%.9f", r.final_cost) + ',' + std::to_string(r.exchanges) + ',' + std::to_string(r.meetings) + ',' +
           std::to_string(r.meetings_to_last_change) + ',' + fmt("%.1f", r.final_time) + ',' +
           (r.converged ? "1" : "0") + ',' + (r.pairwise_optimal ? "1" : "0") + ',' +
           (r.centroidal_voronoi ? "1" : "0") + '\n';
  }
  return out;
}

std::string format_histogram_csv(const Histogram& histogram) {
  std::string out = "bin_lower,bin_upper,count\n";
  for (std::size_t k = 0; k < histogram.counts.size(); ++k) {
    out += fmt("%.6f", histogram.lower_edge(k)) + ',' + fmt("%.6f", histogram.lower_edge(k) + histogram.bin_width) +
           ',' + std::to_string(histogram.counts[k]) + '\n';
  }
  return out;
}

std::string format_campaign_summary(const CampaignReport& report) {
  std::uint64_t pairwise = 0;
  std::uint64_t centroidal = 0;
  for (const auto& r : report.runs) {
    pairwise += r.pairwise_optimal;
    centroidal += r.centroidal_voronoi;
  }
  std::string out;
  out += "algorithm=" + to_string(report.algorithm) + '\n';
  out += "runs=" + std::to_string(report.runs.size()) + '\n';
  out += "base_seed=" + std::to_string(report.runs.empty() ? 0 : report.runs.front().seed) + '\n';
  out += "converged_runs=" + std::to_string(report.converged_runs) + '\n';
  out += "pairwise_optimal_runs=" + std::to_string(pairwise) + '\n';
  out += "centroidal_voronoi_runs=" + std::to_string(centroidal) + '\n';
  out += "mean_final_cost=" + fmt("%.9f", report.mean_final_cost) + '\n';
  out += "mean_exchanges=" + fmt("%.4f", report.mean_exchanges) + '\n';
  out += "mean_meetings_to_last_change=" + fmt("%.4f", report.mean_meetings_to_last_change) + '\n';
  out += "histogram_origin=" + fmt("%.6f", report.histogram.origin) + '\n';
  out += "histogram_bin_width=" + fmt("%.6f", report.histogram.bin_width) + '\n';
  out += "lowest_bin_hits=" + std::to_string(report.histogram.origin_bin_count()) + '\n';
  out += "lowest_bin_fraction=" + fmt("%.6f", report.lowest_bin_fraction) + '\n';
  return out;
}

std::string format_trace_csv(const SimTrace& trace) {
  std::string out = "time,kind,robot_i,robot_j,h_exp\n";
  for (const auto& e : trace.events) {
    out += fmt("%.3f", e.time) + ',' + to_string(e.kind) + ',' + std::to_string(e.robot_i) + ',' +
           std::to_string(e.robot_j) + ',' + fmt("%.9f", e.h_exp) + '\n';
  }
  return out;
}

std::string format_run_summary(const SimTrace& trace, double wall_time_seconds) {
  std::string out;
  out += "seed=" + std::to_string(trace.seed) + '\n';
  out += "exchanges=" + std::to_string(trace.exchange_count) + '\n';
  out += "meetings=" + std::to_string(trace.meeting_count) + '\n';
  out += "converged=" + std::string(trace.converged ? "true" : "false") + '\n';
  out += "initial_cost=" + fmt("%.9f", trace.initial_cost) + '\n';
  out += "final_cost=" + fmt("%.9f", trace.final_cost) + '\n';
  out += "final_time=" + fmt("%.3f", trace.final_time) + '\n';
  out += "wall_time=" + fmt("%.3f", wall_time_seconds) + '\n';
  return out;
}

}  // namespace gossip
