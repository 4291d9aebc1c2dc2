// Command-line front end for the gossip coverage library.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gossip/baselines.hpp"
#include "gossip/experiments.hpp"
#include "gossip/io.hpp"
#include "gossip/simulator.hpp"

namespace fs = std::filesystem;
using namespace gossip;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

struct EnvironmentOptions {
  std::string env_path;
  std::string partition_path;
  std::string phi_path;
  std::size_t robots = 0;
  std::uint64_t init_seed = 1;
};

struct SimOptions {
  std::string config_path;
  std::optional<double> dt, tau, rcomm, lambda, speed, max_time, window;
  std::optional<std::uint64_t> seed;
  std::string algorithm = "gossip-coverage";
  std::optional<std::string> dest_mode;
  std::optional<std::string> budget;
};

void add_environment_options(CLI::App* cmd, EnvironmentOptions& o, bool need_partition) {
  cmd->add_option("--env", o.env_path, "Environment: grid file, or edge list with .edges extension")->required();
  auto* p = cmd->add_option("--partition", o.partition_path, "Partition file (N=<robots> header, 'vertex owner' lines)");
  cmd->add_option("--phi", o.phi_path, "Optional per-vertex priority file ('vertex value' lines)");
  if (need_partition) {
    p->required();
  } else {
    cmd->add_option("--robots", o.robots, "Robot count for a random Voronoi initial partition")->excludes(p);
    cmd->add_option("--init-seed", o.init_seed, "Seed for the random initial partition");
  }
}

void add_sim_options(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--dt", o.dt, "Integration step (s)");
  cmd->add_option("--tau", o.tau, "Wait time at each destination (s)");
  cmd->add_option("--rcomm", o.rcomm, "Communication range (m, graph distance)");
  cmd->add_option("--lambda", o.lambda, "Meeting intensity while in range (1/s)");
  cmd->add_option("--speed", o.speed, "Robot speed (m/s)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--algorithm", o.algorithm, "gossip-coverage | gossip-lloyd | decentralized-lloyd")
      ->check(CLI::IsMember({"gossip-coverage", "gossip-lloyd", "decentralized-lloyd"}));
  cmd->add_option("--dest-mode", o.dest_mode, "uniform | boundary")->check(CLI::IsMember({"uniform", "boundary"}));
  cmd->add_option("--budget", o.budget, "Candidate pairs per exchange, or 'unlimited'");
  cmd->add_option("--max-time", o.max_time, "Simulated time limit (s)");
  cmd->add_option("--window", o.window, "Quiescence window before convergence checks (s)");
}

SimConfig build_config(const SimOptions& o) {
  SimConfig cfg;
  if (!o.config_path.empty()) cfg.apply(io::parse_key_values(io::read_file(o.config_path)));
  if (o.dt) cfg.dt = *o.dt;
  if (o.tau) cfg.tau = *o.tau;
  if (o.rcomm) cfg.r_comm = *o.rcomm;
  if (o.lambda) cfg.lambda_comm = *o.lambda;
  if (o.speed) cfg.speed = *o.speed;
  if (o.seed) cfg.seed = *o.seed;
  if (o.max_time) cfg.max_time = *o.max_time;
  if (o.window) cfg.convergence_window = *o.window;
  if (o.dest_mode) cfg.destination_mode = parse_destination_mode(*o.dest_mode);
  if (o.budget) cfg.apply({{"budget", *o.budget}});
  if (o.algorithm != "decentralized-lloyd") cfg.rule = parse_exchange_rule(o.algorithm);
  return cfg;
}

struct Loaded {
  WeightedGraph graph;
  PhiWeights phi;
  std::optional<Partition> partition;
};

Loaded load(const EnvironmentOptions& o) {
  if (!fs::exists(o.env_path)) throw std::runtime_error("environment file not found: " + o.env_path);
  Loaded l{io::load_environment(o.env_path), {}, std::nullopt};
  l.phi = o.phi_path.empty() ? PhiWeights::uniform(l.graph.vertex_count())
                             : io::parse_phi(io::read_file(o.phi_path), l.graph.vertex_count());
  if (!o.partition_path.empty()) {
    l.partition = io::parse_partition(io::read_file(o.partition_path), l.graph.vertex_count());
  } else if (o.robots > 0) {
    l.partition = random_initial_partition(l.graph, o.robots, o.init_seed);
  }
  return l;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

fs::path prepare_out_dir(const std::string& dir) {
  fs::path out = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(out);
  return out;
}

int cmd_run(const EnvironmentOptions& env, const SimOptions& so, const std::string& out_dir) {
  Loaded l = load(env);
  if (!l.partition) throw CLI::ValidationError("run", "need --partition or --robots");
  l.partition->validate(l.graph);
  const SimConfig cfg = build_config(so);
  const fs::path out = prepare_out_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();

  SimTrace trace;
  if (so.algorithm == "decentralized-lloyd") {
    const LloydRun lloyd = run_decentralized_lloyd(l.graph, centroids(l.graph, *l.partition, l.phi), l.phi);
    trace.seed = cfg.seed;
    trace.initial_cost = h_exp(l.graph, *l.partition, l.phi);
    for (std::size_t r = 0; r < lloyd.costs.size(); ++r) {
      trace.events.push_back({static_cast<double>(r + 1), EventKind::kExchange, -1, -1, lloyd.costs[r]});
    }
    trace.final_partition = lloyd.partition;
    trace.final_cost = h_exp(l.graph, lloyd.partition, l.phi);
    trace.exchange_count = lloyd.rounds;
    trace.final_time = static_cast<double>(lloyd.rounds);
    trace.converged = lloyd.converged;
  } else {
    trace = run(l.graph, *l.partition, l.phi, cfg);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::write_file(out / "trace.csv", format_trace_csv(trace));
  io::write_file(out / "final.partition", io::format_partition(trace.final_partition));
  const std::string summary = format_run_summary(trace, wall);
  io::write_file(out / "summary.txt", summary);
  std::cout << summary;
  if (auto err = trace.final_partition.validation_error(l.graph); !err.empty()) {
    std::cerr << "invariant violation: " << err << '\n';
    return kExitInvariant;
  }
  return 0;
}

int cmd_campaign(const EnvironmentOptions& env, const SimOptions& so, const std::string& out_dir,
                 CampaignSpec spec) {
  Loaded l = load(env);
  if (!l.partition) throw CLI::ValidationError("campaign", "need --partition or --robots");
  l.partition->validate(l.graph);
  spec.sim = build_config(so);
  spec.algorithm = parse_algorithm(so.algorithm);
  spec.base_seed = so.seed.value_or(spec.base_seed);
  const fs::path out = prepare_out_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();
  const CampaignReport report = run_campaign(l.graph, *l.partition, l.phi, spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::write_file(out / "campaign.csv", format_campaign_csv(report));
  io::write_file(out / "histogram.csv", format_histogram_csv(report.histogram));
  char wall_line[64];
  std::snprintf(wall_line, sizeof wall_line, "wall_time=%.3f\n", wall);
  const std::string summary = format_campaign_summary(report) + wall_line;
  io::write_file(out / "summary.txt", summary);
  std::cout << summary;

  if (report.algorithm == Algorithm::kGossipCoverage) {
    for (const auto& r : report.runs) {
      if (r.converged && !r.pairwise_optimal) {
        std::cerr << "invariant violation: converged run " << r.run_index << " is not pairwise-optimal\n";
        return kExitInvariant;
      }
    }
  }
  return 0;
}

int cmd_check(const EnvironmentOptions& env) {
  const Loaded l = load(env);
  const Partition& p = *l.partition;
  if (auto err = p.validation_error(l.graph); !err.empty()) {
    std::cout << "valid: no (" << err << ")\n";
    return kExitInvariant;
  }
  std::cout << "valid: yes\n";
  std::cout << "robots: " << p.robot_count() << '\n';
  std::cout << "h_exp: " << h_exp(l.graph, p, l.phi) << '\n';
  std::cout << "centroidal-voronoi: " << yes_no(is_centroidal_voronoi(l.graph, p, l.phi)) << '\n';
  std::cout << "pairwise-optimal: " << yes_no(is_pairwise_optimal(l.graph, p, l.phi)) << '\n';
  return 0;
}

int cmd_cost(const EnvironmentOptions& env) {
  const Loaded l = load(env);
  l.partition->validate(l.graph);
  const double cost = h_exp(l.graph, *l.partition, l.phi);
  std::cout << cost;
  if (l.graph.uniform_weights() && l.graph.edge_count() > 0) {
    std::cout << " (" << cost / l.graph.max_edge_weight() << " w)";
  }
  std::cout << '\n';
  return 0;
}

int cmd_grid2graph(const EnvironmentOptions& env, const std::string& edges_out, bool render) {
  const Loaded l = load(env);
  std::cout << "vertices: " << l.graph.vertex_count() << '\n';
  std::cout << "edges: " << l.graph.edge_count() << '\n';
  std::cout << "uniform_weights: " << yes_no(l.graph.uniform_weights()) << '\n';
  std::cout << "max_edge_weight: " << l.graph.max_edge_weight() << '\n';
  if (!edges_out.empty()) {
    std::string text = std::to_string(l.graph.vertex_count()) + "\n";
    char line[96];
    for (const Edge& e : l.graph.edges()) {
      std::snprintf(line, sizeof line, "%u %u %.17g\n", e.u, e.v, e.weight);
      text += line;
    }
    io::write_file(edges_out, text);
  }
  if (render && l.partition) std::cout << io::render_partition(l.graph, *l.partition);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip coverage partitioning of graph environments"};
  app.require_subcommand(1);

  EnvironmentOptions run_env, campaign_env, check_env, cost_env, g2g_env;
  SimOptions run_sim, campaign_sim;
  std::string run_out, campaign_out, edges_out;
  bool render = false;
  CampaignSpec spec;
  std::optional<double> epsilon, eta, origin;

  auto* run_cmd = app.add_subcommand("run", "Run one simulation");
  add_environment_options(run_cmd, run_env, false);
  add_sim_options(run_cmd, run_sim);
  run_cmd->add_option("--out-dir", run_out, "Directory for trace.csv, final.partition, summary.txt");

  auto* campaign_cmd = app.add_subcommand("campaign", "Monte Carlo campaign over seeds");
  add_environment_options(campaign_cmd, campaign_env, false);
  add_sim_options(campaign_cmd, campaign_sim);
  campaign_cmd->add_option("--out-dir", campaign_out, "Directory for campaign.csv, histogram.csv, summary.txt");
  campaign_cmd->add_option("--samples", spec.samples, "Number of runs K");
  campaign_cmd->add_option("--epsilon", epsilon, "Chernoff accuracy; with --eta, K defaults to the bound");
  campaign_cmd->add_option("--eta", eta, "Chernoff confidence parameter");
  campaign_cmd->add_option("--bin-width", spec.histogram_bin_width, "Histogram bin width (m)");
  campaign_cmd->add_option("--bin-origin", origin, "Histogram origin (m); default smallest final cost");
  campaign_cmd->add_option("--workers", spec.workers, "Worker threads (0 = all cores)");

  auto* check_cmd = app.add_subcommand("check", "Validate a partition and test both optimality predicates");
  add_environment_options(check_cmd, check_env, true);

  auto* cost_cmd = app.add_subcommand("cost", "Print the expected coverage cost of a partition");
  add_environment_options(cost_cmd, cost_env, true);

  auto* g2g_cmd = app.add_subcommand("grid2graph", "Inspect or convert an environment");
  add_environment_options(g2g_cmd, g2g_env, false);
  g2g_cmd->add_option("--edges-out", edges_out, "Write the graph as an edge list");
  g2g_cmd->add_flag("--render", render, "Print the partition drawn over the grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_env, run_sim, run_out);
    if (*campaign_cmd) {
      spec.epsilon = epsilon;
      spec.eta = eta;
      spec.histogram_origin = origin;
      if (epsilon && eta && campaign_cmd->count("--samples") == 0) spec.samples = chernoff_samples(*epsilon, *eta);
      return cmd_campaign(campaign_env, campaign_sim, campaign_out, spec);
    }
    if (*check_cmd) return cmd_check(check_env);
    if (*cost_cmd) return cmd_cost(cost_env);
    if (*g2g_cmd) return cmd_grid2graph(g2g_env, edges_out, render);
  } catch (const InvalidPartitionError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
