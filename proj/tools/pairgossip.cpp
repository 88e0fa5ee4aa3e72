#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "pairgossip/datasets.hpp"
#include "pairgossip/experiment.hpp"
#include "pairgossip/graph.hpp"

using nlohmann::json;
using namespace pairgossip;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long> T;
  std::string out;
  std::string mode;  // run-centralized only
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the run seed");
  cmd->add_option("--T", o.T, "override the iteration count");
  cmd->add_option("--out", o.out, "output prefix (writes <out>.csv and <out>.json)");
}

// The subcommand decides the algorithm; other fields come from the file.
RunConfig load_for(const RunOptions& o, const std::string& algorithm) {
  json j = read_json(o.config);
  j["algorithm"] = algorithm;
  if (o.seed) j["seed"] = *o.seed;
  if (o.T) j["T"] = *o.T;
  if (!o.out.empty()) j["output"] = o.out;
  return parse_run_config(j);
}

std::string centralized_algorithm(const RunOptions& o) {
  if (!o.mode.empty()) return "centralized_" + std::string(o.mode == "stochastic" ? "sto" : "det");
  const json j = read_json(o.config);
  const std::string from_file = j.value("algorithm", std::string("centralized_det"));
  if (from_file == "centralized_det" || from_file == "centralized_sto") return from_file;
  return "centralized_det";
}

struct GapOptions {
  std::string topology = "complete";
  int n = 0;
  int k = 4;
  double p = 0.3;
  std::uint64_t seed = 0;
  std::string graph;
  std::string config;
  std::string export_edges;
};

Graph graph_for(const GapOptions& o) {
  if (!o.graph.empty()) {
    std::ifstream in(o.graph);
    if (!in) throw std::runtime_error("cannot open edge list " + o.graph);
    return read_edge_list(in);
  }
  if (!o.config.empty()) {
    json j = read_json(o.config);
    if (!j.contains("topology")) throw std::invalid_argument("config has no 'topology'");
    j["algorithm"] = "sync";
    const RunConfig cfg = parse_run_config(j);
    const int n = cfg.topology.n.value_or(build_dataset(cfg).size());
    return build_graph(cfg, n);
  }
  if (o.n < 2) throw std::invalid_argument("--n must be at least 2");
  RandomStream rng(o.seed, "graph");
  return build_topology(parse_topology_kind(o.topology), o.n, WattsStrogatzParams{o.k, o.p}, rng);
}

struct SyntheticOptions {
  std::string kind = "two_class";
  int n = 50;
  int dim = 5;
  double separation = 1.0;
  int classes = 10;
  int subspace_dim = 5;
  double variance_factor = 0.3;
  std::uint64_t seed = 0;
  std::string out;
};

Dataset synthetic_for(const SyntheticOptions& o) {
  if (o.kind == "two_class") return gen_two_class(o.n, o.dim, o.separation, o.seed);
  if (o.kind == "gaussian_mixture") {
    SyntheticSpec spec;
    spec.n = o.n;
    spec.dim = o.dim;
    spec.classes = o.classes;
    spec.subspace_dim = o.subspace_dim;
    spec.variance_factor = o.variance_factor;
    spec.seed = o.seed;
    return gen_gaussian_mixture(spec);
  }
  throw std::invalid_argument("unknown synthetic kind: " + o.kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip dual averaging for pairwise objectives"};
  app.require_subcommand(1);

  GapOptions gap;
  auto* gap_cmd = app.add_subcommand("spectral-gap", "print 1 - lambda_2 of the expected gossip matrix");
  gap_cmd->add_option("--topology", gap.topology, "complete | cycle | watts_strogatz");
  gap_cmd->add_option("--n", gap.n, "number of nodes");
  gap_cmd->add_option("--k", gap.k, "Watts-Strogatz mean degree");
  gap_cmd->add_option("--p", gap.p, "Watts-Strogatz rewiring probability");
  gap_cmd->add_option("--seed", gap.seed, "graph seed");
  gap_cmd->add_option("--graph", gap.graph, "edge-list file")->check(CLI::ExistingFile);
  gap_cmd->add_option("--config", gap.config, "take the topology from a run config")
      ->check(CLI::ExistingFile);
  gap_cmd->add_option("--export-edges", gap.export_edges, "write the graph as an edge list");

  SyntheticOptions syn;
  auto* syn_cmd = app.add_subcommand("gen-synthetic", "write a synthetic dataset as CSV");
  syn_cmd->add_option("--kind", syn.kind, "two_class | gaussian_mixture");
  syn_cmd->add_option("--n", syn.n, "number of points");
  syn_cmd->add_option("--dim", syn.dim, "feature dimension");
  syn_cmd->add_option("--separation", syn.separation, "two_class mean separation");
  syn_cmd->add_option("--classes", syn.classes, "gaussian_mixture classes");
  syn_cmd->add_option("--subspace-dim", syn.subspace_dim, "gaussian_mixture subspace dimension");
  syn_cmd->add_option("--variance-factor", syn.variance_factor, "gaussian_mixture noise std");
  syn_cmd->add_option("--seed", syn.seed, "data seed");
  syn_cmd->add_option("--out", syn.out, "output CSV (stdout when omitted)");

  RunOptions central, sync, async, compare;
  auto* central_cmd = app.add_subcommand("run-centralized", "centralized dual averaging");
  add_run_options(central_cmd, central);
  central_cmd->add_option("--mode", central.mode, "deterministic | stochastic")
      ->check(CLI::IsMember({"deterministic", "stochastic"}));
  auto* sync_cmd = app.add_subcommand("run-sync", "synchronous gossip dual averaging");
  add_run_options(sync_cmd, sync);
  auto* async_cmd = app.add_subcommand("run-async", "asynchronous gossip dual averaging");
  add_run_options(async_cmd, async);
  auto* compare_cmd =
      app.add_subcommand("compare-baseline", "gossip against the unbiased baseline, same seed");
  add_run_options(compare_cmd, compare);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gap_cmd) {
      const Graph g = graph_for(gap);
      if (!gap.export_edges.empty()) {
        std::ofstream out(gap.export_edges);
        if (!out) throw std::runtime_error("cannot write " + gap.export_edges);
        write_edge_list(g, out);
      }
      fmt::print("{:.5e}\n", spectral_gap(g));
    } else if (*syn_cmd) {
      const Dataset data = synthetic_for(syn);
      if (syn.out.empty()) {
        write_dataset_csv(data, std::cout);
      } else {
        std::ofstream out(syn.out);
        if (!out) throw std::runtime_error("cannot write " + syn.out);
        write_dataset_csv(data, out);
      }
    } else if (*compare_cmd) {
      const bool async_file = read_json(compare.config).value("algorithm", std::string()) == "async";
      std::cout << compare_baseline(load_for(compare, async_file ? "async" : "sync")).dump(2) << '\n';
    } else {
      RunConfig cfg;
      if (*central_cmd) cfg = load_for(central, centralized_algorithm(central));
      else if (*sync_cmd) cfg = load_for(sync, "sync");
      else cfg = load_for(async, "async");
      const ExperimentOutput out = run_experiment(cfg);
      for (const auto& w : out.summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
      std::cout << out.summary.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
