#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "pairgossip/centralized.hpp"
#include "pairgossip/datasets.hpp"
#include "pairgossip/gossip_common.hpp"
#include "pairgossip/graph.hpp"
#include "pairgossip/problem.hpp"

namespace pairgossip {

enum class Algorithm { centralized_det, centralized_sto, sync, async };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);

struct TopologySpec {
  TopologyKind kind = TopologyKind::complete;
  std::optional<int> n;  // defaults to the dataset size
  WattsStrogatzParams ws;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
  std::string path;                   // edge-list file; overrides kind when set
};

enum class DatasetKind { two_class, gaussian_mixture, breast_cancer, csv };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::two_class;
  std::string path;  // breast_cancer, csv
  int n = 50;        // two_class
  int dim = 5;       // two_class
  double separation = 1.0;
  SyntheticSpec mixture;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
};

struct ReferenceSpec {
  bool enabled = true;
  double tolerance = 0.0;  // <= 0: solver default
};

/// A validated run description; see README for the JSON layout.
struct RunConfig {
  Algorithm algorithm = Algorithm::sync;
  GradientMode gradient_mode = GradientMode::gossip;
  TopologySpec topology;
  DatasetSpec dataset;
  PairwiseLoss loss;
  Regularizer reg;
  StepSchedule schedule;
  long T = 0;
  std::uint64_t seed = 0;
  long checkpoint_stride = 1;
  long bias_stride = 0;
  std::string output = "run";  // writes <output>.csv and <output>.json
  ReferenceSpec reference;
};

/// Parses and cross-validates; throws std::invalid_argument naming the field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

Dataset build_dataset(const RunConfig& cfg);
Graph build_graph(const RunConfig& cfg, int dataset_size);

struct ExperimentOutput {
  std::string csv_path;
  std::string json_path;
  nlohmann::json summary;
};

/// Runs the configured algorithm and writes <output>.csv and <output>.json.
ExperimentOutput run_experiment(const RunConfig& cfg);

/// Runs gossip and unbiased_baseline with the same seed on the same graph
/// and data (in parallel when allowed). Writes <output>_gossip.*,
/// <output>_baseline.* and <output>_compare.json.
nlohmann::json compare_baseline(const RunConfig& cfg);

}  // namespace pairgossip
