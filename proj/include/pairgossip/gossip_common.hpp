#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairgossip/analysis.hpp"
#include "pairgossip/graph.hpp"
#include "pairgossip/problem.hpp"

namespace pairgossip {

/// gossip: the gradient pairs x_k with the auxiliary point y_k.
/// unbiased_baseline: pairs x_k with x_u, u uniform on [n] per node and step.
enum class GradientMode { gossip, unbiased_baseline };

GradientMode parse_gradient_mode(const std::string& name);
std::string to_string(GradientMode mode);

struct NodeState {
  DataPoint x;
  DataPoint y;
  int y_origin = 0;  // node whose observation y currently is
  Parameter z;
  Parameter theta;
  Parameter theta_bar;
  // Asynchronous runs only.
  double m = 0.0;
  double p = 1.0;
  long activations = 0;
};

std::vector<NodeState> initial_nodes(const Problem& problem);

/// Data needed to take a bias sample for the step just executed.
struct StepCapture {
  Edge edge{0, 0};
  std::vector<AppliedGradient> applied;
  Parameter zbar_before;
  double time_index = 1.0;
};

struct GossipRunConfig {
  long T = 0;
  std::uint64_t seed = 0;
  long checkpoint_stride = 1;
  long bias_stride = 0;  // 0: no bias samples
  GradientMode mode = GradientMode::gossip;
};

struct BiasPoint {
  long t = 0;
  double bias_term = 0.0;
  double bias_term_centered = 0.0;
};

struct GossipResult {
  std::vector<TraceRecord> trace;
  std::vector<BiasPoint> bias;
  std::vector<NodeState> final_nodes;
  long grad_evals = 0;
  std::vector<std::string> warnings;
};

/// Shared checkpoint bookkeeping of the gossip runners.
class TraceBuilder {
 public:
  TraceBuilder(const Problem& problem, const Reference* reference, bool with_time_estimates);

  void add_bias(long t, const BiasSample& s);
  void record(long t, long grad_evals, const std::vector<NodeState>& nodes);

  GossipResult& result() { return result_; }

 private:
  const Problem& problem_;
  const Reference* reference_;
  bool with_time_estimates_;
  GossipResult result_;
  double last_bias_ = kNotApplicable;
  double last_centered_ = kNotApplicable;
  double bias_total_ = 0.0;
  long bias_count_ = 0;
  double centered_total_ = 0.0;
  long centered_count_ = 0;
};

/// Warnings for graphs outside the theory's assumptions.
std::vector<std::string> graph_warnings(const Graph& g);

}  // namespace pairgossip
