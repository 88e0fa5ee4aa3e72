#pragma once

#include "pairgossip/gossip_common.hpp"

namespace pairgossip {

/// Synchronous gossip dual averaging as a step-by-step state machine.
///
/// One step at time t: draw an edge (i, j); z_i, z_j <- (z_i + z_j)/2;
/// swap y_i and y_j; every node adds grad f(theta_k; x_k, y_k) to z_k
/// (post-swap y); theta_k <- Pi_t(-z_k); theta_bar_k blends in theta_k with
/// weight 1/t.
class SyncGossip {
 public:
  SyncGossip(const Graph& graph, const Problem& problem, GradientMode mode, std::uint64_t seed);

  void step();
  long t() const { return t_; }
  long grad_evals() const { return grad_evals_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }

  /// When on, the next steps fill last_capture().
  void set_capture(bool on) { capture_on_ = on; }
  const StepCapture& last_capture() const { return capture_; }

 private:
  const Graph& graph_;
  const Problem& problem_;
  GradientMode mode_;
  RandomStream edges_;
  RandomStream baseline_;
  std::vector<NodeState> nodes_;
  long t_ = 0;
  long grad_evals_ = 0;
  bool capture_on_ = false;
  StepCapture capture_;
  Parameter scratch_;
};

/// T synchronous steps with checkpoints at 0, stride, ..., T.
GossipResult run_sync(const Graph& graph, const Problem& problem, const GossipRunConfig& cfg,
                      const Reference* reference = nullptr);

}  // namespace pairgossip
