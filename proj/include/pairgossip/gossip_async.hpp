#pragma once

#include "pairgossip/gossip_common.hpp"

namespace pairgossip {

/// Asynchronous gossip dual averaging.
///
/// One global tick draws an edge (i, j) and swaps y_i, y_j. Only i and j
/// update: both start from the mean of their pre-tick duals, add
/// grad f(theta_k; x_k, y_k) / p_k, advance m_k by 1/p_k, set
/// theta_k <- Pi_{m_k}(-z_k) and fold theta_k into theta_bar_k with weight
/// 1/(m_k p_k), i.e. 1 / (number of activations). p_k = d_k/|E|.
class AsyncGossip {
 public:
  AsyncGossip(const Graph& graph, const Problem& problem, GradientMode mode, std::uint64_t seed);

  void step();
  long t() const { return t_; }
  long grad_evals() const { return grad_evals_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }

  void set_capture(bool on) { capture_on_ = on; }
  const StepCapture& last_capture() const { return capture_; }

 private:
  const Graph& graph_;
  const Problem& problem_;
  GradientMode mode_;
  RandomStream edges_;
  RandomStream baseline_;
  std::vector<NodeState> nodes_;
  Parameter zsum_;  // running sum of all duals, for the bias capture
  long t_ = 0;
  long grad_evals_ = 0;
  bool capture_on_ = false;
  StepCapture capture_;
};

GossipResult run_async(const Graph& graph, const Problem& problem, const GossipRunConfig& cfg,
                       const Reference* reference = nullptr);

}  // namespace pairgossip
