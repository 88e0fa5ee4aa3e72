#include "pairgossip/gossip_sync.hpp"

#include <stdexcept>
#include <utility>

namespace pairgossip {

SyncGossip::SyncGossip(const Graph& graph, const Problem& problem, GradientMode mode,
                       std::uint64_t seed)
    : graph_(graph),
      problem_(problem),
      mode_(mode),
      edges_(seed, "edges"),
      baseline_(seed, "baseline_pairs"),
      nodes_(initial_nodes(problem)),
      scratch_(Parameter::zeros(problem.parameter_shape())) {
  if (graph.num_nodes() != problem.data.size())
    throw std::invalid_argument("SyncGossip: graph has " + std::to_string(graph.num_nodes()) +
                                " nodes but the dataset has " +
                                std::to_string(problem.data.size()) + " points");
  if (graph.num_edges() == 0) throw std::invalid_argument("SyncGossip: graph has no edges");
}

void SyncGossip::step() {
  ++t_;
  const auto [i, j] = sample_edge(graph_, edges_);
  const int n = static_cast<int>(nodes_.size());

  Parameter avg = 0.5 * (nodes_[i].z + nodes_[j].z);
  nodes_[i].z = avg;
  nodes_[j].z = std::move(avg);
  std::swap(nodes_[i].y, nodes_[j].y);
  std::swap(nodes_[i].y_origin, nodes_[j].y_origin);

  if (capture_on_) {
    capture_.edge = {i, j};
    capture_.applied.clear();
    capture_.zbar_before = Parameter::zeros(scratch_.shape());
    for (const auto& s : nodes_) capture_.zbar_before += s.z;
    capture_.zbar_before *= 1.0 / n;
    capture_.time_index = t_ > 1 ? static_cast<double>(t_ - 1) : 1.0;
  }

  const Eigen::MatrixXd& x = problem_.data.features();
  for (int k = 0; k < n; ++k) {
    NodeState& s = nodes_[k];
    scratch_.set_zero();
    if (mode_ == GradientMode::gossip) {
      accumulate_grad(problem_.loss, s.theta, s.x.features, s.x.label, s.y.features, s.y.label,
                      1.0, scratch_);
    } else {
      const auto u = static_cast<int>(baseline_.uniform_index(n));
      accumulate_grad(problem_.loss, s.theta, s.x.features, s.x.label, x.row(u).transpose(),
                      problem_.data.label(u), 1.0, scratch_);
    }
    if (capture_on_) capture_.applied.push_back({k, s.theta, scratch_, 1.0});
    s.z += scratch_;
  }
  grad_evals_ += n;

  const double td = static_cast<double>(t_);
  const double gamma = step_gamma(problem_.schedule, td);
  for (auto& s : nodes_) {
    s.theta = smoothing_op(problem_.reg, -s.z, td, gamma);
    s.theta_bar.blend(1.0 / td, s.theta);
  }
}

GossipResult run_sync(const Graph& graph, const Problem& problem, const GossipRunConfig& cfg,
                      const Reference* reference) {
  if (cfg.T < 0) throw std::invalid_argument("run_sync: T must be non-negative");
  if (cfg.checkpoint_stride < 1) throw std::invalid_argument("run_sync: stride must be positive");
  if (cfg.bias_stride < 0) throw std::invalid_argument("run_sync: bias stride must be >= 0");
  SyncGossip gossip(graph, problem, cfg.mode, cfg.seed);
  TraceBuilder trace(problem, reference, false);
  trace.result().warnings = graph_warnings(graph);
  const Parameter* optimum = reference ? &reference->theta : nullptr;

  trace.record(0, 0, gossip.nodes());
  for (long t = 1; t <= cfg.T; ++t) {
    const bool sample = cfg.bias_stride > 0 && t % cfg.bias_stride == 0;
    gossip.set_capture(sample);
    gossip.step();
    if (sample) {
      const StepCapture& c = gossip.last_capture();
      trace.add_bias(t, bias_sample(c.applied, c.zbar_before, c.time_index, problem, optimum));
    }
    if (t % cfg.checkpoint_stride == 0 || t == cfg.T) trace.record(t, gossip.grad_evals(), gossip.nodes());
  }
  GossipResult& out = trace.result();
  out.final_nodes = gossip.nodes();
  out.grad_evals = gossip.grad_evals();
  return std::move(out);
}

}  // namespace pairgossip
