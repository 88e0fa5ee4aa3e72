#include "pairgossip/gossip_async.hpp"

#include <stdexcept>
#include <utility>

namespace pairgossip {

AsyncGossip::AsyncGossip(const Graph& graph, const Problem& problem, GradientMode mode,
                         std::uint64_t seed)
    : graph_(graph),
      problem_(problem),
      mode_(mode),
      edges_(seed, "edges"),
      baseline_(seed, "baseline_pairs"),
      nodes_(initial_nodes(problem)),
      zsum_(Parameter::zeros(problem.parameter_shape())) {
  if (graph.num_nodes() != problem.data.size())
    throw std::invalid_argument("AsyncGossip: graph has " + std::to_string(graph.num_nodes()) +
                                " nodes but the dataset has " +
                                std::to_string(problem.data.size()) + " points");
  const std::vector<double> p = activation_probabilities(graph);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!(p[k] > 0.0)) throw std::invalid_argument("AsyncGossip: isolated node " + std::to_string(k));
    nodes_[k].p = p[k];
  }
}

void AsyncGossip::step() {
  ++t_;
  const auto [i, j] = sample_edge(graph_, edges_);
  const int n = static_cast<int>(nodes_.size());
  std::swap(nodes_[i].y, nodes_[j].y);
  std::swap(nodes_[i].y_origin, nodes_[j].y_origin);

  if (capture_on_) {
    capture_.edge = {i, j};
    capture_.applied.clear();
    capture_.zbar_before = (1.0 / n) * zsum_;
    capture_.time_index = std::max(nodes_[i].m, 1.0);
  }

  zsum_ -= nodes_[i].z;
  zsum_ -= nodes_[j].z;
  const Parameter avg = 0.5 * (nodes_[i].z + nodes_[j].z);
  const Eigen::MatrixXd& x = problem_.data.features();
  for (int k : {i, j}) {
    NodeState& s = nodes_[k];
    Parameter g = Parameter::zeros(avg.shape());
    if (mode_ == GradientMode::gossip) {
      accumulate_grad(problem_.loss, s.theta, s.x.features, s.x.label, s.y.features, s.y.label,
                      1.0, g);
    } else {
      const auto u = static_cast<int>(baseline_.uniform_index(n));
      accumulate_grad(problem_.loss, s.theta, s.x.features, s.x.label, x.row(u).transpose(),
                      problem_.data.label(u), 1.0, g);
    }
    if (capture_on_) capture_.applied.push_back({k, s.theta, g, 1.0 / s.p});
    s.z = avg;
    s.z.axpy(1.0 / s.p, g);
    s.m += 1.0 / s.p;
    ++s.activations;
    s.theta = smoothing_op(problem_.reg, -s.z, s.m, step_gamma(problem_.schedule, s.m));
    s.theta_bar.blend(1.0 / (s.m * s.p), s.theta);
    zsum_ += s.z;
  }
  grad_evals_ += 2;
}

GossipResult run_async(const Graph& graph, const Problem& problem, const GossipRunConfig& cfg,
                       const Reference* reference) {
  if (cfg.T < 0) throw std::invalid_argument("run_async: T must be non-negative");
  if (cfg.checkpoint_stride < 1) throw std::invalid_argument("run_async: stride must be positive");
  if (cfg.bias_stride < 0) throw std::invalid_argument("run_async: bias stride must be >= 0");
  AsyncGossip gossip(graph, problem, cfg.mode, cfg.seed);
  TraceBuilder trace(problem, reference, true);
  trace.result().warnings = graph_warnings(graph);
  if (problem.schedule.kind != ScheduleKind::poly)
    trace.result().warnings.emplace_back(
        "asynchronous guarantees assume a poly step size schedule");
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
