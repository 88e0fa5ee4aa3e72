#include "pairgossip/gossip_common.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairgossip {

GradientMode parse_gradient_mode(const std::string& name) {
  if (name == "gossip") return GradientMode::gossip;
  if (name == "unbiased_baseline") return GradientMode::unbiased_baseline;
  throw std::invalid_argument("unknown gradient mode: " + name);
}

std::string to_string(GradientMode mode) {
  return mode == GradientMode::gossip ? "gossip" : "unbiased_baseline";
}

std::vector<NodeState> initial_nodes(const Problem& problem) {
  const Shape shape = problem.parameter_shape();
  std::vector<NodeState> nodes(problem.data.size());
  for (int k = 0; k < problem.data.size(); ++k) {
    NodeState& s = nodes[k];
    s.x = problem.data.point(k);
    s.y = s.x;
    s.y_origin = k;
    s.z = Parameter::zeros(shape);
    s.theta = Parameter::zeros(shape);
    s.theta_bar = Parameter::zeros(shape);
  }
  return nodes;
}

std::vector<std::string> graph_warnings(const Graph& g) {
  std::vector<std::string> out;
  if (!g.is_connected()) out.emplace_back("graph is disconnected; nodes cannot reach consensus");
  if (g.is_bipartite()) out.emplace_back("graph is bipartite; convergence guarantees assume otherwise");
  return out;
}

TraceBuilder::TraceBuilder(const Problem& problem, const Reference* reference,
                           bool with_time_estimates)
    : problem_(problem), reference_(reference), with_time_estimates_(with_time_estimates) {}

void TraceBuilder::add_bias(long t, const BiasSample& s) {
  result_.bias.push_back({t, s.bias_term, s.bias_term_centered});
  last_bias_ = s.bias_term;
  last_centered_ = s.bias_term_centered;
  bias_total_ += s.bias_term;
  ++bias_count_;
  if (std::isfinite(s.bias_term_centered)) {
    centered_total_ += s.bias_term_centered;
    ++centered_count_;
  }
}

void TraceBuilder::record(long t, long grad_evals, const std::vector<NodeState>& nodes) {
  std::vector<double> objectives;
  std::vector<Parameter> averages, duals;
  objectives.reserve(nodes.size());
  averages.reserve(nodes.size());
  duals.reserve(nodes.size());
  for (const auto& s : nodes) {
    objectives.push_back(problem_.objective(s.theta_bar));
    averages.push_back(s.theta_bar);
    duals.push_back(s.z);
  }
  const ObjectiveStats stats = objective_stats(objectives);

  TraceRecord r;
  r.t = t;
  r.grad_evals = grad_evals;
  r.obj_mean = stats.mean;
  r.obj_std = stats.std;
  r.obj_max = stats.max;
  if (reference_) r.gap_mean = stats.mean - reference_->objective;
  r.bias_term = last_bias_;
  r.bias_term_centered = last_centered_;
  if (bias_count_ > 0) r.bias_avg = bias_total_ / static_cast<double>(bias_count_);
  if (centered_count_ > 0) r.c3_empirical = centered_total_ / static_cast<double>(centered_count_);
  r.dual_disagreement = dual_disagreement(duals);
  r.min_eig = min_eigenvalue_over(averages);
  if (with_time_estimates_) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0, dev = 0.0;
    for (const auto& s : nodes) {
      lo = std::min(lo, s.m);
      hi = std::max(hi, s.m);
      sum += s.m;
      if (t > 0) dev = std::max(dev, std::abs(s.m - static_cast<double>(t)));
    }
    r.m_min = lo;
    r.m_max = hi;
    r.m_mean = sum / static_cast<double>(nodes.size());
    r.m_dev = t > 0 ? dev / std::pow(static_cast<double>(t), 0.6) : 0.0;
  }
  result_.trace.push_back(r);
}

}  // namespace pairgossip
