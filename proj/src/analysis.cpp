#include "pairgossip/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace pairgossip {

BoundConstants bound_constants(const BoundInputs& in) {
  if (in.T < 2) throw std::invalid_argument("bound_constants: T must be at least 2");
  if (!(in.optimum_norm >= 0.0) || !(in.lipschitz >= 0.0))
    throw std::invalid_argument("bound_constants: norms must be non-negative");
  if (!(in.spectral_gap > 0.0 && in.spectral_gap <= 1.0))
    throw std::invalid_argument("bound_constants: spectral gap must lie in (0, 1]");
  double gamma_sum = 0.0;
  for (long t = 1; t < in.T; ++t) gamma_sum += step_gamma(in.schedule, static_cast<double>(t));
  const double T = static_cast<double>(in.T);
  const double l2 = in.lipschitz * in.lipschitz;
  const double lambda2 = 1.0 - in.spectral_gap;
  BoundConstants out;
  out.c1 = in.optimum_norm * in.optimum_norm / (2.0 * T * step_gamma(in.schedule, T)) +
           l2 * gamma_sum / (2.0 * T);
  out.c2 = 3.0 * l2 * gamma_sum / (T * (1.0 - std::sqrt(lambda2)));
  return out;
}

Parameter mean_of(const std::vector<Parameter>& values) {
  if (values.empty()) throw std::invalid_argument("mean_of: empty set");
  Parameter sum = Parameter::zeros(values.front().shape());
  for (const auto& v : values) sum += v;
  return (1.0 / static_cast<double>(values.size())) * sum;
}

double dual_disagreement(const std::vector<Parameter>& duals) {
  const Parameter zbar = mean_of(duals);
  double total = 0.0;
  for (const auto& z : duals) total += (z - zbar).norm();
  return total / static_cast<double>(duals.size());
}

BiasSample bias_sample(const std::vector<AppliedGradient>& applied, const Parameter& zbar,
                       double time_index, const Problem& problem, const Parameter* optimum) {
  const int n = problem.data.size();
  Parameter eps = Parameter::zeros(zbar.shape());
  for (const auto& a : applied) {
    const Parameter exact = exact_partial_gradient(a.evaluated_at, a.node, problem.data, problem.loss);
    eps.axpy(a.weight, a.direction);
    eps.axpy(-a.weight, exact);
  }
  eps *= 1.0 / n;
  const double idx = std::max(time_index, 1.0);
  const Parameter omega = smoothing_op(problem.reg, -zbar, idx, step_gamma(problem.schedule, idx));
  BiasSample out;
  out.bias_term = eps.dot(omega);
  out.bias_term_centered = optimum ? (omega - *optimum).dot(eps) : kNotApplicable;
  return out;
}

ObjectiveStats objective_stats(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("objective_stats: empty set");
  ObjectiveStats s;
  double sum = 0.0;
  s.max = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    sum += v;
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  if (!std::isfinite(s.mean)) s.std = kNotApplicable;
  return s;
}

double min_eigenvalue_over(const std::vector<Parameter>& values) {
  if (values.empty() || !values.front().is_matrix()) return kNotApplicable;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : values) lo = std::min(lo, min_eigenvalue(v));
  return lo;
}

void write_trace_csv(const std::vector<TraceRecord>& rows, bool with_time_estimates,
                     std::ostream& out) {
  out << "t,grad_evals,obj_mean,obj_std,obj_max,gap_mean,bias_term,bias_term_centered,bias_avg,"
         "dual_disagreement,c3_empirical,min_eig";
  if (with_time_estimates) out << ",m_min,m_max,m_mean,m_dev";
  out << '\n';
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}",
               r.t, r.grad_evals, r.obj_mean, r.obj_std, r.obj_max, r.gap_mean, r.bias_term,
               r.bias_term_centered, r.bias_avg, r.dual_disagreement, r.c3_empirical, r.min_eig);
    if (with_time_estimates)
      fmt::print(out, ",{:.17g},{:.17g},{:.17g},{:.17g}", r.m_min, r.m_max, r.m_mean, r.m_dev);
    out << '\n';
  }
}

}  // namespace pairgossip
