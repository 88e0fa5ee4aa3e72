#include "pairgossip/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pairgossip/random.hpp"

namespace pairgossip {

CentralMode parse_central_mode(const std::string& name) {
  if (name == "deterministic") return CentralMode::deterministic;
  if (name == "stochastic") return CentralMode::stochastic;
  throw std::invalid_argument("unknown centralized mode: " + name);
}

std::string to_string(CentralMode mode) {
  return mode == CentralMode::deterministic ? "deterministic" : "stochastic";
}

std::vector<long> checkpoint_times(long T, long stride) {
  if (T < 0) throw std::invalid_argument("checkpoint_times: T must be non-negative");
  if (stride < 1) throw std::invalid_argument("checkpoint_times: stride must be positive");
  std::vector<long> out;
  for (long t = 0; t < T; t += stride) out.push_back(t);
  out.push_back(T);
  return out;
}

CentralResult run_centralized(CentralMode mode, const Problem& problem, long T, std::uint64_t seed,
                              const std::vector<long>& checkpoints) {
  if (T < 0) throw std::invalid_argument("run_centralized: T must be non-negative");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("run_centralized: checkpoints must be sorted");
  for (long c : checkpoints)
    if (c < 0 || c > T) throw std::invalid_argument("run_centralized: checkpoint outside [0, T]");

  const Dataset& data = problem.data;
  const int n = data.size();
  const Shape shape = problem.parameter_shape();
  RandomStream pairs(seed, "pairs");

  CentralResult result;
  CentralState& s = result.final_state;
  s.z = Parameter::zeros(shape);
  s.theta = Parameter::zeros(shape);
  s.theta_bar = Parameter::zeros(shape);

  std::size_t next = 0;
  auto record = [&]() {
    while (next < checkpoints.size() && checkpoints[next] == s.t) {
      result.trace.push_back({s.t, result.grad_evals, s.theta_bar, problem.objective(s.theta_bar)});
      ++next;
    }
  };
  record();

  for (long t = 1; t <= T; ++t) {
    s.t = t;
    s.theta_bar.blend(1.0 / static_cast<double>(t), s.theta);
    if (mode == CentralMode::deterministic) {
      s.z += full_gradient(s.theta, data, problem.loss);
      result.grad_evals += static_cast<long>(n) * n;
    } else {
      const auto i = static_cast<int>(pairs.uniform_index(n));
      const auto j = static_cast<int>(pairs.uniform_index(n));
      accumulate_grad(problem.loss, s.theta, data.features().row(i).transpose(), data.label(i),
                      data.features().row(j).transpose(), data.label(j), 1.0, s.z);
      result.grad_evals += 1;
    }
    const double td = static_cast<double>(t);
    s.theta = smoothing_op(problem.reg, -s.z, td, step_gamma(problem.schedule, td));
    record();
  }
  return result;
}

namespace {

struct SmoothEval {
  double value;
  Parameter grad;
};

// Smooth part of the objective; the hinge gets a Huber corner of width mu.
SmoothEval smooth_part(const Problem& problem, const Parameter& theta, double mu) {
  const Dataset& data = problem.data;
  if (problem.loss.kind == LossKind::auc_logistic)
    return {pairwise_mean(theta, data, problem.loss), full_gradient(theta, data, problem.loss)};

  const int n = data.size();
  const double nn = static_cast<double>(n) * n;
  const Eigen::MatrixXd dist = mahalanobis_distances(theta, data.features());
  Eigen::MatrixXd w(n, n);
  double value = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double sign = data.label(i) * data.label(j);
      const double u = 1.0 - sign * (problem.loss.margin - dist(i, j));
      if (u <= 0.0) {
        w(i, j) = 0.0;
      } else if (u < mu) {
        value += u * u / (2.0 * mu);
        w(i, j) = sign * u / mu;
      } else {
        value += u - 0.5 * mu;
        w(i, j) = sign;
      }
    }
  const Eigen::VectorXd rows = w.rowwise().sum();
  w = -w;
  w.diagonal() += rows;
  const Eigen::MatrixXd& x = data.features();
  const Eigen::MatrixXd g = (2.0 / nn) * (x.transpose() * w * x);
  return {value / nn, Parameter::from_symmetric(0.5 * (g + g.transpose()))};
}

// prox_{eta psi}(v), written through the smoothing operator at t = 1.
Parameter prox(const Regularizer& reg, const Parameter& v, double eta) {
  return smoothing_op(reg, (1.0 / eta) * v, 1.0, eta);
}

}  // namespace

Reference solve_reference(const Problem& problem, const ReferenceOptions& options) {
  const Shape shape = problem.parameter_shape();
  Parameter theta = Parameter::zeros(shape);
  double tol = options.tolerance;
  if (!(tol > 0.0)) tol = 1e-8 * (1.0 + problem.objective(theta));
  const double mu = problem.loss.kind == LossKind::metric_hinge ? tol : 0.0;

  Parameter y = theta;
  double momentum = 1.0;
  double lip = 1.0;
  for (long it = 1; it <= options.max_iterations; ++it) {
    const SmoothEval at_y = smooth_part(problem, y, mu);
    Parameter next;
    for (;;) {
      next = prox(problem.reg, y - (1.0 / lip) * at_y.grad, 1.0 / lip);
      const Parameter step = next - y;
      const double model = at_y.value + at_y.grad.dot(step) + 0.5 * lip * step.squared_norm();
      if (smooth_part(problem, next, mu).value <= model + 1e-15 * std::abs(model)) break;
      lip *= 2.0;
      if (!std::isfinite(lip)) throw std::runtime_error("solve_reference: step size collapsed");
    }
    const Parameter mapping = lip * (y - next);
    const double certificate = 2.0 * mapping.norm() * (next.norm() + 1.0);
    if (certificate <= tol) {
      Reference ref;
      ref.objective = problem.objective(next);
      ref.theta = std::move(next);
      ref.certificate = certificate + mu;
      ref.iterations = it;
      return ref;
    }
    if ((y - next).dot(next - theta) > 0.0) {
      momentum = 1.0;
      y = next;
    } else {
      const double following = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + ((momentum - 1.0) / following) * (next - theta);
      momentum = following;
    }
    theta = std::move(next);
    lip *= 0.9;
  }
  throw std::runtime_error("solve_reference: tolerance not reached within " +
                           std::to_string(options.max_iterations) + " iterations");
}

}  // namespace pairgossip
