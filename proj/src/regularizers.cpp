#include "pairgossip/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace pairgossip {

RegularizerKind parse_regularizer_kind(const std::string& name) {
  if (name == "zero") return RegularizerKind::zero;
  if (name == "squared_l2") return RegularizerKind::squared_l2;
  if (name == "l1") return RegularizerKind::l1;
  if (name == "psd_indicator") return RegularizerKind::psd_indicator;
  throw std::invalid_argument("unknown regularizer kind: " + name);
}

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::zero: return "zero";
    case RegularizerKind::squared_l2: return "squared_l2";
    case RegularizerKind::l1: return "l1";
    case RegularizerKind::psd_indicator: return "psd_indicator";
  }
  return "?";
}

Regularizer Regularizer::squared_l2(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("squared_l2: lambda must be positive");
  return {RegularizerKind::squared_l2, lambda};
}

Regularizer Regularizer::l1(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("l1: lambda must be positive");
  return {RegularizerKind::l1, lambda};
}

double psd_tolerance(const Parameter& theta) { return 1e-9 * (1.0 + theta.norm()); }

double min_eigenvalue(const Parameter& theta) {
  if (!theta.is_matrix()) throw std::invalid_argument("min_eigenvalue: needs a matrix parameter");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(theta.values(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

bool is_psd(const Parameter& theta) { return min_eigenvalue(theta) >= -psd_tolerance(theta); }

double psi_value(const Regularizer& reg, const Parameter& theta) {
  switch (reg.kind) {
    case RegularizerKind::zero:
      return 0.0;
    case RegularizerKind::squared_l2:
      return reg.lambda * theta.squared_norm();
    case RegularizerKind::l1:
      return reg.lambda * theta.values().cwiseAbs().sum();
    case RegularizerKind::psd_indicator:
      if (!theta.is_matrix())
        throw std::invalid_argument("psi_value: psd_indicator needs a symmetric matrix");
      return is_psd(theta) ? 0.0 : kInfeasible;
  }
  throw std::invalid_argument("psi_value: unknown regularizer");
}

Parameter project_psd(const Parameter& m) {
  if (!m.is_matrix()) throw std::invalid_argument("project_psd: needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.values());
  if (solver.info() != Eigen::Success) throw std::runtime_error("project_psd: eigensolver failed");
  const Eigen::VectorXd clamped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd out = v * clamped.asDiagonal() * v.transpose();
  return Parameter::from_symmetric(0.5 * (out + out.transpose()));
}

Parameter smoothing_op(const Regularizer& reg, const Parameter& z, double t, double gamma_t) {
  if (!(t >= 1.0) || !std::isfinite(t)) throw std::invalid_argument("smoothing_op: t must be >= 1");
  if (!(gamma_t > 0.0) || !std::isfinite(gamma_t))
    throw std::invalid_argument("smoothing_op: gamma must be positive and finite");
  if (!z.all_finite()) throw std::invalid_argument("smoothing_op: non-finite input");

  switch (reg.kind) {
    case RegularizerKind::zero:
      return gamma_t * z;
    case RegularizerKind::squared_l2:
      return (gamma_t / (1.0 + 2.0 * t * gamma_t * reg.lambda)) * z;
    case RegularizerKind::l1: {
      const double thr = t * reg.lambda;
      return z.map_coeffs([thr, gamma_t](double x) {
        const double mag = std::max(0.0, std::abs(x) - thr);
        return gamma_t * std::copysign(mag, x);
      });
    }
    case RegularizerKind::psd_indicator:
      if (!z.is_matrix())
        throw std::invalid_argument("smoothing_op: psd_indicator needs a symmetric matrix");
      return project_psd(gamma_t * z);
  }
  throw std::invalid_argument("smoothing_op: unknown regularizer");
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "inv_sqrt") return ScheduleKind::inv_sqrt;
  if (name == "poly") return ScheduleKind::poly;
  if (name == "bounded_domain") return ScheduleKind::bounded_domain;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::inv_sqrt: return "inv_sqrt";
    case ScheduleKind::poly: return "poly";
    case ScheduleKind::bounded_domain: return "bounded_domain";
  }
  return "?";
}

StepSchedule StepSchedule::inv_sqrt(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("inv_sqrt: c must be positive");
  StepSchedule s;
  s.kind = ScheduleKind::inv_sqrt;
  s.c = c;
  return s;
}

StepSchedule StepSchedule::poly(double c, double alpha) {
  if (!(c > 0.0)) throw std::invalid_argument("poly: c must be positive");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("poly: alpha must be in (0, 1/2)");
  StepSchedule s;
  s.kind = ScheduleKind::poly;
  s.c = c;
  s.alpha = alpha;
  return s;
}

StepSchedule StepSchedule::bounded_domain(double radius, double lipschitz) {
  if (!(radius > 0.0) || !(lipschitz > 0.0))
    throw std::invalid_argument("bounded_domain: D and L_f must be positive");
  StepSchedule s;
  s.kind = ScheduleKind::bounded_domain;
  s.radius = radius;
  s.lipschitz = lipschitz;
  return s;
}

double step_gamma(const StepSchedule& s, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("step_gamma: t must be >= 1");
  switch (s.kind) {
    case ScheduleKind::inv_sqrt: return s.c / std::sqrt(t);
    case ScheduleKind::poly: return s.c / std::pow(t, 0.5 + s.alpha);
    case ScheduleKind::bounded_domain: return s.radius / (s.lipschitz * std::sqrt(2.0 * t));
  }
  throw std::invalid_argument("step_gamma: unknown schedule");
}

}  // namespace pairgossip
