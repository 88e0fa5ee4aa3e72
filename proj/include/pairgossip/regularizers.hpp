#pragma once

#include <limits>
#include <string>

#include "pairgossip/parameter.hpp"

namespace pairgossip {

enum class RegularizerKind { zero, squared_l2, l1, psd_indicator };

RegularizerKind parse_regularizer_kind(const std::string& name);
std::string to_string(RegularizerKind kind);

/// psi: zero, lambda*||theta||^2, lambda*||theta||_1, or the PSD-cone indicator.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::zero;
  double lambda = 0.0;  // ignored by zero and psd_indicator

  static Regularizer zero() { return {}; }
  static Regularizer squared_l2(double lambda);
  static Regularizer l1(double lambda);
  static Regularizer psd_indicator() { return {RegularizerKind::psd_indicator, 0.0}; }
};

/// Value returned by psi_value outside the PSD cone.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// Feasibility tolerance of the PSD indicator: min eigenvalue >= -1e-9 (1 + ||theta||).
double psd_tolerance(const Parameter& theta);
double min_eigenvalue(const Parameter& theta);
bool is_psd(const Parameter& theta);

double psi_value(const Regularizer& reg, const Parameter& theta);

/// argmin_theta { -z.theta + ||theta||^2 / (2 gamma_t) + t psi(theta) },
/// i.e. prox_{t gamma_t psi}(gamma_t z). Requires t >= 1 and gamma_t > 0.
Parameter smoothing_op(const Regularizer& reg, const Parameter& z, double t, double gamma_t);

/// Symmetric eigen-projection onto the PSD cone.
Parameter project_psd(const Parameter& m);

enum class ScheduleKind { inv_sqrt, poly, bounded_domain };

ScheduleKind parse_schedule_kind(const std::string& name);
std::string to_string(ScheduleKind kind);

/// gamma(t) = c/sqrt(t), c/t^(1/2+alpha), or D/(L_f sqrt(2t)).
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::inv_sqrt;
  double c = 1.0;
  double alpha = 0.0;     // poly
  double radius = 1.0;    // bounded_domain: D
  double lipschitz = 1.0; // bounded_domain: L_f

  static StepSchedule inv_sqrt(double c);
  static StepSchedule poly(double c, double alpha);
  static StepSchedule bounded_domain(double radius, double lipschitz);
};

/// Defined for real t >= 1; throws otherwise.
double step_gamma(const StepSchedule& s, double t);

}  // namespace pairgossip
