#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "pairgossip/problem.hpp"

namespace pairgossip {

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

struct BoundInputs {
  double optimum_norm = 0.0;  // ||theta*||
  double lipschitz = 0.0;     // L_f
  StepSchedule schedule;
  long T = 0;
  double spectral_gap = 1.0;  // 1 - lambda_2, in (0, 1]
};

struct BoundConstants {
  double c1 = 0.0;  // centralized dual-averaging term
  double c2 = 0.0;  // network term
};

/// c1 = ||theta*||^2/(2T gamma(T)) + L^2/(2T) sum_{t<T} gamma(t)
/// c2 = 3 L^2 / (T (1 - sqrt(lambda_2))) sum_{t<T} gamma(t). Requires T >= 2.
BoundConstants bound_constants(const BoundInputs& in);

/// (1/n) sum_k ||z_k - zbar||.
double dual_disagreement(const std::vector<Parameter>& duals);

Parameter mean_of(const std::vector<Parameter>& values);

/// What a runner exposes about the gradient a node applied in one step.
struct AppliedGradient {
  int node = 0;
  Parameter evaluated_at;  // theta_k when the gradient was taken
  Parameter direction;     // the unscaled gradient d_k
  double weight = 1.0;     // 1 in sync mode, delta_k / p_k in async mode
};

struct BiasSample {
  double bias_term = 0.0;           // epsbar^T omega
  double bias_term_centered = 0.0;  // (omega - theta*)^T epsbar
};

/// eps_k = weight_k (d_k - grad f_k(theta_k)) with the exact partial
/// gradient as centering, epsbar = (1/n) sum over all n nodes (nodes absent
/// from `applied` contribute 0), omega = Pi_{time_index}(-zbar).
/// bias_term_centered is NaN without a reference point.
BiasSample bias_sample(const std::vector<AppliedGradient>& applied, const Parameter& zbar,
                       double time_index, const Problem& problem, const Parameter* optimum);

struct ObjectiveStats {
  double mean = 0.0;
  double std = 0.0;  // population
  double max = 0.0;
};

ObjectiveStats objective_stats(const std::vector<double>& values);

/// Smallest eigenvalue over a set of matrix parameters; NaN for vectors.
double min_eigenvalue_over(const std::vector<Parameter>& values);

/// One CSV row. Fields that do not apply to a runner are NaN.
struct TraceRecord {
  long t = 0;
  long grad_evals = 0;
  double obj_mean = 0.0;
  double obj_std = 0.0;
  double obj_max = 0.0;
  double gap_mean = kNotApplicable;
  double bias_term = kNotApplicable;           // latest sample
  double bias_term_centered = kNotApplicable;  // latest sample
  double bias_avg = kNotApplicable;            // running mean of bias_term
  double dual_disagreement = kNotApplicable;
  double c3_empirical = kNotApplicable;        // running mean of bias_term_centered
  double min_eig = kNotApplicable;             // over all averaged iterates
  double m_min = kNotApplicable;
  double m_max = kNotApplicable;
  double m_mean = kNotApplicable;
  double m_dev = kNotApplicable;               // max_k |m_k - t| / t^0.6
};

/// Header plus rows; `with_time_estimates` adds the m_* columns.
void write_trace_csv(const std::vector<TraceRecord>& rows, bool with_time_estimates,
                     std::ostream& out);

}  // namespace pairgossip
