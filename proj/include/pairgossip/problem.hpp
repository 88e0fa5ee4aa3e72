#pragma once

#include "pairgossip/losses.hpp"
#include "pairgossip/parameter.hpp"
#include "pairgossip/regularizers.hpp"

namespace pairgossip {

/// Everything that defines R_n and how the step size decays.
struct Problem {
  Dataset data;
  PairwiseLoss loss;
  Regularizer reg;
  StepSchedule schedule;

  Shape parameter_shape() const { return loss.parameter_shape(data.dim()); }
  double objective(const Parameter& theta) const { return full_objective(theta, data, loss, reg); }
};

/// Approximate minimizer of R_n with its objective value.
struct Reference {
  Parameter theta;
  double objective = 0.0;
  double certificate = 0.0;  // upper bound on the optimality gap at `theta`
  long iterations = 0;
};

}  // namespace pairgossip
