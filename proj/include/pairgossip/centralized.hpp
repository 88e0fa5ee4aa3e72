#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairgossip/problem.hpp"

namespace pairgossip {

enum class CentralMode { deterministic, stochastic };

CentralMode parse_central_mode(const std::string& name);
std::string to_string(CentralMode mode);

struct CentralState {
  Parameter z;          // sum of the gradients taken so far
  Parameter theta;      // next evaluation point, Pi_t(-z)
  Parameter theta_bar;  // mean of the evaluation points theta(1..t)
  long t = 0;
};

struct CentralCheckpoint {
  long t = 0;
  long grad_evals = 0;
  Parameter theta_bar;
  double objective = 0.0;
};

struct CentralResult {
  std::vector<CentralCheckpoint> trace;
  CentralState final_state;
  long grad_evals = 0;
};

/// Dual averaging on R_n. Deterministic mode takes the exact gradient of the
/// pairwise mean; stochastic mode one ordered pair drawn uniformly from
/// [n]^2 (i = j allowed). Iteration t evaluates the gradient at theta(t),
/// starting from theta(1) = 0, then sets theta(t+1) = Pi_t(-z(t)).
/// `checkpoints` are iteration counts in [0, T]; t = 0 reports R_n(0).
CentralResult run_centralized(CentralMode mode, const Problem& problem, long T, std::uint64_t seed,
                              const std::vector<long>& checkpoints);

/// 0, stride, 2*stride, ... and always T.
std::vector<long> checkpoint_times(long T, long stride);

struct ReferenceOptions {
  double tolerance = 0.0;  // <= 0 selects 1e-8 (1 + R_n(0))
  long max_iterations = 1'000'000;
};

/// Accelerated proximal gradient with backtracking and adaptive restart.
///
/// Stops once 2 ||G|| (||theta|| + 1) <= tolerance, G being the gradient
/// mapping. For convex R_n, R_n(theta) - min R_n <= 2 ||G|| ||theta - theta*||;
/// the unknown distance is replaced by ||theta|| + 1. The hinge is
/// Huber-smoothed with width `tolerance`.
/// Throws std::runtime_error when the iteration cap is hit first.
Reference solve_reference(const Problem& problem, const ReferenceOptions& options = {});

}  // namespace pairgossip
