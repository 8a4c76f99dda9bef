#pragma once

#include <vector>

#include "wiretap/channel.hpp"
#include "wiretap/solver.hpp"

namespace wiretap {

struct SweepConfig {
  std::vector<double> eps_sweep{1e-1, 1e-2, 1e-3, 1e-4};
  double conv_tol = 1e-6;  // successive-difference convergence threshold
  SolverConfig solver;
};

struct GeneralCapacityResult {
  std::vector<double> eps;
  std::vector<double> values;
  double extrapolated = 0.0;  // Richardson-style, from the last two values
  bool converged = false;
  CapacityResult final;  // solve at the smallest eps
};

/// Capacity of a general channel through the canonicalization sweep: for
/// each eps the channel is reduced to canonical form and solved; a total
/// power constraint is optimized directly over {Kx >= 0, trace <= P}.
GeneralCapacityResult capacity_general(const GeneralChannel& ch,
                                       const SweepConfig& cfg = {});

}  // namespace wiretap
