#pragma once

#include <optional>
#include <vector>

#include "wiretap/channel.hpp"
#include "wiretap/solver.hpp"

namespace wiretap {

/// Joint noise law for the Sato-style bound: marginals Kr, Ke are fixed by
/// the channel, only the cross-covariance between the two noises is free.
/// Feasible iff the stacked 2t x 2t covariance is PSD.
struct JointNoise {
  SymMatrix Kr;
  SymMatrix Ke;
  Eigen::MatrixXd Kcross;

  Eigen::MatrixXd block() const;
  bool feasible(double tol) const;
};

struct ParallelResult {
  double value = 0.0;
  SymMatrix Kx_star = SymMatrix::Zero(1);
  std::vector<int> active_set;  // subchannels with Kr_ii < Ke_ii
};

/// Closed form for diagonal channels: transmit at full cap on exactly the
/// subchannels where the legitimate receiver is stronger.
ParallelResult parallel_capacity(const CanonicalChannel& ch);

/// Gaussian evaluation of I(X; Yr' | Ye') for X ~ N(0, Kx) under the given
/// joint noise, via Schur complements. Throws std::domain_error if a
/// conditional covariance is singular.
double conditional_mi(const SymMatrix& Kx, const JointNoise& jn);

struct SatoConfig {
  int max_outer = 500;
  int max_inner = 4000;
  double tol = 1e-10;
  /// Extra starting point for the inner maximization (e.g. the main
  /// solver's Kx*), which makes the dominance direction of the bound
  /// robust to inner non-convergence.
  std::optional<SymMatrix> extra_inner_seed;
  /// Starting point for the outer minimization over the cross-covariance.
  /// Coupling the noises through a common part with covariance Ktilde_r
  /// puts the start at (or very near) the saddle.
  std::optional<Eigen::MatrixXd> cross_seed;
};

struct SatoResult {
  double value = 0.0;
  Eigen::MatrixXd Kcross_star;
  SymMatrix Kx_star = SymMatrix::Zero(1);
  bool converged = false;
  std::vector<double> outer_values;  // nonincreasing by construction
};

/// min over feasible Kcross of max over {0 <= Kx <= S} of conditional_mi,
/// by alternating inner projected-gradient maximization with outer
/// projected descent on Kcross. Only strictly improving outer steps are
/// accepted.
SatoResult sato_upper_bound(const CanonicalChannel& ch,
                            const SatoConfig& cfg = {});

struct CrosscheckReport {
  double solver_value = 0.0;
  double sato_value = 0.0;
  double gap = 0.0;
  bool dominance = false;  // solver <= sato + tol, unconditional direction
  bool pass = false;       // |gap| <= tol_gap and dominance
  CapacityResult capacity;
  SatoResult sato;
};

CrosscheckReport crosscheck(const CanonicalChannel& ch, double tol_gap = 1e-3,
                            const SolverConfig& solver_cfg = {},
                            const SatoConfig& sato_cfg = {});

}  // namespace wiretap
