#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wiretap/channel.hpp"
#include "wiretap/matcore.hpp"

namespace wiretap {

/// Finite Gaussian mixture with a shared component covariance. Restricting
/// inputs to this family keeps every convolution with Gaussian noise in
/// closed form, so log-densities and scores are exact and the Monte Carlo
/// estimators below are unbiased.
struct MixtureInput {
  std::vector<double> weights;         // positive, sum to 1
  std::vector<Eigen::VectorXd> means;  // one per component
  SymMatrix comp_cov = SymMatrix::Zero(1);  // shared, PSD

  int dim() const { return comp_cov.dim(); }
  int components() const { return static_cast<int>(weights.size()); }

  Eigen::VectorXd mean() const;
  /// E[X X^T] = sum_i w_i m_i m_i^T + comp_cov.
  SymMatrix second_moment() const;
  SymMatrix covariance() const;

  void validate() const;  // throws std::invalid_argument
};

/// Deterministic random mixture input with E[X X^T] strictly inside the
/// cap (scaled to 0.9 * cap on the tightest direction).
MixtureInput random_mixture_input(std::uint64_t seed, const SymMatrix& cap,
                                  int max_components = 4);

struct EstimatorOutput {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo differential entropy of X + W, W ~ N(0, noise_cov):
/// -(1/n) sum log f(y_i) with y_i drawn from the (closed-form) smoothed
/// mixture. Deterministic in (seed, n); samples are generated in fixed-size
/// batches with per-batch seeds derived from the master seed and reduced by
/// pairwise summation.
EstimatorOutput entropy_mc(const MixtureInput& x, const SymMatrix& noise_cov,
                           long n, std::uint64_t seed);

/// One named statistical check: passes iff statistic <= threshold.
struct CheckEntry {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool all_pass = false;

  void add(const std::string& name, double statistic, double threshold,
           double se);
  void finish();
};

/// Extremal entropy inequality: for each input X with E[XX^T] <= S,
/// h(X+Wr) - h(X+We) <= 1/2 logdet(Kx*+Kr) - 1/2 logdet(Kx*+Ke) up to
/// 3x the Monte Carlo standard error. Requires a degraded channel and a
/// Kx* carrying a sufficiency certificate (M1 = 0).
CheckReport eei_check(const CanonicalChannel& ch, const SymMatrix& Kx_star,
                      const std::vector<MixtureInput>& inputs, long n,
                      std::uint64_t seed);

/// de Bruijn identity: d/dt h(X + sqrt(t) Z), Z ~ N(0, base_noise),
/// against 1/2 Tr(base_noise J(X + sqrt(t) Z)) at each grid point, with the
/// finite-difference truncation estimated by step halving.
CheckReport debruijn_check(const MixtureInput& x, const SymMatrix& base_noise,
                           const std::vector<double>& t_grid, long n,
                           std::uint64_t seed);

/// Vector Fisher information inequality
/// J(X1+X2) <= A J(X1) A^T + (I-A) J(X2) (I-A)^T for independent X1, X2.
CheckReport fii_check(const MixtureInput& x1, const MixtureInput& x2,
                      const Eigen::MatrixXd& A, long n, std::uint64_t seed);

/// Cramer-Rao: J(X) >= Cov(X)^{-1}, Monte Carlo Fisher matrix against the
/// closed-form mixture covariance.
CheckReport cramer_rao_check(const MixtureInput& x, long n,
                             std::uint64_t seed);

/// Monotone path X_lambda = sqrt(1-lambda) X + sqrt(lambda) X_G*:
/// g(X_lambda) = h(X_lambda+Wr) - h(X_lambda+We) must be nondecreasing in
/// lambda, with the endpoints matching direct evaluations.
CheckReport path_monotonicity_check(const CanonicalChannel& ch,
                                    const SymMatrix& Kx_star,
                                    const MixtureInput& x,
                                    const std::vector<double>& lambda_grid,
                                    long n, std::uint64_t seed);

}  // namespace wiretap
