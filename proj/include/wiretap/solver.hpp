#pragma once

#include <cstdint>
#include <vector>

#include "wiretap/channel.hpp"
#include "wiretap/matcore.hpp"

namespace wiretap {

struct SolverConfig {
  int restarts = 8;
  int max_outer = 300;    // DC (convex-concave) iterations
  int max_inner = 4000;   // projected-gradient iterations per surrogate
  double tol = 1e-11;     // step/value convergence tolerance
  double cert_tol = 1e-6; // certificate validity tolerance
  std::uint64_t seed = 42;
};

/// Multiplier matrices for the stationarity system
///   (Kx + Kr)^{-1} + M1 = (Kx + Ke)^{-1} + M2,  Kx M1 = 0,  (S - Kx) M2 = 0
/// with residual norms. A certificate is data: an invalid one is reported,
/// never thrown.
struct KktCertificate {
  SymMatrix M1;
  SymMatrix M2;
  double stationarity_residual = 0.0;  // ||M1 - M2 - G||_F
  double comp_slack_1 = 0.0;           // ||Kx M1||_F
  double comp_slack_2 = 0.0;           // ||(S - Kx) M2||_F
  double psd_margin = 0.0;             // min eigenvalue over M1, M2

  bool valid(double tol) const {
    return stationarity_residual <= tol && comp_slack_1 <= tol &&
           comp_slack_2 <= tol && psd_margin >= -1e-8;
  }
};

struct CapacityResult {
  double value = 0.0;  // nats
  SymMatrix Kx_star = SymMatrix::Zero(1);
  KktCertificate certificate{SymMatrix::Zero(1), SymMatrix::Zero(1)};
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> ascent_trace;  // objective per outer iteration, best restart
};

/// Secrecy rate 1/2 logdet(I + Kx Kr^{-1}) - 1/2 logdet(I + Kx Ke^{-1}),
/// evaluated in the symmetry-safe form
/// 1/2 [logdet(Kx+Kr) - logdet Kr] - 1/2 [logdet(Kx+Ke) - logdet Ke].
/// Throws std::domain_error if Kx is infeasible beyond tolerance.
double secrecy_rate(const SymMatrix& Kx, const CanonicalChannel& ch);

/// Gradient of the rate: 1/2 [(Kx+Kr)^{-1} - (Kx+Ke)^{-1}].
SymMatrix rate_gradient(const SymMatrix& Kx, const CanonicalChannel& ch);

/// Best-of-restarts DC (convex-concave) maximization of the secrecy rate
/// over {0 <= Kx <= S}. The subtracted concave term is linearized at the
/// current iterate and the concave surrogate maximized by projected
/// gradient with backtracking, which makes the outer objective monotone
/// nondecreasing. Restart seeds are deterministic: Kx = 0, Kx = S, the
/// box-projected gradient direction, then seeded random PSD points.
CapacityResult maximize_rate(const CanonicalChannel& ch,
                             const SolverConfig& cfg = {});

/// Same objective under {Kx >= 0, trace(Kx) <= P} (total power). The
/// certificate uses the scalar multiplier form M2 = mu I.
CapacityResult maximize_rate_trace(const SymMatrix& Kr, const SymMatrix& Ke,
                                   double P, const SolverConfig& cfg = {});

/// Builds multipliers supported on the near-null spaces of Kx* and S - Kx*
/// (eigenvalues below null_tol * ||S||_2 count as null) by least squares
/// against G = (Kx*+Ke)^{-1} - (Kx*+Kr)^{-1}, and reports all residuals.
KktCertificate kkt_certificate(const SymMatrix& Kx_star,
                               const CanonicalChannel& ch,
                               double null_tol = 1e-7);

/// Sufficiency check for the degraded case: channel degraded (Kr <= Ke),
/// certificate valid, and M1 = 0 within tol.
bool check_theorem1(const SymMatrix& Kx_star, const CanonicalChannel& ch,
                    double tol);

}  // namespace wiretap
