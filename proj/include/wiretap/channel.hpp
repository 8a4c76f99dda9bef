#pragma once

#include <cstdint>
#include <variant>

#include "wiretap/matcore.hpp"

namespace wiretap {

struct TotalPower {
  double P;
};

struct CovarianceCap {
  SymMatrix S;
};

/// Raw channel: y_r = Hr x + w_r, y_e = He x + w_e with unit-variance white
/// noise, plus either a total power constraint or an input covariance cap.
struct GeneralChannel {
  Eigen::MatrixXd Hr;  // nr x nt
  Eigen::MatrixXd He;  // ne x nt
  std::variant<TotalPower, CovarianceCap> constraint;

  int nt() const { return static_cast<int>(Hr.cols()); }
};

/// Canonical square model y_r = x + w_r, y_e = x + w_e with PD noise
/// covariances Kr, Ke and PD input covariance cap S, all of dimension t.
struct CanonicalChannel {
  SymMatrix Kr;
  SymMatrix Ke;
  SymMatrix S;

  int dim() const { return Kr.dim(); }
};

/// Validates the CanonicalChannel invariants (all square, same dim, PD).
/// Throws std::invalid_argument naming the offending matrix.
void validate_canonical(const CanonicalChannel& ch);

/// Reduces a general channel with covariance constraint to the canonical
/// form by flooring the spectrum of each Gram matrix H^T H at eps^2; rank
/// deficient directions get noise variance 1/eps^2. As eps -> 0 the
/// canonical capacity approaches the general one.
CanonicalChannel canonicalize(const GeneralChannel& ch, double eps);

/// Noise covariances alone, usable for both constraint types.
void canonical_noise(const GeneralChannel& ch, double eps, SymMatrix* Kr,
                     SymMatrix* Ke);

enum class InstanceKind { General, Degraded, Reversed, Diagonal };

/// Deterministic random canonical channel. `Degraded` guarantees Kr <= Ke,
/// `Reversed` guarantees Ke <= Kr, `Diagonal` makes all matrices diagonal.
CanonicalChannel random_instance(std::uint64_t seed, int t, InstanceKind kind);

}  // namespace wiretap
