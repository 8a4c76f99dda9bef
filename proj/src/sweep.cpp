#include "wiretap/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace wiretap {

GeneralCapacityResult capacity_general(const GeneralChannel& ch,
                                       const SweepConfig& cfg) {
  if (cfg.eps_sweep.empty()) {
    throw std::invalid_argument("capacity_general: eps sweep is empty");
  }
  for (size_t i = 0; i < cfg.eps_sweep.size(); ++i) {
    if (cfg.eps_sweep[i] <= 0 ||
        (i > 0 && cfg.eps_sweep[i] >= cfg.eps_sweep[i - 1])) {
      throw std::invalid_argument(
          "capacity_general: eps sweep must be strictly decreasing and "
          "positive");
    }
  }

  GeneralCapacityResult out;
  for (double eps : cfg.eps_sweep) {
    CapacityResult r;
    if (const auto* tp = std::get_if<TotalPower>(&ch.constraint)) {
      SymMatrix Kr = SymMatrix::Identity(ch.nt());
      SymMatrix Ke = SymMatrix::Identity(ch.nt());
      canonical_noise(ch, eps, &Kr, &Ke);
      r = maximize_rate_trace(Kr, Ke, tp->P, cfg.solver);
    } else {
      r = maximize_rate(canonicalize(ch, eps), cfg.solver);
    }
    out.eps.push_back(eps);
    out.values.push_back(r.value);
    out.final = r;
  }

  const size_t n = out.values.size();
  if (n >= 2) {
    const double v1 = out.values[n - 2], v2 = out.values[n - 1];
    const double ratio = out.eps[n - 2] / out.eps[n - 1];
    out.extrapolated = v2 + (v2 - v1) / (ratio - 1.0);
    out.converged = std::abs(v2 - v1) <= cfg.conv_tol * (1.0 + std::abs(v2)) &&
                    out.final.converged;
  } else {
    out.extrapolated = out.values.back();
    out.converged = out.final.converged;
  }
  return out;
}

}  // namespace wiretap
