#include "wiretap/channel.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace wiretap {

void validate_canonical(const CanonicalChannel& ch) {
  const int t = ch.Kr.dim();
  auto check = [&](const SymMatrix& m, const char* name) {
    if (m.dim() != t) {
      std::ostringstream msg;
      msg << "canonical channel: " << name << " has dim " << m.dim()
          << ", expected " << t;
      throw std::invalid_argument(msg.str());
    }
    const double mineig = min_eigenvalue(m);
    if (mineig <= 0) {
      std::ostringstream msg;
      msg << "canonical channel: " << name
          << " is not positive definite (min eigenvalue " << mineig << ")";
      throw std::invalid_argument(msg.str());
    }
  };
  check(ch.Kr, "K_r");
  check(ch.Ke, "K_e");
  check(ch.S, "S");
}

namespace {

// Noise covariance (H~^T H~)^{-1} after flooring the spectrum of H^T H at
// eps^2. Directions the channel does not observe get variance 1/eps^2.
SymMatrix gram_floor_inverse(const Eigen::MatrixXd& h, double eps) {
  Eigen::MatrixXd gram = h.transpose() * h;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(eps * eps);
  return SymMatrix(es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose());
}

}  // namespace

void canonical_noise(const GeneralChannel& ch, double eps, SymMatrix* Kr,
                     SymMatrix* Ke) {
  if (eps <= 0) {
    throw std::invalid_argument("canonicalize: eps must be positive");
  }
  if (!ch.Hr.allFinite() || !ch.He.allFinite()) {
    throw std::invalid_argument("canonicalize: channel matrices must be finite");
  }
  if (ch.Hr.cols() != ch.He.cols()) {
    throw std::invalid_argument(
        "canonicalize: H_r and H_e must have the same number of columns");
  }
  *Kr = gram_floor_inverse(ch.Hr, eps);
  *Ke = gram_floor_inverse(ch.He, eps);
}

CanonicalChannel canonicalize(const GeneralChannel& ch, double eps) {
  const auto* cap = std::get_if<CovarianceCap>(&ch.constraint);
  if (cap == nullptr) {
    throw std::invalid_argument(
        "canonicalize: requires a covariance constraint (total power is "
        "handled by capacity_general)");
  }
  SymMatrix Kr = SymMatrix::Identity(ch.nt());
  SymMatrix Ke = SymMatrix::Identity(ch.nt());
  canonical_noise(ch, eps, &Kr, &Ke);
  CanonicalChannel out{Kr, Ke, cap->S};
  validate_canonical(out);
  return out;
}

namespace {

Eigen::MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

constexpr double kCondShift = 0.1;  // delta in G G^T + delta I

SymMatrix random_spd(std::mt19937_64& rng, int t) {
  Eigen::MatrixXd g = random_gaussian(rng, t, t);
  return SymMatrix(g * g.transpose() +
                   kCondShift * Eigen::MatrixXd::Identity(t, t));
}

SymMatrix random_diag(std::mt19937_64& rng, int t) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd d(t);
  for (int i = 0; i < t; ++i) {
    const double g = normal(rng);
    d(i) = g * g + kCondShift;
  }
  return SymMatrix::Diagonal(d);
}

}  // namespace

CanonicalChannel random_instance(std::uint64_t seed, int t, InstanceKind kind) {
  if (t < 1) {
    throw std::invalid_argument("random_instance: t must be >= 1");
  }
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL *
                              (static_cast<std::uint64_t>(kind) + 1)));
  switch (kind) {
    case InstanceKind::General: {
      SymMatrix Kr = random_spd(rng, t);
      SymMatrix Ke = random_spd(rng, t);
      SymMatrix S = random_spd(rng, t);
      return {Kr, Ke, S};
    }
    case InstanceKind::Degraded: {
      SymMatrix Kr = random_spd(rng, t);
      SymMatrix Ke = Kr + random_spd(rng, t);
      SymMatrix S = random_spd(rng, t);
      return {Kr, Ke, S};
    }
    case InstanceKind::Reversed: {
      SymMatrix Ke = random_spd(rng, t);
      SymMatrix Kr = Ke + random_spd(rng, t);
      SymMatrix S = random_spd(rng, t);
      return {Kr, Ke, S};
    }
    case InstanceKind::Diagonal: {
      SymMatrix Kr = random_diag(rng, t);
      SymMatrix Ke = random_diag(rng, t);
      SymMatrix S = random_diag(rng, t);
      return {Kr, Ke, S};
    }
  }
  throw std::invalid_argument("random_instance: unknown kind");
}

}  // namespace wiretap
