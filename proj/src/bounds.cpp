#include "wiretap/bounds.hpp"

#include <cmath>

#include "wiretap/enhance.hpp"
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pg_box.hpp"

namespace wiretap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double logdet_or_throw(const MatrixXd& m, const char* what) {
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "conditional_mi: " << what << " is singular";
    throw std::domain_error(msg.str());
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

Eigen::MatrixXd JointNoise::block() const {
  const int t = Kr.dim();
  MatrixXd b(2 * t, 2 * t);
  b.topLeftCorner(t, t) = Kr.mat();
  b.topRightCorner(t, t) = Kcross;
  b.bottomLeftCorner(t, t) = Kcross.transpose();
  b.bottomRightCorner(t, t) = Ke.mat();
  return b;
}

bool JointNoise::feasible(double tol) const {
  return is_psd(SymMatrix(block()), tol);
}

ParallelResult parallel_capacity(const CanonicalChannel& ch) {
  const int t = ch.dim();
  auto check_diag = [&](const SymMatrix& m, const char* name) {
    MatrixXd off = m.mat() - MatrixXd(m.mat().diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.norm())) {
      std::ostringstream msg;
      msg << "parallel_capacity: " << name << " is not diagonal";
      throw std::invalid_argument(msg.str());
    }
  };
  check_diag(ch.Kr, "K_r");
  check_diag(ch.Ke, "K_e");
  check_diag(ch.S, "S");

  ParallelResult out;
  VectorXd kx = VectorXd::Zero(t);
  for (int i = 0; i < t; ++i) {
    const double kr = ch.Kr(i, i), ke = ch.Ke(i, i), s = ch.S(i, i);
    if (kr < ke) {
      out.active_set.push_back(i);
      kx(i) = s;
      out.value += 0.5 * std::log(1.0 + s / kr) - 0.5 * std::log(1.0 + s / ke);
    }
  }
  out.Kx_star = SymMatrix::Diagonal(kx);
  return out;
}

double conditional_mi(const SymMatrix& Kx, const JointNoise& jn) {
  const int t = jn.Kr.dim();
  if (Kx.dim() != t) {
    throw std::invalid_argument("conditional_mi: dimension mismatch");
  }
  if (!is_psd(Kx, default_tol(Kx))) {
    throw std::invalid_argument("conditional_mi: Kx must be PSD");
  }
  const MatrixXd a = Kx.mat() + jn.Kr.mat();
  const MatrixXd b = Kx.mat() + jn.Kcross;
  const MatrixXd d = Kx.mat() + jn.Ke.mat();
  Eigen::LLT<MatrixXd> lltd(0.5 * (d + d.transpose()));
  if (lltd.info() != Eigen::Success) {
    throw std::domain_error("conditional_mi: covariance of Ye is singular");
  }
  const MatrixXd sig_c = a - b * lltd.solve(b.transpose());

  const MatrixXd b0 = jn.Kcross;
  Eigen::LLT<MatrixXd> llte(jn.Ke.mat());
  if (llte.info() != Eigen::Success) {
    throw std::domain_error("conditional_mi: Ke is singular");
  }
  const MatrixXd n_c = jn.Kr.mat() - b0 * llte.solve(b0.transpose());

  const double ld_sig = logdet_or_throw(sig_c, "conditional signal covariance");
  const double ld_n = logdet_or_throw(n_c, "conditional noise covariance");
  return 0.5 * (ld_sig - ld_n);
}

namespace {

// Inner objective for fixed joint noise; returns -inf on a numerically
// singular conditional covariance so line searches back off.
struct InnerProblem {
  const CanonicalChannel* ch;
  MatrixXd C;
  double ld_noise_cond;  // logdet of Kr - C Ke^{-1} C^T

  double value(const MatrixXd& X) const {
    const MatrixXd a = X + ch->Kr.mat();
    const MatrixXd b = X + C;
    const MatrixXd d = X + ch->Ke.mat();
    Eigen::LLT<MatrixXd> lltd(0.5 * (d + d.transpose()));
    if (lltd.info() != Eigen::Success) {
      return -std::numeric_limits<double>::infinity();
    }
    MatrixXd sc = a - b * lltd.solve(b.transpose());
    Eigen::LLT<MatrixXd> llts(0.5 * (sc + sc.transpose()));
    if (llts.info() != Eigen::Success) {
      return -std::numeric_limits<double>::infinity();
    }
    const double ld =
        2.0 * llts.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return 0.5 * (ld - ld_noise_cond);
  }

  MatrixXd grad(const MatrixXd& X) const {
    const int t = ch->dim();
    MatrixXd sigma(2 * t, 2 * t);
    sigma.topLeftCorner(t, t) = X + ch->Kr.mat();
    sigma.topRightCorner(t, t) = X + C;
    sigma.bottomLeftCorner(t, t) = X + C.transpose();
    sigma.bottomRightCorner(t, t) = X + ch->Ke.mat();
    sigma = 0.5 * (sigma + sigma.transpose());
    Eigen::LDLT<MatrixXd> ldlt(sigma);
    MatrixXd P = ldlt.solve(MatrixXd::Identity(2 * t, 2 * t));
    MatrixXd jpj = P.topLeftCorner(t, t) + P.topRightCorner(t, t) +
                   P.bottomLeftCorner(t, t) + P.bottomRightCorner(t, t);
    Eigen::LLT<MatrixXd> llte(X + ch->Ke.mat());
    MatrixXd inv_e = llte.solve(MatrixXd::Identity(t, t));
    MatrixXd g = 0.5 * (jpj - inv_e);
    return 0.5 * (g + g.transpose());
  }
};

InnerProblem make_inner(const CanonicalChannel& ch, const MatrixXd& C) {
  InnerProblem p{&ch, C, 0.0};
  Eigen::LLT<MatrixXd> llte(ch.Ke.mat());
  MatrixXd nc = ch.Kr.mat() - C * llte.solve(C.transpose());
  nc = 0.5 * (nc + nc.transpose());
  Eigen::LLT<MatrixXd> lltn(nc);
  if (lltn.info() != Eigen::Success) {
    throw std::domain_error("sato: conditional noise covariance singular");
  }
  p.ld_noise_cond =
      2.0 * lltn.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return p;
}

struct InnerResult {
  double value = 0.0;
  MatrixXd Kx;
};

InnerResult inner_max(const CanonicalChannel& ch, const detail::Whitener& w,
                      const MatrixXd& C, const std::vector<MatrixXd>& seeds,
                      int max_iter, double tol) {
  InnerProblem p = make_inner(ch, C);
  auto value = [&p](const MatrixXd& X) { return p.value(X); };
  auto grad = [&p](const MatrixXd& X) { return p.grad(X); };
  InnerResult best;
  best.Kx = MatrixXd::Zero(ch.dim(), ch.dim());
  best.value = p.value(best.Kx);
  for (const MatrixXd& s : seeds) {
    detail::PgResult r = detail::pg_maximize_box(value, grad, w, s, max_iter, tol);
    if (r.value > best.value) {
      best.value = r.value;
      best.Kx = r.X;
    }
  }
  return best;
}

// Joint-noise feasibility: eigen-clip the stacked covariance to PSD with a
// small floor, restore the exact marginals, and if that breaks feasibility
// shrink toward the last feasible cross-covariance by bisection.
MatrixXd project_feasible_cross(const MatrixXd& C, const MatrixXd& C_last,
                                const CanonicalChannel& ch) {
  const int t = ch.dim();
  const double floor_eps =
      1e-9 * (1.0 + ch.Kr.norm() + ch.Ke.norm());
  auto block_of = [&](const MatrixXd& cross) {
    MatrixXd b(2 * t, 2 * t);
    b.topLeftCorner(t, t) = ch.Kr.mat();
    b.topRightCorner(t, t) = cross;
    b.bottomLeftCorner(t, t) = cross.transpose();
    b.bottomRightCorner(t, t) = ch.Ke.mat();
    return b;
  };
  auto min_eig = [](const MatrixXd& b) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (b + b.transpose()),
                                               Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  if (min_eig(block_of(C)) >= floor_eps) return C;

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(block_of(C));
  VectorXd ev = es.eigenvalues().cwiseMax(floor_eps);
  MatrixXd clipped =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  MatrixXd C1 = clipped.topRightCorner(t, t);
  if (min_eig(block_of(C1)) >= floor_eps) return C1;

  // Restoring marginals broke PSD: bisect toward the last feasible point.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    MatrixXd Cm = C_last + mid * (C1 - C_last);
    if (min_eig(block_of(Cm)) >= floor_eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return C_last + lo * (C1 - C_last);
}

}  // namespace

SatoResult sato_upper_bound(const CanonicalChannel& ch, const SatoConfig& cfg) {
  validate_canonical(ch);
  const int t = ch.dim();
  detail::Whitener w(ch.S.mat());

  std::vector<MatrixXd> seeds;
  seeds.push_back(ch.S.mat());
  seeds.push_back(0.5 * ch.S.mat());
  if (cfg.extra_inner_seed) seeds.push_back(cfg.extra_inner_seed->mat());

  MatrixXd C = MatrixXd::Zero(t, t);
  InnerResult cur = inner_max(ch, w, C, seeds, cfg.max_inner, cfg.tol);
  if (cfg.cross_seed) {
    MatrixXd Cs = project_feasible_cross(*cfg.cross_seed, C, ch);
    InnerResult rs = inner_max(ch, w, Cs, seeds, cfg.max_inner, cfg.tol);
    if (rs.value < cur.value) {
      C = Cs;
      cur = rs;
    }
  }

  SatoResult out;
  out.outer_values.push_back(cur.value);
  double alpha = 1.0;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    // Envelope gradient of the inner max w.r.t. the cross-covariance.
    MatrixXd sigma(2 * t, 2 * t);
    sigma.topLeftCorner(t, t) = cur.Kx + ch.Kr.mat();
    sigma.topRightCorner(t, t) = cur.Kx + C;
    sigma.bottomLeftCorner(t, t) = cur.Kx + C.transpose();
    sigma.bottomRightCorner(t, t) = cur.Kx + ch.Ke.mat();
    sigma = 0.5 * (sigma + sigma.transpose());
    MatrixXd P = Eigen::LDLT<MatrixXd>(sigma).solve(
        MatrixXd::Identity(2 * t, 2 * t));
    MatrixXd nblock(2 * t, 2 * t);
    nblock.topLeftCorner(t, t) = ch.Kr.mat();
    nblock.topRightCorner(t, t) = C;
    nblock.bottomLeftCorner(t, t) = C.transpose();
    nblock.bottomRightCorner(t, t) = ch.Ke.mat();
    nblock = 0.5 * (nblock + nblock.transpose()) +
             1e-14 * MatrixXd::Identity(2 * t, 2 * t);
    MatrixXd Q = Eigen::LDLT<MatrixXd>(nblock).solve(
        MatrixXd::Identity(2 * t, 2 * t));
    MatrixXd g = P.topRightCorner(t, t) - Q.topRightCorner(t, t);

    bool improved = false;
    MatrixXd C_next = C;
    InnerResult next = cur;
    while (alpha >= 1e-13) {
      MatrixXd Cc = project_feasible_cross(C - alpha * g, C, ch);
      std::vector<MatrixXd> warm = seeds;
      warm.push_back(cur.Kx);
      InnerResult r = inner_max(ch, w, Cc, warm, cfg.max_inner, cfg.tol);
      if (r.value < cur.value - 1e-14) {
        C_next = Cc;
        next = r;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) {
      out.converged = true;
      break;
    }
    C = C_next;
    cur = next;
    out.outer_values.push_back(cur.value);
    alpha = std::min(alpha * 2.0, 64.0);
  }

  out.value = cur.value;
  out.Kcross_star = C;
  out.Kx_star = SymMatrix(0.5 * (cur.Kx + cur.Kx.transpose()));
  return out;
}

CrosscheckReport crosscheck(const CanonicalChannel& ch, double tol_gap,
                            const SolverConfig& solver_cfg,
                            const SatoConfig& sato_cfg) {
  CrosscheckReport rep;
  rep.capacity = maximize_rate(ch, solver_cfg);
  SatoConfig sc = sato_cfg;
  sc.extra_inner_seed = rep.capacity.Kx_star;
  if (!sc.cross_seed && rep.capacity.converged) {
    EnhancedChannel e = build_enhanced(rep.capacity.Kx_star,
                                       rep.capacity.certificate, ch);
    sc.cross_seed = e.Ktilde_r.mat();
  }
  rep.sato = sato_upper_bound(ch, sc);
  rep.solver_value = rep.capacity.value;
  rep.sato_value = rep.sato.value;
  rep.gap = rep.sato_value - rep.solver_value;
  rep.dominance = rep.solver_value <= rep.sato_value + 1e-8;
  rep.pass = std::abs(rep.gap) <= tol_gap && rep.dominance;
  return rep;
}

}  // namespace wiretap
