#include "wiretap/solver.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pg_box.hpp"

namespace wiretap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd inv_spd(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("solver: shifted matrix not positive definite");
  }
  MatrixXd inv = llt.solve(MatrixXd::Identity(m.rows(), m.cols()));
  return 0.5 * (inv + inv.transpose());
}

double logdet_spd(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("solver: matrix not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Rate as a plain function of the raw matrix, no feasibility check.
double rate_raw(const MatrixXd& Kx, const CanonicalChannel& ch) {
  return 0.5 * (logdet_spd(Kx + ch.Kr.mat()) - logdet_spd(ch.Kr.mat())) -
         0.5 * (logdet_spd(Kx + ch.Ke.mat()) - logdet_spd(ch.Ke.mat()));
}

MatrixXd grad_raw(const MatrixXd& Kx, const CanonicalChannel& ch) {
  return 0.5 * (inv_spd(Kx + ch.Kr.mat()) - inv_spd(Kx + ch.Ke.mat()));
}

struct DcOutcome {
  MatrixXd Kx;
  double value = 0.0;
  bool converged = false;
  std::vector<double> trace;
};

// Convex-concave outer loop: linearize the subtracted term at the current
// iterate and maximize the concave surrogate over the box. The surrogate
// touches the objective at the iterate, so accepted steps never decrease
// the true rate.
DcOutcome dc_maximize(const CanonicalChannel& ch, const detail::Whitener& w,
                      const MatrixXd& x0, const SolverConfig& cfg) {
  DcOutcome out;
  MatrixXd X = detail::clip01(w.to_white(x0));
  X = w.to_box(X);
  double f = rate_raw(X, ch);
  out.trace.push_back(f);
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const MatrixXd L = inv_spd(X + ch.Ke.mat());
    auto surrogate = [&](const MatrixXd& Z) {
      return 0.5 * logdet_spd(Z + ch.Kr.mat()) -
             0.5 * (L.array() * Z.array()).sum();
    };
    auto surrogate_grad = [&](const MatrixXd& Z) {
      return MatrixXd(0.5 * (inv_spd(Z + ch.Kr.mat()) - L));
    };
    detail::PgResult inner = detail::pg_maximize_box(
        surrogate, surrogate_grad, w, X, cfg.max_inner, cfg.tol);
    const double fn = rate_raw(inner.X, ch);
    out.trace.push_back(fn);
    const double dx = (inner.X - X).norm();
    X = inner.X;
    const bool small_change = (fn - f) <= cfg.tol * (1.0 + std::abs(fn)) &&
                              dx <= 1e-9 * (1.0 + X.norm());
    f = std::max(f, fn);
    if (small_change) {
      out.converged = true;
      break;
    }
  }
  out.Kx = X;
  out.value = f;
  return out;
}

// One DC outer iteration: linearize at X, maximize the surrogate.
MatrixXd dc_step(const CanonicalChannel& ch, const detail::Whitener& w,
                 const MatrixXd& X, const SolverConfig& cfg) {
  const MatrixXd L = inv_spd(X + ch.Ke.mat());
  auto surrogate = [&](const MatrixXd& Z) {
    return 0.5 * logdet_spd(Z + ch.Kr.mat()) -
           0.5 * (L.array() * Z.array()).sum();
  };
  auto surrogate_grad = [&](const MatrixXd& Z) {
    return MatrixXd(0.5 * (inv_spd(Z + ch.Kr.mat()) - L));
  };
  return detail::pg_maximize_box(surrogate, surrogate_grad, w, X,
                                 cfg.max_inner, cfg.tol)
      .X;
}

double certificate_residual(const KktCertificate& c) {
  return std::max({c.stationarity_residual, c.comp_slack_1, c.comp_slack_2,
                   -std::min(c.psd_margin, 0.0)});
}

MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

// vec of a column-major t x t matrix u v^T for all pairs of columns of U.
void append_kron_columns(const MatrixXd& U, double sign, MatrixXd* system,
                         int col_offset) {
  const int t = static_cast<int>(U.rows());
  const int k = static_cast<int>(U.cols());
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      MatrixXd outer = U.col(i) * U.col(j).transpose();
      system->col(col_offset + j * k + i) =
          sign * Eigen::Map<VectorXd>(outer.data(), t * t);
    }
  }
}

MatrixXd null_space_basis(const MatrixXd& m, double threshold) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  std::vector<int> idx;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < threshold) idx.push_back(i);
  }
  MatrixXd basis(m.rows(), static_cast<int>(idx.size()));
  for (size_t c = 0; c < idx.size(); ++c) {
    basis.col(static_cast<int>(c)) = es.eigenvectors().col(idx[c]);
  }
  return basis;
}

}  // namespace

double secrecy_rate(const SymMatrix& Kx, const CanonicalChannel& ch) {
  if (Kx.dim() != ch.dim()) {
    throw std::invalid_argument("secrecy_rate: dimension mismatch");
  }
  const double tol = 1e-6 * (1.0 + ch.S.mat().operatorNorm());
  if (!is_psd(Kx, tol) || !psd_leq(Kx, ch.S, tol)) {
    std::ostringstream msg;
    msg << "secrecy_rate: Kx infeasible (min eig " << min_eigenvalue(Kx)
        << ", min eig of S - Kx " << min_eigenvalue(ch.S - Kx) << ")";
    throw std::domain_error(msg.str());
  }
  return rate_raw(Kx.mat(), ch);
}

SymMatrix rate_gradient(const SymMatrix& Kx, const CanonicalChannel& ch) {
  if (Kx.dim() != ch.dim()) {
    throw std::invalid_argument("rate_gradient: dimension mismatch");
  }
  return SymMatrix(grad_raw(Kx.mat(), ch));
}

CapacityResult maximize_rate(const CanonicalChannel& ch,
                             const SolverConfig& cfg) {
  validate_canonical(ch);
  const int t = ch.dim();
  detail::Whitener w(ch.S.mat());

  std::vector<MatrixXd> seeds;
  seeds.push_back(MatrixXd::Zero(t, t));
  seeds.push_back(ch.S.mat());
  {
    MatrixXd g0 = grad_raw(MatrixXd::Zero(t, t), ch);
    const double gn = g0.norm();
    const double scale = ch.S.mat().operatorNorm() / std::max(gn, 1e-300);
    seeds.push_back(project_box(SymMatrix(scale * g0), ch.S).mat());
  }
  std::mt19937_64 rng(cfg.seed);
  while (static_cast<int>(seeds.size()) < std::max(cfg.restarts, 1)) {
    MatrixXd r = random_gaussian(rng, t, t);
    MatrixXd candidate = (ch.S.mat().operatorNorm() / t) * (r * r.transpose());
    seeds.push_back(project_box(SymMatrix(candidate), ch.S).mat());
  }
  seeds.resize(std::max(cfg.restarts, 1), MatrixXd::Zero(t, t));

  CapacityResult best;
  best.Kx_star = SymMatrix::Zero(t);
  bool have_best = false;
  double best_value = 0.0;
  DcOutcome best_outcome;
  for (size_t i = 0; i < seeds.size(); ++i) {
    DcOutcome run = dc_maximize(ch, w, seeds[i], cfg);
    if (!have_best || run.value > best_value) {
      have_best = true;
      best_value = run.value;
      best_outcome = run;
    }
  }

  // Polish: the inner tolerance bounds surrogate stationarity, not the
  // certificate residual, and the two are not monotonically linked. Keep
  // stepping from the best point and retain the iterate whose certificate
  // residual is smallest; DC steps never lower the true objective.
  MatrixXd X = best_outcome.Kx;
  KktCertificate cert = kkt_certificate(SymMatrix(X), ch);
  double res = certificate_residual(cert);
  MatrixXd X_best = X;
  for (int k = 0; k < 20 && res > 1e-12; ++k) {
    X = dc_step(ch, w, X, cfg);
    KktCertificate c2 = kkt_certificate(SymMatrix(X), ch);
    const double r2 = certificate_residual(c2);
    if (r2 < res) {
      res = r2;
      cert = c2;
      X_best = X;
    }
  }

  best.value = std::max(best_value, rate_raw(X_best, ch));
  best.Kx_star = SymMatrix(X_best);
  best.ascent_trace = best_outcome.trace;
  best.restarts_used = static_cast<int>(seeds.size());
  best.certificate = cert;
  best.converged =
      best_outcome.converged && best.certificate.valid(cfg.cert_tol);
  return best;
}

KktCertificate kkt_certificate(const SymMatrix& Kx_star,
                               const CanonicalChannel& ch, double null_tol) {
  const int t = ch.dim();
  const MatrixXd Kx = Kx_star.mat();
  const MatrixXd G =
      inv_spd(Kx + ch.Ke.mat()) - inv_spd(Kx + ch.Kr.mat());
  const double thr = null_tol * ch.S.mat().operatorNorm();
  const MatrixXd U1 = null_space_basis(Kx, thr);
  const MatrixXd U2 = null_space_basis(ch.S.mat() - Kx, thr);
  const int k1 = static_cast<int>(U1.cols());
  const int k2 = static_cast<int>(U2.cols());

  MatrixXd M1 = MatrixXd::Zero(t, t);
  MatrixXd M2 = MatrixXd::Zero(t, t);
  if (k1 + k2 > 0) {
    MatrixXd system(t * t, k1 * k1 + k2 * k2);
    append_kron_columns(U1, 1.0, &system, 0);
    append_kron_columns(U2, -1.0, &system, k1 * k1);
    MatrixXd g = G;
    VectorXd rhs = Eigen::Map<VectorXd>(g.data(), t * t);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(system);
    VectorXd sol = cod.solve(rhs);
    if (k1 > 0) {
      MatrixXd A = Eigen::Map<MatrixXd>(sol.data(), k1, k1);
      A = 0.5 * (A + A.transpose());
      M1 = U1 * A * U1.transpose();
      M1 = 0.5 * (M1 + M1.transpose());
    }
    if (k2 > 0) {
      MatrixXd B = Eigen::Map<MatrixXd>(sol.data() + k1 * k1, k2, k2);
      B = 0.5 * (B + B.transpose());
      M2 = U2 * B * U2.transpose();
      M2 = 0.5 * (M2 + M2.transpose());
    }
  }

  KktCertificate cert{SymMatrix(M1), SymMatrix(M2)};
  cert.stationarity_residual = (M1 - M2 - G).norm();
  cert.comp_slack_1 = (Kx * M1).norm();
  cert.comp_slack_2 = ((ch.S.mat() - Kx) * M2).norm();
  cert.psd_margin =
      std::min(min_eigenvalue(cert.M1), min_eigenvalue(cert.M2));
  return cert;
}

bool check_theorem1(const SymMatrix& Kx_star, const CanonicalChannel& ch,
                    double tol) {
  if (!psd_leq(ch.Kr, ch.Ke, tol)) return false;
  KktCertificate cert = kkt_certificate(Kx_star, ch);
  return cert.valid(tol) && cert.M1.norm() <= tol;
}

namespace {

// Feasibility map for {Kx >= 0, trace <= P}: eigen-clip to PSD, then
// rescale the trace if the cap is violated.
MatrixXd project_trace(const MatrixXd& m, double P) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (tr > P && tr > 0) ev *= P / tr;
  MatrixXd x = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (x + x.transpose());
}

KktCertificate kkt_certificate_trace(const MatrixXd& Kx,
                                     const CanonicalChannel& ch, double P) {
  const int t = static_cast<int>(Kx.rows());
  const MatrixXd G = inv_spd(Kx + ch.Ke.mat()) - inv_spd(Kx + ch.Kr.mat());
  const double thr = 1e-7 * std::max(P, 1.0);
  const MatrixXd U1 = null_space_basis(Kx, thr);
  const int k1 = static_cast<int>(U1.cols());
  const bool trace_active = (P - Kx.trace()) < 1e-7 * std::max(P, 1.0);

  const int cols = k1 * k1 + (trace_active ? 1 : 0);
  MatrixXd M1 = MatrixXd::Zero(t, t);
  double mu = 0.0;
  if (cols > 0) {
    MatrixXd system(t * t, cols);
    if (k1 > 0) append_kron_columns(U1, 1.0, &system, 0);
    if (trace_active) {
      MatrixXd eye = MatrixXd::Identity(t, t);
      system.col(k1 * k1) = -Eigen::Map<VectorXd>(eye.data(), t * t);
    }
    MatrixXd g = G;
    VectorXd rhs = Eigen::Map<VectorXd>(g.data(), t * t);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(system);
    VectorXd sol = cod.solve(rhs);
    if (k1 > 0) {
      MatrixXd A = Eigen::Map<MatrixXd>(sol.data(), k1, k1);
      A = 0.5 * (A + A.transpose());
      M1 = U1 * A * U1.transpose();
      M1 = 0.5 * (M1 + M1.transpose());
    }
    if (trace_active) mu = std::max(sol(k1 * k1), 0.0);
  }
  MatrixXd M2 = mu * MatrixXd::Identity(t, t);
  KktCertificate cert{SymMatrix(M1), SymMatrix(M2)};
  cert.stationarity_residual = (M1 - M2 - G).norm();
  cert.comp_slack_1 = (Kx * M1).norm();
  cert.comp_slack_2 = std::abs(P - Kx.trace()) * mu;
  cert.psd_margin = std::min(min_eigenvalue(cert.M1), mu);
  return cert;
}

}  // namespace

CapacityResult maximize_rate_trace(const SymMatrix& Kr, const SymMatrix& Ke,
                                   double P, const SolverConfig& cfg) {
  if (P <= 0) {
    throw std::invalid_argument("maximize_rate_trace: P must be positive");
  }
  const int t = Kr.dim();
  CanonicalChannel ch{Kr, Ke, SymMatrix(P * Eigen::MatrixXd::Identity(t, t))};

  std::vector<MatrixXd> seeds;
  seeds.push_back(MatrixXd::Zero(t, t));
  seeds.push_back((P / t) * MatrixXd::Identity(t, t));
  {
    MatrixXd g0 = grad_raw(MatrixXd::Zero(t, t), ch);
    const double gn = g0.norm();
    seeds.push_back(project_trace((P / std::max(gn, 1e-300)) * g0, P));
  }
  std::mt19937_64 rng(cfg.seed);
  while (static_cast<int>(seeds.size()) < std::max(cfg.restarts, 1)) {
    MatrixXd r = random_gaussian(rng, t, t);
    seeds.push_back(project_trace((P / t) * (r * r.transpose()), P));
  }

  double best_value = 0.0;
  MatrixXd best_Kx = MatrixXd::Zero(t, t);
  std::vector<double> best_trace;
  bool best_converged = false;
  bool have_best = false;

  for (const MatrixXd& x0 : seeds) {
    MatrixXd X = project_trace(x0, P);
    double f = rate_raw(X, ch);
    std::vector<double> trace{f};
    bool converged = false;
    for (int outer = 0; outer < cfg.max_outer; ++outer) {
      const MatrixXd L = inv_spd(X + ch.Ke.mat());
      // projected ascent on the concave surrogate, plain backtracking
      MatrixXd Z = X;
      double fz = 0.5 * logdet_spd(Z + ch.Kr.mat()) -
                  0.5 * (L.array() * Z.array()).sum();
      double step = 1.0;
      for (int inner = 0; inner < cfg.max_inner; ++inner) {
        MatrixXd g = 0.5 * (inv_spd(Z + ch.Kr.mat()) - L);
        if ((project_trace(Z + g, P) - Z).norm() <= cfg.tol) break;
        bool accepted = false;
        while (step >= 1e-16) {
          MatrixXd Zc = project_trace(Z + step * g, P);
          double fc = 0.5 * logdet_spd(Zc + ch.Kr.mat()) -
                      0.5 * (L.array() * Zc.array()).sum();
          if (fc > fz) {
            Z = Zc;
            fz = fc;
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) break;
        step = std::min(step * 2.0, 64.0);
      }
      const double fn = rate_raw(Z, ch);
      trace.push_back(fn);
      const double dx = (Z - X).norm();
      X = Z;
      if ((fn - f) <= cfg.tol * (1.0 + std::abs(fn)) &&
          dx <= 1e-9 * (1.0 + X.norm())) {
        f = std::max(f, fn);
        converged = true;
        break;
      }
      f = std::max(f, fn);
    }
    if (!have_best || f > best_value) {
      have_best = true;
      best_value = f;
      best_Kx = X;
      best_trace = trace;
      best_converged = converged;
    }
  }

  CapacityResult out;
  out.value = best_value;
  out.Kx_star = SymMatrix(best_Kx);
  out.ascent_trace = best_trace;
  out.restarts_used = static_cast<int>(seeds.size());
  out.certificate = kkt_certificate_trace(best_Kx, ch, P);
  out.converged = best_converged && out.certificate.valid(cfg.cert_tol);
  return out;
}

}  // namespace wiretap
