#include "wiretap/matcore.hpp"

#include <sstream>
#include <stdexcept>

namespace wiretap {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix: matrix must be square with dim >= 1");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("SymMatrix: entries must be finite");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::Identity(int dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::Zero(int dim) {
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymMatrix SymMatrix::Diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() + b.mat());
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.mat() - b.mat());
}

SymMatrix operator*(double s, const SymMatrix& a) {
  return SymMatrix(s * a.mat());
}

double default_tol(const SymMatrix& m) {
  return kEigTolRel * (1.0 + m.mat().operatorNorm());
}

double min_eigenvalue(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_psd(const SymMatrix& m, double tol) {
  if (tol < 0) {
    throw std::invalid_argument("is_psd: tol must be nonnegative");
  }
  return min_eigenvalue(m) >= -tol;
}

bool is_psd(const SymMatrix& m) { return is_psd(m, default_tol(m)); }

bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("psd_leq: dimension mismatch");
  }
  return is_psd(b - a, tol);
}

bool psd_leq(const SymMatrix& a, const SymMatrix& b) {
  return psd_leq(a, b, default_tol(b));
}

double logdet_pd(const SymMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.mat());
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "logdet_pd: matrix not positive definite (min eigenvalue "
        << min_eigenvalue(m) << ")";
    throw std::domain_error(msg.str());
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

SymMatrix inverse_pd(const SymMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.mat());
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "inverse_pd: matrix not positive definite (min eigenvalue "
        << min_eigenvalue(m) << ")";
    throw std::domain_error(msg.str());
  }
  return SymMatrix(llt.solve(Eigen::MatrixXd::Identity(m.dim(), m.dim())));
}

SymMatrix sym_sqrt(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = default_tol(m);
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) {
      std::ostringstream msg;
      msg << "sym_sqrt: matrix not PSD (min eigenvalue " << ev(i) << ")";
      throw std::domain_error(msg.str());
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return SymMatrix(es.eigenvectors() * ev.asDiagonal() *
                   es.eigenvectors().transpose());
}

SymMatrix project_box(const SymMatrix& m, const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.mat());
  const double smin = es.eigenvalues().minCoeff();
  if (smin <= 0) {
    std::ostringstream msg;
    msg << "project_box: S not positive definite (min eigenvalue " << smin << ")";
    throw std::domain_error(msg.str());
  }
  Eigen::VectorXd sqrt_ev = es.eigenvalues().array().sqrt();
  Eigen::MatrixXd half = es.eigenvectors() * sqrt_ev.asDiagonal() *
                         es.eigenvectors().transpose();
  Eigen::MatrixXd half_inv = es.eigenvectors() *
                             sqrt_ev.cwiseInverse().asDiagonal() *
                             es.eigenvectors().transpose();
  Eigen::MatrixXd w = half_inv * m.mat() * half_inv;
  w = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(w);
  Eigen::VectorXd clipped =
      ew.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  Eigen::MatrixXd y = ew.eigenvectors() * clipped.asDiagonal() *
                      ew.eigenvectors().transpose();
  return SymMatrix(half * y * half);
}

SymMatrix psd_clip(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return SymMatrix(es.eigenvectors() * ev.asDiagonal() *
                   es.eigenvectors().transpose());
}

}  // namespace wiretap
