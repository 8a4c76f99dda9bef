#pragma once

// Internal: projected-gradient ascent over the matrix box {0 <= X <= S},
// run in S-whitened coordinates where the box becomes {0 <= Y <= I} and
// the projection is an eigenvalue clip.

#include <Eigen/Dense>
#include <functional>

namespace wiretap::detail {

inline Eigen::MatrixXd clip01(const Eigen::MatrixXd& y) {
  Eigen::MatrixXd ys = 0.5 * (y + y.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ys);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

struct Whitener {
  Eigen::MatrixXd half;      // S^{1/2}
  Eigen::MatrixXd half_inv;  // S^{-1/2}

  explicit Whitener(const Eigen::MatrixXd& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
    Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).array().sqrt();
    half = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
    half_inv = es.eigenvectors() * sq.cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose();
  }

  Eigen::MatrixXd to_box(const Eigen::MatrixXd& y) const {
    Eigen::MatrixXd x = half * y * half;
    return 0.5 * (x + x.transpose());
  }
  Eigen::MatrixXd to_white(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y = half_inv * x * half_inv;
    return 0.5 * (y + y.transpose());
  }
};

struct PgResult {
  Eigen::MatrixXd X;
  double value = 0.0;
  double stationarity = 0.0;  // ||clip01(Y + G) - Y||_F at exit
  int iterations = 0;
};

/// Maximizes `value` over the box by projected gradient with Armijo
/// backtracking. `value`/`grad` take the un-whitened matrix X.
inline PgResult pg_maximize_box(
    const std::function<double(const Eigen::MatrixXd&)>& value,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& grad,
    const Whitener& w, const Eigen::MatrixXd& x0, int max_iter, double tol) {
  Eigen::MatrixXd Y = clip01(w.to_white(x0));
  Eigen::MatrixXd X = w.to_box(Y);
  double f = value(X);
  double step = 1.0;
  PgResult out{X, f, 0.0, 0};
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd gx = grad(X);
    Eigen::MatrixXd G = w.half * gx * w.half;
    G = 0.5 * (G + G.transpose());
    out.stationarity = (clip01(Y + G) - Y).norm();
    if (out.stationarity <= tol) break;
    bool accepted = false;
    while (step >= 1e-16) {
      Eigen::MatrixXd Yc = clip01(Y + step * G);
      Eigen::MatrixXd Xc = w.to_box(Yc);
      double fc = value(Xc);
      const double decrease = (G.array() * (Yc - Y).array()).sum();
      if (fc >= f + 1e-4 * decrease && fc >= f) {
        Y = Yc;
        X = Xc;
        f = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) break;
    step = std::min(step * 2.0, 64.0);
  }
  out.X = X;
  out.value = f;
  return out;
}

}  // namespace wiretap::detail
