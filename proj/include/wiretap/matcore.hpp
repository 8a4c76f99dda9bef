#pragma once

#include <Eigen/Dense>

namespace wiretap {

/// Dense real symmetric matrix. Entries are symmetrized as (M + M^T)/2 on
/// construction so that downstream eigen-decompositions never see drift
/// accumulated by gradient updates.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix Identity(int dim);
  static SymMatrix Zero(int dim);
  static SymMatrix Diagonal(const Eigen::VectorXd& d);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

  double norm() const { return mat_.norm(); }
  double trace() const { return mat_.trace(); }

 private:
  Eigen::MatrixXd mat_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

/// Default eigenvalue tolerance: 1e-9 relative to the matrix norm.
/// Every PSD boundary test in the library goes through this unless the
/// caller overrides the tolerance explicitly.
inline constexpr double kEigTolRel = 1e-9;
double default_tol(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

/// True iff the smallest eigenvalue of m is >= -tol.
bool is_psd(const SymMatrix& m, double tol);
bool is_psd(const SymMatrix& m);

/// Positive-semidefinite partial order: a <= b iff b - a is PSD within tol.
bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol);
bool psd_leq(const SymMatrix& a, const SymMatrix& b);

/// Natural-log determinant of a positive definite matrix (Cholesky).
/// Throws std::domain_error carrying the minimum eigenvalue if m is not PD.
double logdet_pd(const SymMatrix& m);

/// Inverse of a positive definite matrix via Cholesky, symmetrized.
SymMatrix inverse_pd(const SymMatrix& m);

/// Symmetric PSD square root R with R*R = m (eigen-decomposition).
SymMatrix sym_sqrt(const SymMatrix& m);

/// Exact projection of m onto the box {X : 0 <= X <= s} in the s-whitened
/// norm: s^{1/2} clip01(s^{-1/2} m s^{-1/2}) s^{1/2}. Requires s PD.
/// Note this is not the Frobenius-norm projection; fixed points coincide.
SymMatrix project_box(const SymMatrix& m, const SymMatrix& s);

/// Eigen-clip to the PSD cone (negative eigenvalues set to zero).
SymMatrix psd_clip(const SymMatrix& m);

}  // namespace wiretap
