#include "wiretap/eei.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wiretap/solver.hpp"

namespace wiretap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr long kBatch = 8192;  // fixed batch size so the reduction is
                               // independent of how work would be split
constexpr double kLog2Pi = 1.8378770664093453;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream));
}

double pairwise_sum(const double* d, size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += d[i];
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(d, half) + pairwise_sum(d + half, n - half);
}

struct MeanResult {
  double mean = 0.0;
  double se = 0.0;
};

MeanResult mean_and_se(const std::vector<double>& vals) {
  const size_t n = vals.size();
  MeanResult r;
  r.mean = pairwise_sum(vals.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (size_t i = 0; i < n; ++i) {
    const double d = vals[i] - r.mean;
    sq[i] = d * d;
  }
  const double var =
      pairwise_sum(sq.data(), n) / static_cast<double>(n > 1 ? n - 1 : 1);
  r.se = std::sqrt(var / static_cast<double>(n));
  return r;
}

/// Gaussian mixture with one shared PD covariance; exact log-density,
/// score, and sampling.
class Gm {
 public:
  Gm(const std::vector<double>& weights, const std::vector<VectorXd>& means,
     const MatrixXd& cov)
      : weights_(weights), means_(means) {
    const int t = static_cast<int>(cov.rows());
    MatrixXd c = 0.5 * (cov + cov.transpose());
    Eigen::LLT<MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
      throw std::domain_error("mixture: component covariance not PD");
    }
    chol_ = llt.matrixL();
    cov_inv_ = llt.solve(MatrixXd::Identity(t, t));
    const double logdet =
        2.0 * chol_.diagonal().array().log().sum();
    log_norm_ = -0.5 * (t * kLog2Pi + logdet);
    log_w_.resize(weights.size());
    cum_w_.resize(weights.size());
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      log_w_[i] = std::log(weights[i]);
      acc += weights[i];
      cum_w_[i] = acc;
    }
  }

  int dim() const { return static_cast<int>(cov_inv_.rows()); }

  double log_density(const VectorXd& y) const {
    double best = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> ll;
    ll.resize(weights_.size());
    for (size_t i = 0; i < means_.size(); ++i) {
      const VectorXd d = y - means_[i];
      ll[i] = log_w_[i] + log_norm_ - 0.5 * d.dot(cov_inv_ * d);
      best = std::max(best, ll[i]);
    }
    double s = 0.0;
    for (double v : ll) s += std::exp(v - best);
    return best + std::log(s);
  }

  VectorXd score(const VectorXd& y) const {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> ll(means_.size());
    for (size_t i = 0; i < means_.size(); ++i) {
      const VectorXd d = y - means_[i];
      ll[i] = log_w_[i] + log_norm_ - 0.5 * d.dot(cov_inv_ * d);
      best = std::max(best, ll[i]);
    }
    double z = 0.0;
    for (double v : ll) z += std::exp(v - best);
    VectorXd s = VectorXd::Zero(dim());
    for (size_t i = 0; i < means_.size(); ++i) {
      const double r = std::exp(ll[i] - best) / z;
      s -= r * (cov_inv_ * (y - means_[i]));
    }
    return s;
  }

  VectorXd sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double u = unif(rng);
    size_t comp = 0;
    while (comp + 1 < cum_w_.size() && u > cum_w_[comp]) ++comp;
    VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) z(i) = normal(rng);
    return means_[comp] + chol_ * z;
  }

 private:
  std::vector<double> weights_;
  std::vector<VectorXd> means_;
  std::vector<double> log_w_;
  std::vector<double> cum_w_;
  MatrixXd chol_;
  MatrixXd cov_inv_;
  double log_norm_ = 0.0;
};

/// Runs `draw` n times in fixed-size batches with per-batch derived seeds,
/// writing k values per draw into `values[k]`.
void mc_multi(long n, std::uint64_t seed, int k,
              const std::function<void(std::mt19937_64&, double*)>& draw,
              std::vector<std::vector<double>>* values) {
  values->assign(k, std::vector<double>(n));
  std::vector<double> buf(k);
  long done = 0;
  for (std::uint64_t batch = 0; done < n; ++batch) {
    std::mt19937_64 rng(derive_seed(seed, batch));
    const long m = std::min<long>(kBatch, n - done);
    for (long j = 0; j < m; ++j) {
      draw(rng, buf.data());
      for (int c = 0; c < k; ++c) (*values)[c][done + j] = buf[c];
    }
    done += m;
  }
}

MeanResult mc_mean(long n, std::uint64_t seed,
                   const std::function<double(std::mt19937_64&)>& draw) {
  std::vector<std::vector<double>> vals;
  mc_multi(n, seed, 1,
           [&](std::mt19937_64& rng, double* out) { out[0] = draw(rng); },
           &vals);
  return mean_and_se(vals[0]);
}

struct FisherEstimate {
  MatrixXd J;
  MatrixXd SE;  // per-entry standard error
};

FisherEstimate fisher_mc(const Gm& g, long n, std::uint64_t seed) {
  const int t = g.dim();
  MatrixXd sum = MatrixXd::Zero(t, t);
  MatrixXd sumsq = MatrixXd::Zero(t, t);
  long done = 0;
  for (std::uint64_t batch = 0; done < n; ++batch) {
    std::mt19937_64 rng(derive_seed(seed, batch));
    const long m = std::min<long>(kBatch, n - done);
    MatrixXd bsum = MatrixXd::Zero(t, t);
    MatrixXd bsq = MatrixXd::Zero(t, t);
    for (long j = 0; j < m; ++j) {
      const VectorXd s = g.score(g.sample(rng));
      const MatrixXd outer = s * s.transpose();
      bsum += outer;
      bsq += outer.cwiseProduct(outer);
    }
    sum += bsum;
    sumsq += bsq;
    done += m;
  }
  FisherEstimate out;
  out.J = sum / static_cast<double>(n);
  // per-entry SE of the mean: sqrt(sample variance / n)
  MatrixXd var =
      (sumsq / static_cast<double>(n) - out.J.cwiseProduct(out.J)) *
      (static_cast<double>(n) / static_cast<double>(n > 1 ? n - 1 : 1));
  out.SE = var.cwiseMax(0.0).cwiseSqrt() / std::sqrt(static_cast<double>(n));
  return out;
}

MatrixXd psd_chol_factor(const SymMatrix& m) {
  // Factor L with L L^T = m for a possibly singular PSD matrix.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.mat());
  VectorXd ev = es.eigenvalues().cwiseMax(0.0).array().sqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

void require_min_samples(long n) {
  if (n < 1000) {
    throw std::invalid_argument("eei: need at least 1000 samples");
  }
}

}  // namespace

VectorXd MixtureInput::mean() const {
  VectorXd m = VectorXd::Zero(dim());
  for (size_t i = 0; i < weights.size(); ++i) m += weights[i] * means[i];
  return m;
}

SymMatrix MixtureInput::second_moment() const {
  MatrixXd m = comp_cov.mat();
  for (size_t i = 0; i < weights.size(); ++i) {
    m += weights[i] * means[i] * means[i].transpose();
  }
  return SymMatrix(m);
}

SymMatrix MixtureInput::covariance() const {
  const VectorXd mu = mean();
  return SymMatrix(second_moment().mat() - mu * mu.transpose());
}

void MixtureInput::validate() const {
  if (weights.empty() || weights.size() != means.size()) {
    throw std::invalid_argument(
        "mixture input: weights and means must be nonempty and match");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0)) {
      throw std::invalid_argument("mixture input: weights must be positive");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture input: weights must sum to 1");
  }
  for (const auto& m : means) {
    if (m.size() != dim() || !m.allFinite()) {
      throw std::invalid_argument("mixture input: bad component mean");
    }
  }
  if (!is_psd(comp_cov, default_tol(comp_cov))) {
    throw std::invalid_argument("mixture input: component covariance not PSD");
  }
}

void CheckReport::add(const std::string& name, double statistic,
                      double threshold, double se) {
  entries.push_back({name, statistic, threshold, se, statistic <= threshold});
}

void CheckReport::finish() {
  all_pass = true;
  for (const auto& e : entries) all_pass = all_pass && e.pass;
}

MixtureInput random_mixture_input(std::uint64_t seed, const SymMatrix& cap,
                                  int max_components) {
  const int t = cap.dim();
  std::mt19937_64 rng(derive_seed(seed, 0xE1));
  std::uniform_int_distribution<int> comp_dist(1, std::max(max_components, 1));
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::normal_distribution<double> normal(0.0, 1.0);

  MixtureInput x;
  const int k = comp_dist(rng);
  double wsum = 0.0;
  for (int i = 0; i < k; ++i) {
    x.weights.push_back(unif(rng));
    wsum += x.weights.back();
  }
  for (double& w : x.weights) w /= wsum;
  for (int i = 0; i < k; ++i) {
    VectorXd m(t);
    for (int j = 0; j < t; ++j) m(j) = normal(rng);
    x.means.push_back(m);
  }
  MatrixXd g(t, t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) g(i, j) = normal(rng);
  }
  x.comp_cov = SymMatrix((0.3 / t) * (g * g.transpose()) +
                         0.05 * MatrixXd::Identity(t, t));

  // Scale the whole input so the second moment sits at 0.9 * cap on the
  // tightest direction.
  const SymMatrix q = x.second_moment();
  SymMatrix half_inv = inverse_pd(sym_sqrt(cap));
  const double beta =
      max_eigenvalue(SymMatrix(half_inv.mat() * q.mat() * half_inv.mat()));
  const double scale = 0.9 / std::max(beta, 1e-12);
  for (auto& m : x.means) m *= std::sqrt(scale);
  x.comp_cov = SymMatrix(scale * x.comp_cov.mat());
  return x;
}

EstimatorOutput entropy_mc(const MixtureInput& x, const SymMatrix& noise_cov,
                           long n, std::uint64_t seed) {
  require_min_samples(n);
  x.validate();
  if (min_eigenvalue(noise_cov) <= 0) {
    throw std::domain_error("entropy_mc: noise covariance must be PD");
  }
  Gm g(x.weights, x.means, x.comp_cov.mat() + noise_cov.mat());
  MeanResult r = mc_mean(n, seed, [&](std::mt19937_64& rng) {
    return -g.log_density(g.sample(rng));
  });
  return {r.mean, r.se, n, seed};
}

CheckReport eei_check(const CanonicalChannel& ch, const SymMatrix& Kx_star,
                      const std::vector<MixtureInput>& inputs, long n,
                      std::uint64_t seed) {
  require_min_samples(n);
  if (!psd_leq(ch.Kr, ch.Ke, default_tol(ch.Ke))) {
    throw std::domain_error("eei_check: channel must be degraded (Kr <= Ke)");
  }
  if (!check_theorem1(Kx_star, ch, 1e-6)) {
    throw std::domain_error(
        "eei_check: Kx* does not carry a valid sufficiency certificate");
  }
  const double rhs = 0.5 * (logdet_pd(Kx_star + ch.Kr) -
                            logdet_pd(Kx_star + ch.Ke));

  CheckReport report;
  const MatrixXd Lr = Eigen::LLT<MatrixXd>(ch.Kr.mat()).matrixL();
  const MatrixXd Le = Eigen::LLT<MatrixXd>(ch.Ke.mat()).matrixL();
  for (size_t k = 0; k < inputs.size(); ++k) {
    const MixtureInput& x = inputs[k];
    x.validate();
    if (!psd_leq(x.second_moment(), ch.S,
                 1e-8 * (1.0 + ch.S.mat().operatorNorm()))) {
      std::ostringstream msg;
      msg << "eei_check: input " << k << " violates E[XX^T] <= S";
      throw std::domain_error(msg.str());
    }
    const MatrixXd Lc = psd_chol_factor(x.comp_cov);
    Gm fr(x.weights, x.means, x.comp_cov.mat() + ch.Kr.mat());
    Gm fe(x.weights, x.means, x.comp_cov.mat() + ch.Ke.mat());
    const int t = ch.dim();
    // Common random numbers: one mixture draw and one standard normal
    // shared by both noise channels; the per-sample difference has far
    // lower variance than the two entropies separately.
    MeanResult g = mc_mean(n, derive_seed(seed, k), [&](std::mt19937_64& rng) {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      const double u = unif(rng);
      size_t comp = 0;
      double acc = x.weights[0];
      while (comp + 1 < x.weights.size() && u > acc) {
        ++comp;
        acc += x.weights[comp];
      }
      VectorXd z0(t), z1(t);
      for (int i = 0; i < t; ++i) z0(i) = normal(rng);
      for (int i = 0; i < t; ++i) z1(i) = normal(rng);
      const VectorXd xs = x.means[comp] + Lc * z0;
      return -fr.log_density(xs + Lr * z1) + fe.log_density(xs + Le * z1);
    });
    std::ostringstream name;
    name << "input_" << k;
    report.add(name.str(), g.mean - rhs, 3.0 * g.se, g.se);
  }
  report.finish();
  return report;
}

CheckReport debruijn_check(const MixtureInput& x, const SymMatrix& base_noise,
                           const std::vector<double>& t_grid, long n,
                           std::uint64_t seed) {
  require_min_samples(n);
  x.validate();
  if (min_eigenvalue(base_noise) <= 0) {
    throw std::domain_error("debruijn_check: base noise must be PD");
  }
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw std::invalid_argument(
          "debruijn_check: t grid must be positive increasing");
    }
  }
  const MatrixXd B = base_noise.mat();
  const int t_dim = x.dim();

  CheckReport report;
  for (size_t gi = 0; gi < t_grid.size(); ++gi) {
    const double t = t_grid[gi];
    const std::uint64_t tseed = derive_seed(seed, gi);

    auto fd_estimate = [&](double dt) {
      Gm plus(x.weights, x.means, x.comp_cov.mat() + (t + dt) * B);
      Gm minus(x.weights, x.means, x.comp_cov.mat() + (t - dt) * B);
      const MatrixXd Lp =
          Eigen::LLT<MatrixXd>(x.comp_cov.mat() + (t + dt) * B).matrixL();
      const MatrixXd Lm =
          Eigen::LLT<MatrixXd>(x.comp_cov.mat() + (t - dt) * B).matrixL();
      return mc_mean(n, tseed, [&](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double u = unif(rng);
        size_t comp = 0;
        double acc = x.weights[0];
        while (comp + 1 < x.weights.size() && u > acc) {
          ++comp;
          acc += x.weights[comp];
        }
        VectorXd z(t_dim);
        for (int i = 0; i < t_dim; ++i) z(i) = normal(rng);
        const VectorXd& m = x.means[comp];
        return (-plus.log_density(m + Lp * z) +
                minus.log_density(m + Lm * z)) /
               (2.0 * dt);
      });
    };

    const double dt = 0.05 * t;
    MeanResult coarse = fd_estimate(dt);
    MeanResult fine = fd_estimate(0.5 * dt);

    Gm at_t(x.weights, x.means, x.comp_cov.mat() + t * B);
    MeanResult fisher =
        mc_mean(n, derive_seed(seed, 1000 + gi), [&](std::mt19937_64& rng) {
          const VectorXd s = at_t.score(at_t.sample(rng));
          return 0.5 * s.dot(B * s);
        });

    const double trunc = std::abs(coarse.mean - fine.mean);
    const double se =
        std::sqrt(fine.se * fine.se + fisher.se * fisher.se);
    std::ostringstream name;
    name << "t=" << t;
    report.add(name.str(), std::abs(fine.mean - fisher.mean),
               3.0 * se + trunc + 1e-12, se);
  }
  report.finish();
  return report;
}

CheckReport fii_check(const MixtureInput& x1, const MixtureInput& x2,
                      const Eigen::MatrixXd& A, long n, std::uint64_t seed) {
  require_min_samples(n);
  x1.validate();
  x2.validate();
  if (x1.dim() != x2.dim() || A.rows() != x1.dim() || A.cols() != x1.dim()) {
    throw std::invalid_argument("fii_check: dimension mismatch");
  }
  const int t = x1.dim();
  Gm g1(x1.weights, x1.means, x1.comp_cov.mat());
  Gm g2(x2.weights, x2.means, x2.comp_cov.mat());

  // X1 + X2 is again a mixture with product weights and summed means.
  std::vector<double> w12;
  std::vector<VectorXd> m12;
  for (size_t i = 0; i < x1.weights.size(); ++i) {
    for (size_t j = 0; j < x2.weights.size(); ++j) {
      w12.push_back(x1.weights[i] * x2.weights[j]);
      m12.push_back(x1.means[i] + x2.means[j]);
    }
  }
  Gm g12(w12, m12, x1.comp_cov.mat() + x2.comp_cov.mat());

  FisherEstimate j1 = fisher_mc(g1, n, derive_seed(seed, 1));
  FisherEstimate j2 = fisher_mc(g2, n, derive_seed(seed, 2));
  FisherEstimate j12 = fisher_mc(g12, n, derive_seed(seed, 3));

  const MatrixXd Ia = MatrixXd::Identity(t, t) - A;
  const MatrixXd rhs = A * j1.J * A.transpose() + Ia * j2.J * Ia.transpose();
  const MatrixXd diff = 0.5 * (rhs - j12.J + (rhs - j12.J).transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();

  const MatrixXd Aabs = A.cwiseAbs();
  const MatrixXd Iabs = Ia.cwiseAbs();
  const double se_scale = (Aabs * j1.SE * Aabs.transpose()).norm() +
                          (Iabs * j2.SE * Iabs.transpose()).norm() +
                          j12.SE.norm();
  CheckReport report;
  report.add("fisher_information_inequality", -min_eig, 3.0 * se_scale,
             se_scale);
  report.finish();
  return report;
}

CheckReport cramer_rao_check(const MixtureInput& x, long n,
                             std::uint64_t seed) {
  require_min_samples(n);
  x.validate();
  if (min_eigenvalue(x.comp_cov) <= 0) {
    throw std::domain_error(
        "cramer_rao_check: density must be smooth (comp_cov PD)");
  }
  Gm g(x.weights, x.means, x.comp_cov.mat());
  FisherEstimate j = fisher_mc(g, n, derive_seed(seed, 7));
  const SymMatrix cov = x.covariance();
  const MatrixXd cov_inv = inverse_pd(cov).mat();
  const MatrixXd diff = 0.5 * (j.J - cov_inv + (j.J - cov_inv).transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  CheckReport report;
  report.add("cramer_rao", -es.eigenvalues().minCoeff(), 3.0 * j.SE.norm(),
             j.SE.norm());
  report.finish();
  return report;
}

CheckReport path_monotonicity_check(const CanonicalChannel& ch,
                                    const SymMatrix& Kx_star,
                                    const MixtureInput& x,
                                    const std::vector<double>& lambda_grid,
                                    long n, std::uint64_t seed) {
  require_min_samples(n);
  x.validate();
  if (!psd_leq(ch.Kr, ch.Ke, default_tol(ch.Ke))) {
    throw std::domain_error("path check: channel must be degraded");
  }
  if (!check_theorem1(Kx_star, ch, 1e-6)) {
    throw std::domain_error(
        "path check: Kx* does not carry a valid sufficiency certificate");
  }
  std::vector<double> grid = lambda_grid;
  if (grid.empty() || grid.front() > 0.0) grid.insert(grid.begin(), 0.0);
  if (grid.back() < 1.0) grid.push_back(1.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw std::invalid_argument(
          "path check: lambda grid must be increasing within [0,1]");
    }
  }

  const int t = ch.dim();
  const MatrixXd Lc = psd_chol_factor(x.comp_cov);
  const MatrixXd Lstar = psd_chol_factor(Kx_star);
  const MatrixXd Lr = Eigen::LLT<MatrixXd>(ch.Kr.mat()).matrixL();
  const MatrixXd Le = Eigen::LLT<MatrixXd>(ch.Ke.mat()).matrixL();

  const int k = static_cast<int>(grid.size());
  std::vector<Gm> fr, fe;
  std::vector<double> sq1(k), sqlam(k);
  fr.reserve(k);
  fe.reserve(k);
  for (int gi = 0; gi < k; ++gi) {
    const double lam = grid[gi];
    sq1[gi] = std::sqrt(1.0 - lam);
    sqlam[gi] = std::sqrt(lam);
    std::vector<VectorXd> means;
    means.reserve(x.means.size());
    for (const auto& m : x.means) means.push_back(sq1[gi] * m);
    const MatrixXd cov =
        (1.0 - lam) * x.comp_cov.mat() + lam * Kx_star.mat();
    fr.emplace_back(x.weights, means, cov + ch.Kr.mat());
    fe.emplace_back(x.weights, means, cov + ch.Ke.mat());
  }

  // One shared randomness stream evaluates every lambda: the mixture
  // component, the two input normals, and the two noise normals are drawn
  // once per sample.
  std::vector<std::vector<double>> vals;
  mc_multi(n, derive_seed(seed, 11), k,
           [&](std::mt19937_64& rng, double* out) {
             std::uniform_real_distribution<double> unif(0.0, 1.0);
             std::normal_distribution<double> normal(0.0, 1.0);
             const double u = unif(rng);
             size_t comp = 0;
             double acc = x.weights[0];
             while (comp + 1 < x.weights.size() && u > acc) {
               ++comp;
               acc += x.weights[comp];
             }
             VectorXd z1(t), z2(t), zr(t), ze(t);
             for (int i = 0; i < t; ++i) z1(i) = normal(rng);
             for (int i = 0; i < t; ++i) z2(i) = normal(rng);
             for (int i = 0; i < t; ++i) zr(i) = normal(rng);
             for (int i = 0; i < t; ++i) ze(i) = normal(rng);
             const VectorXd base = x.means[comp] + Lc * z1;
             const VectorXd gstar = Lstar * z2;
             const VectorXd wr = Lr * zr;
             const VectorXd we = Le * ze;
             for (int gi = 0; gi < k; ++gi) {
               const VectorXd xl = sq1[gi] * base + sqlam[gi] * gstar;
               out[gi] = -fr[gi].log_density(xl + wr) +
                         fe[gi].log_density(xl + we);
             }
           },
           &vals);

  std::vector<MeanResult> g(k);
  for (int gi = 0; gi < k; ++gi) g[gi] = mean_and_se(vals[gi]);

  CheckReport report;
  for (int gi = 0; gi + 1 < k; ++gi) {
    std::vector<double> diff(n);
    for (long j = 0; j < n; ++j) diff[j] = vals[gi][j] - vals[gi + 1][j];
    MeanResult d = mean_and_se(diff);
    std::ostringstream name;
    name << "monotone_" << grid[gi] << "_to_" << grid[gi + 1];
    report.add(name.str(), d.mean, 3.0 * d.se, d.se);
  }

  // Endpoint lambda = 0 against an independent-seed direct evaluation.
  {
    Gm dr(x.weights, x.means, x.comp_cov.mat() + ch.Kr.mat());
    Gm de(x.weights, x.means, x.comp_cov.mat() + ch.Ke.mat());
    MeanResult direct =
        mc_mean(n, derive_seed(seed, 13), [&](std::mt19937_64& rng) {
          std::uniform_real_distribution<double> unif(0.0, 1.0);
          std::normal_distribution<double> normal(0.0, 1.0);
          const double u = unif(rng);
          size_t comp = 0;
          double acc = x.weights[0];
          while (comp + 1 < x.weights.size() && u > acc) {
            ++comp;
            acc += x.weights[comp];
          }
          VectorXd z0(t), z1v(t);
          for (int i = 0; i < t; ++i) z0(i) = normal(rng);
          for (int i = 0; i < t; ++i) z1v(i) = normal(rng);
          const VectorXd xs = x.means[comp] + Lc * z0;
          return -dr.log_density(xs + Lr * z1v) +
                 de.log_density(xs + Le * z1v);
        });
    const double se = std::sqrt(g[0].se * g[0].se + direct.se * direct.se);
    report.add("endpoint_g_of_X", std::abs(g[0].mean - direct.mean),
               3.0 * se, se);
  }

  // Endpoint lambda = 1 against the Gaussian closed form.
  {
    const double analytic = 0.5 * (logdet_pd(Kx_star + ch.Kr) -
                                   logdet_pd(Kx_star + ch.Ke));
    report.add("endpoint_g_of_Xstar", std::abs(g[k - 1].mean - analytic),
               3.0 * g[k - 1].se, g[k - 1].se);
  }
  report.finish();
  return report;
}

}  // namespace wiretap
