#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "wiretap/matcore.hpp"

using namespace wiretap;

namespace {

Eigen::MatrixXd m22(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

SymMatrix random_psd(std::mt19937_64& rng, int t) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) g(i, j) = nd(rng);
  return SymMatrix(g * g.transpose());
}

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
  SymMatrix m(m22(1, 0.5, 0.3, 2));
  CHECK(m(0, 1) == m(1, 0));
  CHECK(m(0, 1) == doctest::Approx(0.4));
  CHECK_THROWS_AS((SymMatrix{Eigen::MatrixXd::Zero(2, 3)}),
                  std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS((SymMatrix{bad}), std::invalid_argument);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(SymMatrix::Identity(2), 0.0));
  CHECK_FALSE(is_psd(SymMatrix::Diagonal(Eigen::Vector2d(1, -0.5)), 1e-9));
  CHECK(is_psd(SymMatrix(m22(2, 1, 1, 2)), 0.0));  // eigenvalues 1 and 3
  CHECK_THROWS_AS(is_psd(SymMatrix::Identity(2), -1.0), std::invalid_argument);
}

TEST_CASE("psd_leq") {
  CHECK(psd_leq(SymMatrix::Zero(2), SymMatrix::Identity(2), 0.0));
  CHECK_FALSE(psd_leq(SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                      SymMatrix::Diagonal(Eigen::Vector2d(2, 1)), 1e-9));
  CHECK(psd_leq(SymMatrix::Diagonal(Eigen::Vector2d(1, 1)),
                SymMatrix::Diagonal(Eigen::Vector2d(1, 2)), 1e-12));
  CHECK_THROWS_AS(psd_leq(SymMatrix::Identity(2), SymMatrix::Identity(3), 0.0),
                  std::invalid_argument);
}

TEST_CASE("logdet_pd") {
  CHECK(logdet_pd(SymMatrix::Identity(4)) == doctest::Approx(0.0));
  CHECK(logdet_pd(SymMatrix::Diagonal(Eigen::Vector2d(2, 3))) ==
        doctest::Approx(std::log(6.0)));
  CHECK(logdet_pd(SymMatrix(m22(2, 1, 1, 2))) == doctest::Approx(std::log(3.0)));
  CHECK_THROWS_AS(logdet_pd(SymMatrix::Diagonal(Eigen::Vector2d(1, -1))),
                  std::domain_error);
}

TEST_CASE("sym_sqrt") {
  CHECK((sym_sqrt(SymMatrix::Identity(3)).mat() -
         Eigen::MatrixXd::Identity(3, 3))
            .norm() < 1e-14);
  SymMatrix r = sym_sqrt(SymMatrix::Diagonal(Eigen::Vector2d(4, 9)));
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
  SymMatrix m(m22(2, 1, 1, 2));
  SymMatrix s = sym_sqrt(m);
  CHECK((s.mat() * s.mat() - m.mat()).norm() < 1e-12);
  CHECK_THROWS_AS(sym_sqrt(SymMatrix::Diagonal(Eigen::Vector2d(1, -1))),
                  std::domain_error);
}

TEST_CASE("project_box examples") {
  SymMatrix s(m22(2, 0.3, 0.3, 1.5));
  SymMatrix inside(m22(0.5, 0.1, 0.1, 0.4));
  CHECK((project_box(inside, s).mat() - inside.mat()).norm() < 1e-12);
  CHECK((project_box(SymMatrix(2.0 * s.mat()), s).mat() - s.mat()).norm() <
        1e-12);
  CHECK(project_box(SymMatrix(-Eigen::MatrixXd::Identity(2, 2)),
                    SymMatrix::Identity(2))
            .norm() < 1e-12);
  CHECK_THROWS_AS(
      project_box(inside, SymMatrix::Diagonal(Eigen::Vector2d(1, -1))),
      std::domain_error);
}

TEST_CASE("order and projection properties on random matrices") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    int t = 1 + static_cast<int>(rng() % 8);
    SymMatrix a = random_psd(rng, t);
    SymMatrix b = random_psd(rng, t);
    CHECK(psd_leq(a, a + b, default_tol(a + b)));

    // logdet monotone under the PSD order
    SymMatrix a_pd = a + SymMatrix(0.2 * Eigen::MatrixXd::Identity(t, t));
    CHECK(logdet_pd(a_pd) <= logdet_pd(a_pd + b) + 1e-9);

    // projection idempotent
    SymMatrix s = b + SymMatrix(0.5 * Eigen::MatrixXd::Identity(t, t));
    Eigen::MatrixXd g(t, t);
    std::normal_distribution<double> nd;
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) g(i, j) = nd(rng);
    SymMatrix p = project_box(SymMatrix(g + g.transpose()), s);
    CHECK((project_box(p, s).mat() - p.mat()).norm() < 1e-10);
    CHECK(is_psd(p, 1e-10));
    CHECK(psd_leq(p, s, 1e-10));

    // square-root reconstruction
    SymMatrix r = sym_sqrt(a);
    CHECK((r.mat() * r.mat() - a.mat()).norm() <= 1e-10 * (1 + a.norm()));
  }
}

TEST_CASE("inverse_pd") {
  SymMatrix m(m22(2, 1, 1, 2));
  CHECK((inverse_pd(m).mat() * m.mat() - Eigen::MatrixXd::Identity(2, 2))
            .norm() < 1e-13);
}
