#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "wiretap/channel.hpp"
#include "wiretap/sweep.hpp"

using namespace wiretap;

namespace {

Eigen::MatrixXd scalar(double v) {
  Eigen::MatrixXd m(1, 1);
  m << v;
  return m;
}

}  // namespace

TEST_CASE("canonicalize identity channels") {
  GeneralChannel ch{Eigen::MatrixXd::Identity(3, 3),
                    Eigen::MatrixXd::Identity(3, 3),
                    CovarianceCap{SymMatrix::Identity(3)}};
  CanonicalChannel c = canonicalize(ch, 1e-4);
  CHECK((c.Kr.mat() - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK((c.Ke.mat() - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("canonicalize scalar gains") {
  GeneralChannel ch{scalar(1.0), scalar(0.5),
                    CovarianceCap{SymMatrix::Identity(1)}};
  CanonicalChannel c = canonicalize(ch, 1e-4);
  CHECK(c.Kr(0, 0) == doctest::Approx(1.0));
  CHECK(c.Ke(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("canonicalize floors a dead eavesdropper link") {
  GeneralChannel ch{scalar(1.0), scalar(0.0),
                    CovarianceCap{SymMatrix::Identity(1)}};
  CanonicalChannel c = canonicalize(ch, 1e-3);
  CHECK(c.Ke(0, 0) == doctest::Approx(1e6));
  CHECK_THROWS_AS(canonicalize(ch, 0.0), std::invalid_argument);
}

TEST_CASE("canonicalize is eps independent for invertible square channels") {
  Eigen::MatrixXd hr(2, 2), he(2, 2);
  hr << 1.0, 0.2, -0.1, 0.8;
  he << 0.5, 0.0, 0.3, 0.7;
  GeneralChannel ch{hr, he, CovarianceCap{SymMatrix::Identity(2)}};
  CanonicalChannel a = canonicalize(ch, 1e-2);
  CanonicalChannel b = canonicalize(ch, 1e-5);
  CHECK((a.Kr.mat() - b.Kr.mat()).norm() < 1e-10);
  CHECK((a.Ke.mat() - b.Ke.mat()).norm() < 1e-10);
}

TEST_CASE("capacity_general identical channels give zero") {
  Eigen::MatrixXd h(2, 2);
  h << 1.0, 0.3, 0.3, 0.9;
  GeneralChannel ch{h, h, CovarianceCap{SymMatrix::Identity(2)}};
  GeneralCapacityResult r = capacity_general(ch);
  for (double v : r.values) CHECK(std::abs(v) < 1e-9);
  CHECK(std::abs(r.extrapolated) < 1e-9);
}

TEST_CASE("capacity_general scalar total power") {
  GeneralChannel ch{scalar(1.0), scalar(0.5), TotalPower{1.0}};
  GeneralCapacityResult r = capacity_general(ch);
  CHECK(r.converged);
  CHECK(r.extrapolated == doctest::Approx(0.5 * std::log(1.6)).epsilon(1e-6));

  GeneralChannel same{scalar(1.0), scalar(1.0), TotalPower{3.0}};
  GeneralCapacityResult z = capacity_general(same);
  CHECK(std::abs(z.extrapolated) < 1e-9);
}

TEST_CASE("capacity_general monotone in the eps sweep for a dead eavesdropper") {
  // a larger eps floor gives the eavesdropper a stronger link, so the value
  // is nonincreasing in eps: it grows as eps shrinks down the sweep
  GeneralChannel ch{scalar(1.0), scalar(0.0),
                    CovarianceCap{SymMatrix::Identity(1)}};
  GeneralCapacityResult r = capacity_general(ch);
  for (size_t i = 1; i < r.values.size(); ++i) {
    CHECK(r.values[i] >= r.values[i - 1] - 1e-6);
  }
}

TEST_CASE("random_instance determinism and kinds") {
  CanonicalChannel a = random_instance(7, 3, InstanceKind::General);
  CanonicalChannel b = random_instance(7, 3, InstanceKind::General);
  CHECK((a.Kr.mat() - b.Kr.mat()).norm() == 0.0);
  CHECK((a.Ke.mat() - b.Ke.mat()).norm() == 0.0);
  CHECK((a.S.mat() - b.S.mat()).norm() == 0.0);

  CanonicalChannel deg = random_instance(11, 3, InstanceKind::Degraded);
  CHECK(psd_leq(deg.Kr, deg.Ke, 0.0));
  CanonicalChannel rev = random_instance(11, 3, InstanceKind::Reversed);
  CHECK(psd_leq(rev.Ke, rev.Kr, 0.0));

  CanonicalChannel diag = random_instance(5, 3, InstanceKind::Diagonal);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        CHECK(diag.Kr(i, j) == 0.0);
        CHECK(diag.Ke(i, j) == 0.0);
        CHECK(diag.S(i, j) == 0.0);
      }
}

TEST_CASE("validate_canonical names the offender") {
  CanonicalChannel bad{SymMatrix::Diagonal(Eigen::Vector2d(1, -1)),
                       SymMatrix::Identity(2), SymMatrix::Identity(2)};
  CHECK_THROWS_WITH_AS(validate_canonical(bad),
                       doctest::Contains("K_r"), std::invalid_argument);
}
