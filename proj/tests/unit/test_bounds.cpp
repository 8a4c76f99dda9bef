#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "wiretap/bounds.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/solver.hpp"

using namespace wiretap;

namespace {

CanonicalChannel scalar_channel(double kr, double ke, double s) {
  return {SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, kr)),
          SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, ke)),
          SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, s))};
}

const double kHalfLn43 = 0.5 * std::log(4.0 / 3.0);

}  // namespace

TEST_CASE("parallel_capacity examples") {
  CanonicalChannel same{SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                        SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                        SymMatrix::Identity(2)};
  ParallelResult z = parallel_capacity(same);
  CHECK(z.value == doctest::Approx(0.0));
  CHECK(z.active_set.empty());

  CanonicalChannel crossing{SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                            SymMatrix::Diagonal(Eigen::Vector2d(2, 1)),
                            SymMatrix::Identity(2)};
  ParallelResult c = parallel_capacity(crossing);
  CHECK(c.active_set == std::vector<int>{0});
  CHECK(c.value == doctest::Approx(kHalfLn43));

  CanonicalChannel both{SymMatrix::Diagonal(Eigen::Vector2d(1, 1)),
                        SymMatrix::Diagonal(Eigen::Vector2d(2, 3)),
                        SymMatrix::Diagonal(Eigen::Vector2d(2, 1))};
  ParallelResult b = parallel_capacity(both);
  CHECK(b.active_set == std::vector<int>{0, 1});
  CHECK(b.value == doctest::Approx(0.5 * std::log(9.0 / 4.0)));

  CanonicalChannel nondiag{SymMatrix(Eigen::MatrixXd::Identity(2, 2)),
                           SymMatrix::Identity(2), SymMatrix::Identity(2)};
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.2, 0.2, 1;
  nondiag.Kr = SymMatrix(m);
  CHECK_THROWS_AS(parallel_capacity(nondiag), std::invalid_argument);
}

TEST_CASE("conditional_mi scalar hand values") {
  SymMatrix kr = SymMatrix::Identity(1);
  SymMatrix ke(Eigen::MatrixXd::Constant(1, 1, 2.0));
  JointNoise jn{kr, ke, Eigen::MatrixXd::Zero(1, 1)};
  CHECK(conditional_mi(SymMatrix::Zero(1), jn) == 0.0);
  CHECK(conditional_mi(SymMatrix::Identity(1), jn) ==
        doctest::Approx(0.5 * std::log(5.0 / 3.0)));

  JointNoise saddle{kr, ke, Eigen::MatrixXd::Constant(1, 1, 1.0)};
  CHECK(conditional_mi(SymMatrix::Identity(1), saddle) ==
        doctest::Approx(kHalfLn43));
  // Kx = 0 stays exactly 0 regardless of the cross term
  CHECK(conditional_mi(SymMatrix::Zero(1), saddle) == 0.0);
}

TEST_CASE("joint noise feasibility") {
  SymMatrix kr = SymMatrix::Identity(1);
  SymMatrix ke(Eigen::MatrixXd::Constant(1, 1, 2.0));
  JointNoise ok{kr, ke, Eigen::MatrixXd::Constant(1, 1, 1.0)};
  CHECK(ok.feasible(1e-9));
  JointNoise bad{kr, ke, Eigen::MatrixXd::Constant(1, 1, 2.0)};
  CHECK_FALSE(bad.feasible(1e-9));
}

TEST_CASE("sato_upper_bound on hand instances") {
  {
    // identical marginals: aligning the noises kills the bound
    CanonicalChannel ch{SymMatrix::Identity(2), SymMatrix::Identity(2),
                        SymMatrix::Identity(2)};
    SatoResult r = sato_upper_bound(ch);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
  }
  {
    CanonicalChannel ch = scalar_channel(1, 2, 1);
    SatoResult r = sato_upper_bound(ch);
    CHECK(r.value == doctest::Approx(kHalfLn43).epsilon(1e-5));
    CHECK(r.Kcross_star(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
  }
  {
    CanonicalChannel ch{SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                        SymMatrix::Diagonal(Eigen::Vector2d(2, 1)),
                        SymMatrix::Identity(2)};
    SatoResult r = sato_upper_bound(ch);
    CHECK(r.value == doctest::Approx(kHalfLn43).epsilon(1e-4));
  }
}

TEST_CASE("sato outer iterates never increase") {
  CanonicalChannel ch = random_instance(21, 2, InstanceKind::General);
  SatoResult r = sato_upper_bound(ch);
  for (size_t i = 1; i < r.outer_values.size(); ++i) {
    CHECK(r.outer_values[i] <= r.outer_values[i - 1] + 1e-9);
  }
}

TEST_CASE("crosscheck") {
  {
    CrosscheckReport r = crosscheck(scalar_channel(1, 2, 1), 1e-4);
    CHECK(r.pass);
    CHECK(std::abs(r.gap) <= 1e-4);
  }
  {
    CrosscheckReport r = crosscheck(random_instance(8, 2, InstanceKind::Reversed));
    CHECK(r.pass);
    CHECK(std::abs(r.solver_value) < 1e-9);
    CHECK(std::abs(r.sato_value) < 1e-3);
  }
  for (std::uint64_t seed = 200; seed < 204; ++seed) {
    CrosscheckReport r =
        crosscheck(random_instance(seed, 2, InstanceKind::General));
    INFO("seed ", seed, " gap ", r.gap);
    CHECK(r.dominance);
    CHECK(std::abs(r.gap) <= 1e-3);
  }
}

TEST_CASE("parallel closed form agrees with the general solver") {
  for (std::uint64_t seed = 300; seed < 305; ++seed) {
    CanonicalChannel ch = random_instance(seed, 2, InstanceKind::Diagonal);
    ParallelResult p = parallel_capacity(ch);
    CapacityResult r = maximize_rate(ch);
    REQUIRE(r.converged);
    CHECK(std::abs(p.value - r.value) <= 1e-6);
  }
}
