#include <cmath>
#include <numbers>
#include <random>

#include "ahm/kernel.hpp"
#include "ahm/poisson.hpp"
#include "ahm/sphere.hpp"
#include "doctest.h"

using namespace ahm;

namespace {

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v(j) = normal(rng);
  return v.normalized();
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

}  // namespace

TEST_CASE("ProblemParams preconditions") {
  CHECK_THROWS_AS(ProblemParams(2, 0.0), DomainError);
  CHECK_THROWS_AS(ProblemParams(3, 1.0), DomainError);
  CHECK_THROWS_AS(ProblemParams(3, std::nan("")), DomainError);
  CHECK_NOTHROW(ProblemParams(3, -50.0));
  CHECK_THROWS_AS(BallPoint(Eigen::Vector3d(1.0, 0.0, 0.0)), DomainError);
  CHECK_THROWS_AS(UnitDirection(Eigen::Vector3d::Zero()), DomainError);
}

TEST_CASE("c_n_alpha examples") {
  for (int n : {3, 4, 5, 8}) {
    CHECK(c_n_alpha(ProblemParams(n, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c_n_alpha(ProblemParams(n, 2.0 - n)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(c_n_alpha(ProblemParams(3, -1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // Gamma(5/2) Gamma(3/2) / (Gamma(2) Gamma(2)) = 3 pi / 8.
  CHECK(c_n_alpha(ProblemParams(4, -1.0)) ==
        doctest::Approx(3.0 * std::numbers::pi / 8.0).epsilon(1e-12));
}

TEST_CASE("kernel_value examples") {
  const ProblemParams p(3, 0.0);
  const Eigen::Vector3d e1(1.0, 0.0, 0.0);
  CHECK(kernel_value(p, Eigen::Vector3d(0.5, 0.0, 0.0), e1) == doctest::Approx(6.0).epsilon(1e-15));
  std::mt19937_64 rng(1);
  for (double alpha : {-3.0, -1.0, 0.5}) {
    const ProblemParams q(4, alpha);
    const Eigen::VectorXd z = random_unit(4, rng);
    CHECK(kernel_value(q, Eigen::VectorXd::Zero(4), z) == doctest::Approx(c_n_alpha(q)).epsilon(1e-15));
  }
}

TEST_CASE("kernel_value is positive and rotation invariant") {
  std::mt19937_64 rng(2);
  for (int n : {3, 5}) {
    for (double alpha : {-20.0, -1.0, 0.0, 0.9}) {
      const ProblemParams p(n, alpha);
      for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd x = random_unit(n, rng) * (i < 10 ? 0.5 : 0.995);
        const Eigen::VectorXd z = random_unit(n, rng);
        const Eigen::MatrixXd A = random_orthogonal(n, rng);
        const double v = kernel_value(p, x, z);
        CHECK(v > 0.0);
        CHECK(kernel_value(p, Eigen::VectorXd(A * x), Eigen::VectorXd(A * z)) ==
              doctest::Approx(v).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kernel_value near the boundary stays finite for very negative alpha") {
  const ProblemParams p(3, -200.0);
  const Eigen::Vector3d x(0.999, 0.0, 0.0), z(-1.0, 0.0, 0.0);
  const double v = kernel_value(p, x, z);
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
}

TEST_CASE("kernel_gradient examples") {
  std::mt19937_64 rng(3);
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      const Eigen::VectorXd z = random_unit(n, rng);
      const Eigen::VectorXd g = kernel_gradient(p, Eigen::VectorXd::Zero(n), z);
      CHECK((g - p.n_minus_alpha() * c_n_alpha(p) * z).norm() < 1e-13);
    }
  }
  // alpha = 2 - n: the x term carries 2(n - 1).
  const ProblemParams h(4, -2.0);
  const Eigen::Vector4d x(0.3, 0.1, 0.0, 0.0), z(0.0, 1.0, 0.0, 0.0);
  const double d2 = (x - z).squaredNorm(), om = 1.0 - x.squaredNorm();
  const Eigen::Vector4d want = -c_n_alpha(h) *
                               (2.0 * 3.0 * d2 * x + 6.0 * om * (x - z)) /
                               (std::pow(om, -2.0) * std::pow(d2, 4.0));
  CHECK((kernel_gradient(h, x, z) - want).norm() < 1e-12 * want.norm());
}

TEST_CASE("kernel_gradient agrees with central differences") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni;
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 3;
    const ProblemParams p(n, -2.5 + 3.4 * uni(rng));
    const Eigen::VectorXd x = random_unit(n, rng) * 0.9 * uni(rng);
    const Eigen::VectorXd z = random_unit(n, rng);
    const Eigen::VectorXd g = kernel_gradient(p, x, z);
    Eigen::VectorXd fd(n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += 1e-5;
      xm(j) -= 1e-5;
      fd(j) = (kernel_value(p, xp, z) - kernel_value(p, xm, z)) / 2e-5;
    }
    CHECK((fd - g).norm() <= 1e-6 * g.norm());
  }
}

TEST_CASE("kernel_mass examples") {
  for (int n : {3, 4, 6}) {
    for (double alpha : {-2.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      CHECK(kernel_mass(p, 0.0) == doctest::Approx(c_n_alpha(p)).epsilon(1e-15));
    }
    for (double t : {0.2, 0.7, 0.95}) {
      CHECK(kernel_mass(ProblemParams(n, 0.0), t) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(kernel_mass(ProblemParams(n, 2.0 - n), t) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  const ProblemParams p(3, -1.0 + 1e-9);
  const ProblemParams q(3, -0.5);
  const double quad = reduce_zonal(
      3,
      [&](double t) {
        const Eigen::Vector3d x(0.7, 0.0, 0.0);
        const Eigen::Vector3d z(t, std::sqrt(1.0 - t * t), 0.0);
        return kernel_value(q, x, z);
      },
      SphereRule::zonal(3));
  CHECK(std::abs(kernel_mass(q, 0.7) - quad) <= 1e-8);
  CHECK(kernel_mass(p, 0.7) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel_mass matches quadrature on the acceptance grid") {
  for (int n : {3, 4, 5}) {
    for (double alpha : {-2.0, -1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      for (double t : {0.0, 0.3, 0.6, 0.9}) {
        const auto one = BoundaryData::constant(n, Eigen::VectorXd::Ones(1));
        const double quad =
            poisson_extend(one, p, BallPoint::on_axis(n, t), SphereRule::zonal(n))(0);
        CHECK(std::abs(kernel_mass(p, t) - quad) <= 1e-8);
      }
    }
  }
}

TEST_CASE("kernel_mass rejects |x| outside [0, 1)") {
  CHECK_THROWS_AS(kernel_mass(ProblemParams(3, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(kernel_mass(ProblemParams(3, 0.0), -0.1), DomainError);
}
