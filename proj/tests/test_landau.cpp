#include <cmath>
#include <numbers>
#include <random>

#include "ahm/hypergeom.hpp"
#include "ahm/kernel.hpp"
#include "ahm/landau.hpp"
#include "ahm/sharp_bounds.hpp"
#include "doctest.h"

using namespace ahm;

TEST_CASE("g_fn examples") {
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      CHECK(g_fn(p, 0.0) == n + 2.0 - alpha);
      CHECK(std::abs(g_fn(p, 1e-6) - g_fn(p, 0.0)) <= 1e-4);
      // The series branch against the closed form in extended precision.
      const long double r = 0.99999e-4L, m = n + 2.0L - alpha;
      const long double closed =
          (2.0L * std::pow(1.0L + r * r, m / 2.0L) - std::pow(1.0L - r, m) - std::pow(1.0L - r * r, 1.0L - alpha)) / r;
      CHECK(g_fn(p, static_cast<double>(r)) == doctest::Approx(static_cast<double>(closed)).epsilon(1e-10));
    }
  }
  const double direct = (2.0 * std::pow(1.25, 2.5) - std::pow(0.5, 5.0) - 0.75) / 0.5;
  CHECK(g_fn(ProblemParams(3, 0.0), 0.5) == doctest::Approx(direct).epsilon(1e-15));
  CHECK_THROWS_AS(g_fn(ProblemParams(3, 0.0), 1.0), DomainError);
}

TEST_CASE("G_fn examples") {
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      const double c = c_n_alpha(p), nma = p.n_minus_alpha();
      const double want = 2.0 * (1.0 - alpha) * c + nma * c + nma * c * (n + 2.0 - alpha);
      CHECK(G_fn(p, 0.0) == doctest::Approx(want).epsilon(1e-14));
    }
  }
  // n = 3, alpha = 0: the first factor is 1, the second 1 + t^2/3.
  const ProblemParams p(3, 0.0);
  for (double r : {0.1, 0.5, 0.8}) {
    CHECK(hyp2f1(-1.0, -0.5, 1.5, r * r) == doctest::Approx(1.0 + r * r / 3.0).epsilon(1e-15));
    const double om = 1.0 - r * r;
    double m3 = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = r * i / 4000.0;
      m3 = std::max(m3, (1.0 + t * t / 3.0) * g_fn(p, t));
    }
    const double want = 2.0 / om + 3.0 * (1.0 + r * r / 3.0) / (om * om) + 3.0 * m3 / std::pow(om, 3.0);
    CHECK(G_fn(p, r) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("g and G are finite, positive, monotone and continuous") {
  for (int n : {3, 5}) {
    for (double alpha : {-3.0, -1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      double prev = G_fn(p, 0.0);
      for (int i = 1; i <= 199; ++i) {
        const double r = i / 200.0;
        const double g = g_fn(p, r), G = G_fn(p, r);
        CHECK(std::isfinite(G));
        CHECK(g > 0.0);
        CHECK(G >= prev);
        prev = G;
      }
      // Near r = 1, G grows like (1 - r^2)^{alpha - 3}; steps of 1e-6 stay well inside that scale.
      for (double r = 0.1; r < 0.99; r += 0.1) {
        CHECK(std::abs(G_fn(p, r + 1e-6) - G_fn(p, r)) <= 1e-3 * G_fn(p, r));
      }
    }
  }
}

TEST_CASE("n_star examples") {
  const ProblemParams p(3, 0.0);
  CHECK(n_star(p, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  for (double alpha : {-1.0, 0.5}) {
    const ProblemParams q(4, alpha);
    CHECK(n_star(q, 2.0) == doctest::Approx(2.0 * n_star(q, 1.0)).epsilon(1e-15));
    CHECK(n_star(q, 3.0) / 3.0 == doctest::Approx(thm11_coefficient(q, 1.0, 0.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(n_star(p, 0.0), DomainError);
}

TEST_CASE("psi examples") {
  for (double M : {1.0, 2.0}) {
    const ProblemParams p(3, -1.0);
    const double head = std::pow(n_star(p, M), -2.0);
    CHECK(psi(p, M, 0.0) == head);
    CHECK(psi(p, M, 1e-9) == doctest::Approx(head).epsilon(1e-6));
    double prev = psi(p, M, 0.0);
    for (int i = 1; i < 1000; ++i) {
      const double v = psi(p, M, i / 1000.0);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(psi(p, M, 0.99) < 0.0);
  }
}

TEST_CASE("landau_radius consistency") {
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      double prev = 1.0;
      for (double M : {1.0, 2.0, 4.0}) {
        const LandauResult r = landau_radius(p, M);
        CHECK(std::abs(psi(p, M, r.r0)) <= 1e-10);
        CHECK(r.equation_residual <= 1e-10);
        CHECK(std::pow(M, n) * r.r0 * G_fn(p, r.r0) ==
              doctest::Approx(landau_rhs(p)).epsilon(1e-10));
        CHECK(r.R0 == M / 2.0 * r.r0 * r.r0 * G_fn(p, r.r0));
        CHECK(r.R0 > 0.0);
        CHECK(r.r0 < prev);
        CHECK(r.bracket.first <= r.r0);
        CHECK(r.r0 <= r.bracket.second);
        prev = r.r0;
      }
    }
  }
}

TEST_CASE("landau_radius against a dense scan") {
  const ProblemParams p(3, 0.0);
  const LandauResult r = landau_radius(p, 1.0);
  CHECK(r.r0 == doctest::Approx(0.0221926828469).epsilon(1e-11));
  // Independent scan on a 1e6-point grid over (0, 1).
  double root = -1.0;
  for (int i = 1; i < 1'000'000; ++i) {
    const double x = i / 1'000'000.0;
    if (psi(p, 1.0, x) <= 0.0) {
      root = x;
      break;
    }
  }
  REQUIRE(root > 0.0);
  CHECK(r.r0 == doctest::Approx(root).epsilon(1e-4));
}

TEST_CASE("matrix_functionals examples") {
  const auto id = matrix_functionals(Eigen::Matrix3d::Identity());
  CHECK(id.norm == doctest::Approx(1.0));
  CHECK(id.l == doctest::Approx(1.0));
  CHECK(id.det == doctest::Approx(1.0));
  const auto d = matrix_functionals(Eigen::Vector3d(2.0, 1.0, 1.0).asDiagonal().toDenseMatrix());
  CHECK(d.norm == doctest::Approx(2.0));
  CHECK(d.l == doctest::Approx(1.0));
  CHECK(d.det == doctest::Approx(2.0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 50; ++k) {
    const int n = 3 + k % 3;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
    }
    const auto f = matrix_functionals(A);
    CHECK(f.l >= std::abs(f.det) / std::pow(f.norm, n - 1) * (1.0 - 1e-12));
  }
  CHECK_THROWS_AS(matrix_functionals(Eigen::MatrixXd(2, 3)), DomainError);
}

TEST_CASE("normalized_linear has unit Jacobian at the origin") {
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      const BoundaryData phi = normalized_linear(p);
      const double j = poisson_jacobian(phi, p, BallPoint(Eigen::VectorXd::Zero(n)), SphereRule::zonal(n))
                           .determinant();
      CHECK(j == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("verify_univalence witness") {
  for (double alpha : {-1.0, 0.0, 0.5}) {
    const ProblemParams p(3, alpha);
    const BoundaryData phi = normalized_linear(p);
    const double M = phi.sup_norm();
    const UnivalenceReport rep = verify_univalence(phi, p, M, 2000, 5, 200);
    CAPTURE(rep.message);
    CHECK(rep.passed);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.min_boundary_distance >= rep.R0 * (1.0 - 1e-6));
    // Same seed, same report.
    const UnivalenceReport again = verify_univalence(phi, p, M, 2000, 5, 200);
    CHECK(again.min_ratio == rep.min_ratio);
  }
}

TEST_CASE("verify_univalence preconditions") {
  const ProblemParams p(3, 0.0);
  const BoundaryData phi = normalized_linear(p);
  CHECK_THROWS_AS(verify_univalence(phi, p, 0.5 * phi.sup_norm(), 10, 1), DomainError);
  CHECK_THROWS_AS(verify_univalence(BoundaryData::linear(Eigen::Matrix3d::Identity() * 2.0), p, 10.0, 10, 1),
                  DomainError);
  CHECK_THROWS_AS(verify_univalence(BoundaryData::coordinate(3, 0), p, 1.0, 10, 1), DomainError);
  CHECK_THROWS_AS(verify_univalence(phi, p, phi.sup_norm(), 0, 1), DomainError);
}
