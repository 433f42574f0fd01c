#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ahm/hypergeom.hpp"
#include "ahm/kernel.hpp"
#include "ahm/sharp_bounds.hpp"
#include "ahm/sphere.hpp"
#include "doctest.h"

using namespace ahm;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double moment(int n, double q) {
  return std::tgamma(n / 2.0) * std::tgamma((q + 1.0) / 2.0) /
         (std::sqrt(kPi) * std::tgamma((n + q) / 2.0));
}

Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v(j) = normal(rng);
  return v.normalized();
}

}  // namespace

TEST_CASE("ExponentPair parsing") {
  const auto a = ExponentPair::parse_q("4/3");
  CHECK(a.q == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(a.p == doctest::Approx(4.0).epsilon(1e-14));
  REQUIRE(a.q_ratio.has_value());
  CHECK(a.q_ratio->first == 4);
  CHECK(a.q_ratio->second == 3);
  CHECK(ExponentPair::parse_q("inf").p == 1.0);
  CHECK(ExponentPair::parse_q("1").p == kInf);
  CHECK(ExponentPair::parse_p("inf").q == 1.0);
  CHECK(ExponentPair::parse_p("2").q == 2.0);
  const auto b = ExponentPair::parse_p("4/1");
  REQUIRE(b.q_ratio.has_value());
  CHECK(b.q_ratio->first == 4);
  CHECK(b.q_ratio->second == 3);
  CHECK_THROWS_AS(ExponentPair::parse_q("0.5"), DomainError);
  CHECK_THROWS_AS(ExponentPair::parse_q("1/2"), DomainError);
  CHECK_THROWS_AS(ExponentPair::parse_q("abc"), DomainError);
  CHECK_THROWS_AS(ExponentPair::parse_q("3/0"), DomainError);
}

TEST_CASE("regime classification") {
  const ProblemParams p(3, 0.0);
  const QThresholds th = q_thresholds(p);
  CHECK(th.lower == doctest::Approx(4.0 / 3.0));
  CHECK(th.upper == doctest::Approx(2.0));
  CHECK(classify_regime(p, ExponentPair::parse_q("4/3")).regime == RegimeCase::LowerThreshold);
  CHECK(classify_regime(p, 4.0 / 3.0 * (1.0 + 1e-14)).regime == RegimeCase::LowerThreshold);
  CHECK(classify_regime(p, 2.0).regime == RegimeCase::UpperThreshold);
  CHECK(classify_regime(p, 1.5).regime == RegimeCase::Between);
  CHECK(classify_regime(p, 1.5).maximizer == Maximizer::Tangential);
  CHECK(classify_regime(p, 1.0).regime == RegimeCase::Outside);
  CHECK(classify_regime(p, 4.0).maximizer == Maximizer::Radial);
  CHECK(classify_regime(p, 2.0).maximizer == Maximizer::Any);
  // alpha = 1/3 makes the thresholds 12/8 and 18/8.
  const ProblemParams r(3, 1.0 / 3.0);
  CHECK(classify_regime(r, ExponentPair::parse_q("3/2")).regime == RegimeCase::LowerThreshold);
  CHECK(classify_regime(r, ExponentPair::parse_q("9/4")).regime == RegimeCase::UpperThreshold);
}

TEST_CASE("J_term examples") {
  for (int n : {3, 4}) {
    for (double alpha : {-1.0, 0.5}) {
      CHECK(J_term(ProblemParams(n, alpha), 1.7, 0.0) == 0.0);
    }
    for (double t : {0.2, 0.8}) CHECK(J_term(ProblemParams(n, 2.0 - n), 2.5, t) == 0.0);
  }
  // n=3, alpha=0, q=2: k = 1/3 and the series is 1 + t^2.
  const double t = 0.5;
  const double want = 2.0 * t * (1.0 / 3.0) * (1.0 + t / 3.0) * (1.0 + t * t);
  CHECK(J_term(ProblemParams(3, 0.0), 2.0, t) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("I_bruteforce examples") {
  const SphereRule rule = SphereRule::bizonal(3, 128, 256);
  for (double q : {1.0, 1.5, 3.0}) {
    CHECK(I_bruteforce(ProblemParams(3, -0.5), q, BallPoint(Eigen::Vector3d::Zero()),
                       UnitDirection::axis(3, 1), rule) ==
          doctest::Approx(moment(3, q)).epsilon(1e-10));
  }
  // Exponent zero: independent of x.
  for (auto [n, alpha] : {std::pair{3, 0.0}, std::pair{4, -1.0}}) {
    const ProblemParams p(n, alpha);
    const double q = q_thresholds(p).lower;
    const BallPoint x = BallPoint::on_axis(n, 0.7);
    for (double beta : {0.0, 0.6, kPi / 2}) {
      CHECK(I_bruteforce(p, q, x, UnitDirection::in_plane(n, beta), SphereRule::bizonal(n)) ==
            doctest::Approx(moment(n, q)).epsilon(1e-10));
    }
  }
}

TEST_CASE("I_bruteforce agrees with the reduced form and with Monte Carlo") {
  for (auto [n, alpha, q] : {std::tuple{3, 0.0, 3.0}, std::tuple{4, 0.5, 1.2}, std::tuple{5, -2.0, 2.2}}) {
    const ProblemParams p(n, alpha);
    for (double t : {0.3, 0.8}) {
      for (double beta : {0.2, 1.1}) {
        const BallPoint x = BallPoint::on_axis(n, t);
        const UnitDirection l = UnitDirection::in_plane(n, beta);
        const double brute = I_bruteforce(p, q, x, l, SphereRule::bizonal(n));
        CHECK(I_reduced(p, q, t, beta, 512) == doctest::Approx(brute).epsilon(1e-8));
        const double mc = I_bruteforce(p, q, x, l, SphereRule::monte_carlo(n, 400'000, 21));
        CHECK(mc == doctest::Approx(brute).epsilon(0.02));
      }
    }
  }
}

TEST_CASE("script_I examples") {
  const double b = 1.7;
  const double cos_moment = 2.0 * std::sqrt(kPi) * std::tgamma((b + 1.0) / 2.0) / std::tgamma(b / 2.0 + 1.0);
  for (double beta : {0.0, 0.9, kPi / 2, kPi}) {
    CHECK(script_I(2.0, 0.0, -0.7, b, beta) == doctest::Approx(std::pow(2.0, -0.7) * cos_moment).epsilon(1e-12));
    CHECK(script_I(1.5, 1.2, 0.0, b, beta) == doctest::Approx(cos_moment).epsilon(1e-12));
  }
  double prev = script_I(1.4, 0.9, 2.0, b, 0.0);
  for (int k = 1; k <= 18; ++k) {
    const double v = script_I(1.4, 0.9, 2.0, b, k * kPi / 36.0);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("script_J examples") {
  const ProblemParams p(4, 0.5);
  const QThresholds th = q_thresholds(p);
  const double q_mid = 0.5 * (th.lower + th.upper);
  for (double beta : {0.3, 1.2}) {
    CHECK(script_J(p, beta, 2.2, 0.0, 0.6) == doctest::Approx(script_J(p, 0.0, 2.2, 0.0, 0.6)).epsilon(1e-12));
    CHECK(script_J(p, beta, 2.2, 0.5, 0.0) == doctest::Approx(script_J(p, 0.0, 2.2, 0.5, 0.0)).epsilon(1e-12));
    CHECK(script_J(p, beta, th.lower, 0.8, 0.7) ==
          doctest::Approx(script_J(p, 0.0, th.lower, 0.8, 0.7)).epsilon(1e-12));
  }
  double best = -1.0, arg = -1.0;
  for (int k = 0; k <= 18; ++k) {
    const double beta = k * kPi / 36.0;
    const double v = script_J(p, beta, q_mid, 0.8, 0.7);
    if (v > best) {
      best = v;
      arg = beta;
    }
  }
  CHECK(arg == doctest::Approx(kPi / 2));
}

TEST_CASE("script_J is monotone in the regime direction") {
  // 12 combinations: three regimes, two parameter sets, two (r, s) pairs.
  for (auto [n, alpha] : {std::pair{3, 0.0}, std::pair{5, -1.5}}) {
    const ProblemParams p(n, alpha);
    const QThresholds th = q_thresholds(p);
    for (double q : {th.lower, 0.5 * (th.lower + th.upper), th.upper + 1.0}) {
      const RegimeCase regime = classify_regime(p, q).regime;
      for (auto [r, s] : {std::pair{0.4, 0.9}, std::pair{0.95, 0.3}}) {
        double prev = script_J(p, 0.0, q, r, s);
        const double first = prev;
        for (int k = 1; k <= 18; ++k) {
          const double v = script_J(p, k * kPi / 36.0, q, r, s);
          const double slack = 1e-9 * std::abs(first);
          if (regime == RegimeCase::LowerThreshold) CHECK(std::abs(v - first) <= slack);
          else if (regime == RegimeCase::Between) CHECK(v >= prev - slack);
          else CHECK(v <= prev + slack);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("sup_I_closed examples") {
  for (int n : {3, 4, 6}) {
    for (double alpha : {-2.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      const QThresholds th = q_thresholds(p);
      for (double q : {1.0, th.lower, 0.5 * (th.lower + th.upper), th.upper, th.upper + 2.0}) {
        if (q < 1.0) continue;
        CHECK(sup_I_closed(p, q, 0.0).value.value() == doctest::Approx(moment(n, q)).epsilon(1e-12));
      }
    }
  }
  const ProblemParams p(3, 0.0);
  const SphereRule rule = SphereRule::bizonal(3, 128, 256);
  // q = 2 is the upper threshold 2n/(n - alpha) here, so the sweep is flat.
  const SupI at2 = sup_I_closed(p, 2.0, 0.6);
  CHECK(at2.tag.regime == RegimeCase::UpperThreshold);
  const DirectionSweep s2 = sweep_I(p, 2.0, 0.6, 181, rule);
  CHECK(at2.value.value() == doctest::Approx(s2.max_value).epsilon(1e-6));
  REQUIRE(s2.maximizer.has_value());
  CHECK(*s2.maximizer == Maximizer::Any);
  // Between: q = 1.7.
  const SupI mid = sup_I_closed(p, 1.7, 0.6);
  const DirectionSweep sm = sweep_I(p, 1.7, 0.6, 181, rule);
  CHECK(mid.value.value() == doctest::Approx(sm.max_value).epsilon(1e-6));
  CHECK(*sm.maximizer == Maximizer::Tangential);
  // Outside: q = 4.
  const SupI out = sup_I_closed(p, 4.0, 0.6);
  const DirectionSweep so = sweep_I(p, 4.0, 0.6, 181, rule);
  CHECK(out.tag.maximizer == Maximizer::Radial);
  CHECK(*so.maximizer == Maximizer::Radial);
  CHECK(out.value.value() == doctest::Approx(so.max_value).epsilon(1e-6));
}

TEST_CASE("sup_I_global examples") {
  for (auto [n, alpha] : {std::pair{3, 0.0}, std::pair{4, -1.0}, std::pair{5, 0.5}}) {
    const ProblemParams p(n, alpha);
    const QThresholds th = q_thresholds(p);
    for (double q : {0.5 * (th.lower + th.upper), th.upper + 1.5}) {
      const double global = sup_I_global(p, q).value();
      for (double t = 0.0; t < 0.99; t += 0.05) {
        CHECK(global >= sup_I_closed(p, q, t).value.value() * (1.0 - 1e-12));
      }
    }
    CHECK_THROWS_AS(sup_I_global(p, th.lower), DomainError);
    CHECK_THROWS_AS(sup_I_global(p, th.upper), DomainError);
  }
  // Near-boundary series oracle.
  const ProblemParams p(3, 0.0);
  const double q = 4.0, n = 3.0, a = I_exponent(p, q);
  const double series = std::pow(2.0, a) * moment(3, q) *
                        hyp3f2((2.0 * n - 2.0 - n * q) / 4.0, (2.0 * n - n * q) / 4.0, (q + 1.0) / 2.0,
                               0.5, (q + n) / 2.0, 0.999999);
  CHECK(sup_I_global(p, q).value() == doctest::Approx(series).epsilon(1e-4));
}

TEST_CASE("thm11_coefficient examples") {
  for (int n : {3, 4, 5}) {
    for (double alpha : {-2.0, -1.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      for (double q : {1.0, 1.5, 2.0, 4.0}) {
        const double want = p.n_minus_alpha() * c_n_alpha(p) * std::pow(moment(n, q), 1.0 / q);
        CHECK(thm11_coefficient(p, q, 0.0) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
  const ProblemParams h(4, -2.0);
  for (double t : {0.3, 0.7}) {
    const double q = 1.8;
    const double want = h.n_minus_alpha() * c_n_alpha(h) *
                        std::pow(1.0 - t * t, -(4.0 * (q - 1.0) + 1.0) / q) *
                        std::pow(sup_I_closed(h, q, t).value.value(), 1.0 / q);
    CHECK(thm11_coefficient(h, q, t) == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK_THROWS_AS(thm11_coefficient(ProblemParams(3, 0.0), ExponentPair::from_p(1.0),
                                    BallPoint::on_axis(3, 0.2)),
                  DomainError);
}

TEST_CASE("c_infty_direction examples") {
  std::mt19937_64 rng(31);
  for (int n : {3, 4}) {
    for (double alpha : {-3.0, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      for (int i = 0; i < 3; ++i) {
        CHECK(c_infty_direction(p, BallPoint(Eigen::VectorXd::Zero(n)), UnitDirection(random_unit(n, rng))) ==
              doctest::Approx(p.n_minus_alpha() * c_n_alpha(p)).epsilon(1e-10));
      }
      // Unitary invariance.
      Eigen::MatrixXd g(n, n);
      for (int j = 0; j < n; ++j) g.col(j) = random_unit(n, rng);
      const Eigen::MatrixXd A = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      const Eigen::VectorXd x = random_unit(n, rng) * 0.6, l = random_unit(n, rng);
      CHECK(c_infty_direction(p, BallPoint(A * x), UnitDirection(A * l)) ==
            doctest::Approx(c_infty_direction(p, BallPoint(x), UnitDirection(l))).epsilon(1e-10));
    }
  }
}

TEST_CASE("c_infty_direction against sampled maxima") {
  const ProblemParams p(3, -0.5);
  const BallPoint x(Eigen::Vector3d(0.3, 0.2, -0.1));
  const UnitDirection l(Eigen::Vector3d(1.0, -2.0, 0.5));
  const double c = c_n_alpha(p);
  const double bound = c_infty_direction(p, x, l);
  double best = 0.0;
  for (std::int64_t b = 0; b < 1'000'000 / kMonteCarloBlock; ++b) {
    const Eigen::MatrixXd pts = sphere_block_samples(3, 77, b, kMonteCarloBlock);
    for (int i = 0; i < pts.rows(); ++i) {
      const Eigen::VectorXd z = pts.row(i).transpose();
      best = std::max(best, std::abs(kernel_gradient(p, x.coords(), z, c).dot(l.coords())));
    }
  }
  CHECK(best <= bound * (1.0 + 1e-12));
  CHECK(best >= bound * (1.0 - 1e-2));
}

TEST_CASE("c_infty_sup examples") {
  for (double alpha : {-2.0, 0.0, 0.5}) {
    const ProblemParams p(3, alpha);
    const BoundValue v = c_infty_sup(p, 0.0);
    CHECK(v.lower == doctest::Approx(p.n_minus_alpha() * c_n_alpha(p)).epsilon(1e-14));
    CHECK(v.upper == doctest::Approx(p.n_minus_alpha() * c_n_alpha(p)).epsilon(1e-14));
  }
  const ProblemParams p(3, 0.0);
  CHECK(c_infty_sup(p, 0.5).value() == doctest::Approx(28.0).epsilon(1e-14));
  CHECK(sweep_c_infty(p, 0.5, 181).max_value == doctest::Approx(28.0).epsilon(1e-9));
  const ProblemParams q(3, -2.0);
  const BoundValue sand = c_infty_sup(q, 0.5);
  CHECK(sand.is_interval());
  const double swept = sweep_c_infty(q, 0.5, 181).max_value;
  CHECK(swept >= sand.lower * (1.0 - 1e-9));
  CHECK(swept <= sand.upper * (1.0 + 1e-9));
}

TEST_CASE("c_infty_sup carries the (1+t)^{-alpha} factor") {
  // At zeta = n_x the kernel gradient has the factor (1-t^2)^{-alpha} / (1-t)^{n+2-alpha},
  // which leaves (1+t)^{-alpha} next to the t-polynomial.
  for (int n : {3, 4}) {
    for (double alpha : {2.0 - n, -0.5, 0.5}) {
      const ProblemParams p(n, alpha);
      for (double t : {0.3, 0.6, 0.9}) {
        const double swept = sweep_c_infty(p, t, 181).max_value;
        CHECK(c_infty_sup(p, t).value() == doctest::Approx(swept).epsilon(1e-9));
        const double ratio = c_infty_sup_uncorrected(p, t).value() / c_infty_sup(p, t).value();
        CHECK(ratio == doctest::Approx(std::pow(1.0 + t, alpha)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("thm12_coefficient examples") {
  for (int n : {3, 5}) {
    for (double alpha : {-4.0, 2.0 - n, 0.5}) {
      const ProblemParams p(n, alpha);
      CHECK(thm12_coefficient(p, 0.0) == doctest::Approx(p.n_minus_alpha() * c_n_alpha(p)).epsilon(1e-14));
    }
    const BoundValue v = c_infty_sup(ProblemParams(n, 2.0 - n), 0.7);
    CHECK(v.lower == v.upper);
  }
}

TEST_CASE("K_alpha examples") {
  for (int n : {3, 4}) {
    for (double alpha : {2.0 - n - 1.0, 2.0 - n, 0.0, 0.5}) {
      const ProblemParams p(n, alpha);
      for (double rho : {0.2, 0.7}) {
        const double k = n + alpha - 2.0;
        CHECK(K_alpha(p, rho, 1.0) == doctest::Approx(std::pow(n - alpha + k * rho, 2)).epsilon(1e-13));
        CHECK(K_alpha(p, rho, -1.0) == doctest::Approx(std::pow(alpha - n + k * rho, 2)).epsilon(1e-13));
        const double sign = (n - alpha) * k;
        for (double t = -0.9; t < 0.95; t += 0.1) {
          const double slope = K_alpha(p, rho, t + 1e-4) - K_alpha(p, rho, t - 1e-4);
          if (sign == 0.0) CHECK(std::abs(slope) <= 1e-12 * K_alpha(p, rho, t));
          else CHECK(slope * sign > 0.0);
        }
      }
    }
  }
  CHECK_THROWS_AS(K_alpha(ProblemParams(3, 0.0), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(K_alpha(ProblemParams(3, 0.0), 0.5, 1.5), DomainError);
}

TEST_CASE("sweeps report the maximizer class") {
  const ProblemParams p(4, -1.0);
  const SphereRule rule = SphereRule::bizonal(4, 128, 256);
  const QThresholds th = q_thresholds(p);
  // The |cos|^q kink limits this rule to a few 1e-9 at non-integer q.
  const DirectionSweep lower = sweep_I(p, th.lower, 0.5, 19, rule, 1e-6);
  REQUIRE(lower.maximizer.has_value());
  CHECK(*lower.maximizer == Maximizer::Any);
  const DirectionSweep between = sweep_I(p, 0.5 * (th.lower + th.upper), 0.5, 19, rule);
  CHECK(*between.maximizer == Maximizer::Tangential);
  CHECK(between.argmax == 18);
  const DirectionSweep outside = sweep_I(p, th.upper + 1.0, 0.5, 19, rule);
  CHECK(*outside.maximizer == Maximizer::Radial);
  CHECK(outside.argmax == 0);
  CHECK_THROWS_AS(sweep_I(p, 2.0, 0.5, 1, rule), DomainError);
}
