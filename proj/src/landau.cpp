#include "ahm/landau.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ahm/errors.hpp"
#include "ahm/hypergeom.hpp"
#include "ahm/quadrature.hpp"

namespace ahm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kInnerGrid = 1024;
constexpr double kTaylorRadius = 1e-4;

void check_r(double r, const char* who) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError(std::string(who) + ": need 0 <= r < 1");
}

// max over [0, r] of f: grid, then golden section around the grid argmax.
template <typename F>
double interval_max(const F& f, double r) {
  if (r == 0.0) return f(0.0);
  const double h = r / (kInnerGrid - 1);
  int arg = 0;
  double best = f(0.0);
  for (int i = 1; i < kInnerGrid; ++i) {
    const double v = f(h * i);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  const double lo = std::max(0.0, h * (arg - 1)), hi = std::min(r, h * (arg + 1));
  return std::max(best, f(golden_section_max(f, lo, hi, 1e-12 * std::max(r, 1e-300))));
}

}  // namespace

double g_fn(const ProblemParams& p, double r) {
  check_r(r, "g_fn");
  const double m = p.n + 2.0 - p.alpha;
  if (r < kTaylorRadius) {
    const double c1 = m - m * (m - 1.0) / 2.0 + (1.0 - p.alpha);
    const double c2 = m * (m - 1.0) * (m - 2.0) / 6.0;
    return m + c1 * r + c2 * r * r;
  }
  return (2.0 * std::pow(1.0 + r * r, m / 2.0) - std::pow(1.0 - r, m) -
          std::pow(1.0 - r * r, 1.0 - p.alpha)) /
         r;
}

double G_fn(const ProblemParams& p, double r) {
  check_r(r, "G_fn");
  const double c = c_n_alpha(p), a = p.alpha, n = p.n;
  auto f1 = [&](double t) { return hyp2f1(a / 2.0, (n + a) / 2.0 - 1.0, n / 2.0, t * t); };
  auto f2 = [&](double t) { return hyp2f1(a / 2.0 - 1.0, (n + a) / 2.0 - 2.0, n / 2.0, t * t); };
  auto f3 = [&](double t) { return f2(t) * g_fn(p, t); };
  const double om = 1.0 - r * r;
  const double term1 = 2.0 * (1.0 - a) * c * interval_max(f1, r) / om;
  const double term2 = p.n_minus_alpha() * c * interval_max(f2, r) / (om * om);
  const double term3 = p.n_minus_alpha() * c * interval_max(f3, r) / std::pow(om, 3.0 - a);
  return term1 + term2 + term3;
}

double n_star(const ProblemParams& p, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("n_star: need M > 0");
  return M * p.n_minus_alpha() * c_n_alpha(p) *
         std::exp(std::lgamma(p.n / 2.0) - std::lgamma((p.n + 1.0) / 2.0)) / std::sqrt(kPi);
}

double psi(const ProblemParams& p, double M, double r) {
  const double ns = n_star(p, M);
  return std::pow(ns, -(p.n - 1.0)) - M * r * G_fn(p, r);
}

double landau_rhs(const ProblemParams& p) {
  return std::pow(1.0 / n_star(p, 1.0), p.n - 1.0);
}

LandauResult landau_radius(const ProblemParams& p, double M) {
  const double head = std::pow(n_star(p, M), -(p.n - 1.0));
  auto f = [&](double r) { return head - M * r * G_fn(p, r); };
  double lo = 0.0, hi = -1.0, f_lo = head, f_hi = 0.0;
  for (int k = 1; k < kLandauScanPoints; ++k) {
    const double r = static_cast<double>(k) / kLandauScanPoints;
    const double v = f(r);
    if (v <= 0.0) {
      hi = r;
      f_hi = v;
      break;
    }
    lo = r;
    f_lo = v;
  }
  if (hi < 0.0) throw NumericalFailure("landau_radius: psi has no sign change on the scan grid");
  while (f_hi != 0.0) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v > 0.0) {
      lo = mid;
      f_lo = v;
    } else {
      hi = mid;
      f_hi = v;
    }
  }
  LandauResult res;
  res.M = M;
  res.bracket = {lo, hi};
  res.r0 = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  res.psi_residual = res.r0 == lo ? f_lo : f_hi;
  res.G_r0 = G_fn(p, res.r0);
  res.R0 = M / 2.0 * res.r0 * res.r0 * res.G_r0;
  res.equation_residual =
      std::abs(std::pow(M, p.n) * res.r0 * res.G_r0 / landau_rhs(p) - 1.0);
  return res;
}

MatrixFunctionals matrix_functionals(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw DomainError("matrix_functionals: need a non-empty square matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  return {sv(0), sv(sv.size() - 1), A.determinant()};
}

BoundaryData normalized_linear(const ProblemParams& p) {
  const double c = p.n / (p.n_minus_alpha() * c_n_alpha(p));
  return BoundaryData::linear(c * Eigen::MatrixXd::Identity(p.n, p.n));
}

UnivalenceReport verify_univalence(const BoundaryData& phi, const ProblemParams& p, double M,
                                   int pairs, std::uint64_t seed, int boundary_samples) {
  const int n = p.n;
  if (phi.dim() != n || phi.value_dim() != n) {
    throw DomainError("verify_univalence: need vector boundary data with m = n");
  }
  if (pairs < 1) throw DomainError("verify_univalence: need at least one pair");
  if (phi.sup_norm() > M * (1.0 + 1e-12)) {
    throw DomainError("verify_univalence: sup |phi| exceeds M");
  }
  const SphereRule rule = SphereRule::zonal(n);
  auto u = [&](const Eigen::VectorXd& x) { return poisson_extend(phi, p, BallPoint(x), rule); };
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd u0 = u(origin);
  const double j0 = poisson_jacobian(phi, p, BallPoint(origin), rule).determinant();
  if (u0.norm() > 1e-8 || std::abs(j0 - 1.0) > 1e-8) {
    throw DomainError("verify_univalence: need u(0) = 0 and J_u(0) = 1");
  }

  UnivalenceReport rep;
  const LandauResult lr = landau_radius(p, M);
  rep.r0 = lr.r0;
  rep.R0 = lr.R0;
  const double radius = lr.r0 * (1.0 - 1e-9);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  auto direction = [&]() {
    Eigen::VectorXd v(n);
    do {
      for (int j = 0; j < n; ++j) v(j) = normal(rng);
    } while (v.norm() == 0.0);
    return Eigen::VectorXd(v.normalized());
  };
  auto in_ball = [&]() {
    return Eigen::VectorXd(direction() * radius * std::pow(uniform(rng), 1.0 / n));
  };

  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const Eigen::VectorXd a = in_ball(), b = in_ball();
    const double sep = (a - b).norm();
    if (sep == 0.0) continue;
    const double ratio = (u(a) - u(b)).norm() / sep;
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.worst_a = a;
      rep.worst_b = b;
    }
  }
  rep.min_boundary_distance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < boundary_samples; ++i) {
    const Eigen::VectorXd s = direction() * lr.r0;
    rep.min_boundary_distance = std::min(rep.min_boundary_distance, (u(s) - u0).norm());
  }
  const bool injective = rep.min_ratio > 0.0;
  const bool covers = rep.min_boundary_distance >= rep.R0 * (1.0 - 1e-6);
  rep.passed = injective && covers;
  std::ostringstream msg;
  msg.precision(17);
  if (!injective) {
    msg << "collision: min separation ratio " << rep.min_ratio << " at pair ("
        << rep.worst_a.transpose() << ") / (" << rep.worst_b.transpose() << ")";
  } else if (!covers) {
    msg << "boundary image distance " << rep.min_boundary_distance << " below R0 = " << rep.R0;
  } else {
    msg << "min separation ratio " << rep.min_ratio << ", min |u| on |x| = r0: "
        << rep.min_boundary_distance << " >= R0 = " << rep.R0;
  }
  rep.message = msg.str();
  return rep;
}

}  // namespace ahm
