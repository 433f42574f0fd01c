#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>

#include "ahm/kernel.hpp"
#include "ahm/poisson.hpp"

namespace ahm {

/// g(r) with its limit n + 2 - alpha at r = 0.
double g_fn(const ProblemParams& params, double r);

/// The three-term function G(r); inner maxima over [0, r] by grid search.
double G_fn(const ProblemParams& params, double r);

/// M (n - alpha) C Gamma(n/2) / (sqrt(pi) Gamma((n+1)/2)).
double n_star(const ProblemParams& params, double M);

/// 1 / N*^{n-1} - M r G(r).
double psi(const ProblemParams& params, double M, double r);

/// (sqrt(pi) Gamma((n+1)/2) / ((n-alpha) C Gamma(n/2)))^{n-1}.
double landau_rhs(const ProblemParams& params);

struct LandauResult {
  double r0 = 0.0;
  double R0 = 0.0;
  double M = 0.0;
  double psi_residual = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double G_r0 = 0.0;
  /// |M^n r0 G(r0) / rhs - 1|.
  double equation_residual = 0.0;
};

/// Number of scan intervals on (0, 1) used to bracket the smallest root.
inline constexpr int kLandauScanPoints = 10000;

/// Smallest positive root r0 of psi and R0 = (M/2) r0^2 G(r0).
LandauResult landau_radius(const ProblemParams& params, double M);

struct MatrixFunctionals {
  double norm = 0.0;  // largest singular value
  double l = 0.0;     // smallest singular value
  double det = 0.0;
};

MatrixFunctionals matrix_functionals(const Eigen::MatrixXd& A);

struct UnivalenceReport {
  bool passed = false;
  double min_ratio = 0.0;
  double min_boundary_distance = 0.0;
  double R0 = 0.0;
  double r0 = 0.0;
  Eigen::VectorXd worst_a, worst_b;
  std::string message;
};

/// Samples pairs in B^n(r0 (1 - 1e-9)) and points on |x| = r0 and checks
/// injectivity and |u(x) - u(0)| >= R0 (1 - 1e-6). Expects u(0) = 0 and
/// J_u(0) = 1 (checked to 1e-8) and sup |phi| <= M.
UnivalenceReport verify_univalence(const BoundaryData& phi, const ProblemParams& params, double M,
                                   int pairs, std::uint64_t seed, int boundary_samples = 1000);

/// c zeta with c = n / ((n - alpha) C), so that J_u(0) = 1.
BoundaryData normalized_linear(const ProblemParams& params);

}  // namespace ahm
