#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace ahm {

/// Quadrature description for the normalized surface measure on S^{n-1}.
struct SphereRule {
  enum class Kind { Zonal1D, Bizonal2D, MonteCarlo };

  Kind kind = Kind::Bizonal2D;
  int n = 3;
  int degree = 256;   // 1D nodes (zonal) or radial nodes (bizonal)
  int angular = 512;  // angular nodes (bizonal)
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;

  static SphereRule zonal(int n, int degree = 256);
  static SphereRule bizonal(int n, int radial = 256, int angular = 512);
  static SphereRule monte_carlo(int n, std::int64_t samples = 1'000'000,
                                std::uint64_t seed = 0);

  bool deterministic() const { return kind != Kind::MonteCarlo; }
};

/// Monte Carlo blocks hold this many samples, each block seeded from
/// (seed, block index).
inline constexpr int kMonteCarloBlock = 64;

using ZonalFn = std::function<double(double)>;
using BizonalFn = std::function<double(double, double)>;
/// Angular discontinuities (radians) of a bizonal integrand on the circle of
/// radius r in the projection disk.
using AngularBreaks = std::function<std::vector<double>(double r)>;

/// Integral over S^{n-1} of zeta -> f(zeta_1). `breaks` lists values of
/// zeta_1 in (-1, 1) where f is not smooth.
double reduce_zonal(int n, const ZonalFn& f, const SphereRule& rule,
                    const std::vector<double>& breaks = {});

/// Integral over S^{n-1} of zeta -> f(zeta_1, zeta_2), evaluated on the
/// projection disk in polar coordinates with r = sin(u).
double reduce_bizonal(int n, const BizonalFn& f, const SphereRule& rule,
                      const AngularBreaks& angular_breaks = {},
                      const std::vector<double>& radial_breaks = {});

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

struct MonteCarloVecEstimate {
  Eigen::VectorXd estimate;
  Eigen::VectorXd std_error;
};

/// Uniform points on S^{n-1} for block `block` of a seeded run
/// (rows are points).
Eigen::MatrixXd sphere_block_samples(int n, std::uint64_t seed, std::int64_t block,
                                     int count);

MonteCarloEstimate monte_carlo_sphere(int n,
                                      const std::function<double(const Eigen::VectorXd&)>& f,
                                      std::int64_t count, std::uint64_t seed);

MonteCarloVecEstimate monte_carlo_sphere_vec(
    int n, int m, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    std::int64_t count, std::uint64_t seed);

/// Integral of |x - zeta|^{-2 lambda} over S^{n-1} with t = |x|^2,
/// as 2F1(lambda, lambda - n/2 + 1; n/2; t).
double liu_identity(int n, double lambda, double t);

/// Euler-transformed form (1-t)^{n-2lambda-1} 2F1(n/2-lambda, n-lambda-1; n/2; t).
double liu_identity_euler(int n, double lambda, double t);

}  // namespace ahm
