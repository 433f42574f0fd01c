#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ahm/errors.hpp"

namespace ahm {

/// Dimension n >= 3 and parameter alpha < 1.
struct ProblemParams {
  int n = 3;
  double alpha = 0.0;

  ProblemParams() = default;
  ProblemParams(int dim, double a) : n(dim), alpha(a) { validate(); }

  void validate() const {
    if (n < 3) throw DomainError("ProblemParams: dimension n must be >= 3");
    if (!(alpha < 1.0) || !std::isfinite(alpha)) {
      throw DomainError("ProblemParams: alpha must be a finite real < 1");
    }
  }
  double n_minus_alpha() const { return n - alpha; }
  /// 2 - n - alpha; zero in the hyperbolic-harmonic case.
  double hyperbolic_offset() const { return 2.0 - n - alpha; }
};

/// Interior point of the unit ball.
class BallPoint {
 public:
  explicit BallPoint(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return x_; }
  int dim() const { return static_cast<int>(x_.size()); }
  double norm() const { return x_.norm(); }
  /// t e_1 in R^n.
  static BallPoint on_axis(int n, double t);

 private:
  Eigen::VectorXd x_;
};

/// Unit vector in R^n.
class UnitDirection {
 public:
  /// Normalizes `v`; throws DomainError on a zero vector.
  explicit UnitDirection(const Eigen::VectorXd& v);
  const Eigen::VectorXd& coords() const { return l_; }
  int dim() const { return static_cast<int>(l_.size()); }

  static UnitDirection axis(int n, int i);
  /// n_x = x / |x| (e_1 when x = 0).
  static UnitDirection radial(const BallPoint& x);
  /// A unit vector orthogonal to n_x.
  static UnitDirection tangential(const BallPoint& x);
  /// cos(beta) e_1 + sin(beta) e_2.
  static UnitDirection in_plane(int n, double beta);

 private:
  Eigen::VectorXd l_;
};

/// Normalizing constant of the Poisson-Szego kernel.
double c_n_alpha(const ProblemParams& params);

/// Below this |x| the kernel is evaluated directly; above it in log space.
inline constexpr double kLogSpaceRadius = 0.99;

/// P_alpha(x, zeta) = C (1 - |x|^2)^{1-alpha} / |x - zeta|^{n-alpha}.
template <typename DX, typename DZ>
typename DX::Scalar kernel_value(const ProblemParams& p, const Eigen::MatrixBase<DX>& x,
                                 const Eigen::MatrixBase<DZ>& zeta, double c_norm) {
  using T = typename DX::Scalar;
  const T x2 = x.squaredNorm();
  const T d2 = (x - zeta).squaredNorm();
  const T one_minus = T(1) - x2;
  if (x2 > T(kLogSpaceRadius * kLogSpaceRadius)) {
    using std::exp;
    using std::log;
    return exp(log(T(c_norm)) + T(1 - p.alpha) * log(one_minus) -
               T(0.5 * p.n_minus_alpha()) * log(d2));
  }
  using std::pow;
  return T(c_norm) * pow(one_minus, T(1 - p.alpha)) / pow(d2, T(0.5 * p.n_minus_alpha()));
}

template <typename DX, typename DZ>
typename DX::Scalar kernel_value(const ProblemParams& p, const Eigen::MatrixBase<DX>& x,
                                 const Eigen::MatrixBase<DZ>& zeta) {
  return kernel_value(p, x, zeta, c_n_alpha(p));
}

/// Gradient of P_alpha(., zeta) at x:
///   -C [2(1-a) x |x-z|^2 + (n-a)(1-|x|^2)(x-z)] / ((1-|x|^2)^a |x-z|^{n+2-a}).
template <typename DX, typename DZ>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, 1> kernel_gradient(
    const ProblemParams& p, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DZ>& zeta,
    double c_norm) {
  using T = typename DX::Scalar;
  using std::pow;
  const T x2 = x.squaredNorm();
  const Eigen::Matrix<T, Eigen::Dynamic, 1> diff = x - zeta;
  const T d2 = diff.squaredNorm();
  const T one_minus = T(1) - x2;
  const T scale =
      -T(c_norm) / (pow(one_minus, T(p.alpha)) * pow(d2, T(0.5 * (p.n + 2 - p.alpha))));
  return scale * (T(2 * (1 - p.alpha)) * d2 * x + T(p.n_minus_alpha()) * one_minus * diff);
}

template <typename DX, typename DZ>
Eigen::Matrix<typename DX::Scalar, Eigen::Dynamic, 1> kernel_gradient(
    const ProblemParams& p, const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DZ>& zeta) {
  return kernel_gradient(p, x, zeta, c_n_alpha(p));
}

/// Closed-form total mass of the kernel at a point with |x| = radius:
///   C (1-|x|^2)^{1-alpha} 2F1((n-alpha)/2, 1-alpha/2; n/2; |x|^2).
double kernel_mass(const ProblemParams& params, double radius);
/// Same with a caller-supplied normalizing constant.
double kernel_mass(const ProblemParams& params, double radius, double c_norm);

inline double kernel_mass(const ProblemParams& params, const BallPoint& x) {
  return kernel_mass(params, x.norm());
}

}  // namespace ahm
