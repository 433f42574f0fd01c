#include "ahm/kernel.hpp"

#include "ahm/hypergeom.hpp"

namespace ahm {

BallPoint::BallPoint(Eigen::VectorXd coords) : x_(std::move(coords)) {
  if (x_.size() < 1) throw DomainError("BallPoint: empty coordinate vector");
  if (!(x_.norm() < 1.0)) throw DomainError("BallPoint: |x| must be < 1");
}

BallPoint BallPoint::on_axis(int n, double t) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x(0) = t;
  return BallPoint(std::move(x));
}

UnitDirection::UnitDirection(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("UnitDirection: cannot normalize a zero vector");
  }
  l_ = v / norm;
}

UnitDirection UnitDirection::axis(int n, int i) {
  if (i < 0 || i >= n) throw DomainError("UnitDirection::axis: index out of range");
  return UnitDirection(Eigen::VectorXd::Unit(n, i));
}

UnitDirection UnitDirection::radial(const BallPoint& x) {
  if (x.norm() == 0.0) return axis(x.dim(), 0);
  return UnitDirection(x.coords());
}

UnitDirection UnitDirection::tangential(const BallPoint& x) {
  const Eigen::VectorXd nx = radial(x).coords();
  // Project the coordinate axis least aligned with n_x.
  Eigen::Index k = 0;
  nx.cwiseAbs().minCoeff(&k);
  Eigen::VectorXd t = Eigen::VectorXd::Unit(x.dim(), k);
  t -= t.dot(nx) * nx;
  return UnitDirection(t);
}

UnitDirection UnitDirection::in_plane(int n, double beta) {
  if (n < 2) throw DomainError("UnitDirection::in_plane: need n >= 2");
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
  l(0) = std::cos(beta);
  l(1) = std::sin(beta);
  return UnitDirection(l);
}

double c_n_alpha(const ProblemParams& p) {
  p.validate();
  const double a = p.alpha;
  return std::exp(std::lgamma((p.n - a) / 2.0) + std::lgamma(1.0 - a / 2.0) -
                  std::lgamma(p.n / 2.0) - std::lgamma(1.0 - a));
}

double kernel_mass(const ProblemParams& p, double radius) {
  return kernel_mass(p, radius, c_n_alpha(p));
}

double kernel_mass(const ProblemParams& p, double radius, double c_norm) {
  p.validate();
  if (!(radius >= 0.0 && radius < 1.0)) throw DomainError("kernel_mass: need 0 <= |x| < 1");
  const double t = radius * radius;
  return c_norm * std::pow(1.0 - t, 1.0 - p.alpha) *
         hyp2f1(p.n_minus_alpha() / 2.0, 1.0 - p.alpha / 2.0, p.n / 2.0, t);
}

}  // namespace ahm
