#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>

#include "ahm/kernel.hpp"
#include "ahm/sphere.hpp"

namespace ahm {

/// Boundary function phi : S^{n-1} -> R^m from one of the builtin families
/// or from tabulated samples.
class BoundaryData {
 public:
  enum class Family { Constant, Coordinate, Signed, Linear, Cap, Tabulated };

  /// phi = c, m = c.size().
  static BoundaryData constant(int n, const Eigen::VectorXd& c);
  /// phi(zeta) = zeta_i, m = 1.
  static BoundaryData coordinate(int n, int i);
  /// phi(zeta) = sgn<zeta, l>, m = 1.
  static BoundaryData signed_half(const UnitDirection& l);
  /// phi(zeta) = A zeta for a square matrix A, m = n.
  static BoundaryData linear(const Eigen::MatrixXd& A);
  /// Indicator of the cap {<zeta, l> > h}, m = 1.
  static BoundaryData cap(const UnitDirection& l, double h);
  /// Nearest-neighbour lookup in the samples. Rows of `points` are unit
  /// vectors; rows of `values` the corresponding phi values.
  static BoundaryData tabulated(const Eigen::MatrixXd& points, const Eigen::MatrixXd& values);

  Family family() const { return family_; }
  int dim() const { return n_; }
  int value_dim() const { return m_; }

  Eigen::VectorXd value(const Eigen::VectorXd& zeta) const;
  /// Declared esssup |phi| (Euclidean norm for m > 1).
  double sup_norm() const;

  /// Linear part: phi(zeta) = matrix() zeta for Coordinate (1 x n) and Linear.
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& constant_value() const { return constant_; }
  const Eigen::VectorXd& direction() const { return direction_; }
  double height() const { return height_; }

  /// Component i of a vector-valued family as scalar data, when the family
  /// allows it (constant, coordinate-like rows of linear, tabulated).
  BoundaryData component(int i) const;

 private:
  BoundaryData() = default;

  Family family_ = Family::Constant;
  int n_ = 3;
  int m_ = 1;
  Eigen::VectorXd constant_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd direction_;
  double height_ = 0.0;
  Eigen::MatrixXd points_;  // sorted lexicographically
  Eigen::MatrixXd values_;
};

/// Reads tabulated boundary data: a header row, then per row n coordinates
/// followed by m values. Coordinates off the sphere by more than 1e-6 are
/// renormalized and a warning is written to `warn` (if non-null).
BoundaryData load_boundary_csv(const std::string& path, int n, std::ostream* warn = nullptr);

/// (integral |phi|^p dsigma)^{1/p}; the declared sup for p = infinity.
double lp_norm(const BoundaryData& phi, double p, const SphereRule& rule);

/// u(x) = integral P_alpha(x, zeta) phi(zeta) dsigma(zeta).
Eigen::VectorXd poisson_extend(const BoundaryData& phi, const ProblemParams& params,
                               const BallPoint& x, const SphereRule& rule);

/// Monte Carlo evaluation of the same integral with its standard error.
MonteCarloVecEstimate poisson_extend_mc(const BoundaryData& phi, const ProblemParams& params,
                                        const BallPoint& x, std::int64_t samples,
                                        std::uint64_t seed);

/// Du(x), an m x n matrix whose rows are the gradients of the components.
struct JacobianMatrix {
  Eigen::MatrixXd entries;
  /// J_u(x) for square Jacobians.
  double determinant() const;
};

JacobianMatrix poisson_jacobian(const BoundaryData& phi, const ProblemParams& params,
                                const BallPoint& x, const SphereRule& rule);

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central-difference discretization of
///   (1-|x|^2)[(1-|x|^2) Lap u - 2 alpha <x, grad u> + alpha(2-n-alpha) u].
/// Requires 1 - |x| > h sqrt(n).
Eigen::VectorXd alpha_laplacian_residual(const VectorField& u, const ProblemParams& params,
                                         const BallPoint& x, double h);

}  // namespace ahm
