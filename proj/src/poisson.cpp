#include "ahm/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ahm/errors.hpp"

namespace ahm {

namespace {

constexpr double kPi = std::numbers::pi;

// Orthonormal frame adapted to x and a direction l: e1 = n_x (or l when
// x = 0), e2 completes span(e1, l), and l = cos(gamma) e1 + sin(gamma) e2.
struct PlaneFrame {
  Eigen::VectorXd e1, e2;
  double gamma = 0.0;
};

PlaneFrame plane_frame(const BallPoint& x, const Eigen::VectorXd& l) {
  PlaneFrame f;
  f.e1 = x.norm() > 0.0 ? Eigen::VectorXd(x.coords() / x.norm()) : l;
  Eigen::VectorXd rest = l - l.dot(f.e1) * f.e1;
  if (rest.norm() > 1e-14) {
    f.e2 = rest.normalized();
  } else {
    Eigen::Index k = 0;
    f.e1.cwiseAbs().minCoeff(&k);
    Eigen::VectorXd t = Eigen::VectorXd::Unit(f.e1.size(), k);
    f.e2 = (t - t.dot(f.e1) * f.e1).normalized();
  }
  f.gamma = std::atan2(l.dot(f.e2), l.dot(f.e1));
  return f;
}

// Kernel and gradient factors as functions of t = <zeta, n_x>, |x| = rho.
struct KernelProfile {
  ProblemParams p;
  double rho, c_norm;

  double dist2(double t) const { return std::max(1.0 + rho * rho - 2.0 * rho * t, 0.0); }
  double value(double t) const {
    const double om = 1.0 - rho * rho;
    return c_norm * std::exp((1.0 - p.alpha) * std::log(om) -
                             0.5 * p.n_minus_alpha() * std::log(dist2(t)));
  }
  // K = C (1-rho^2)^{-alpha} |x - zeta|^{-(n+2-alpha)}.
  double k(double t) const {
    const double om = 1.0 - rho * rho;
    return c_norm * std::exp(-p.alpha * std::log(om) -
                             0.5 * (p.n + 2.0 - p.alpha) * std::log(dist2(t)));
  }
  // g1 = 2(1-alpha)|x-zeta|^2 + (n-alpha)(1-|x|^2).
  double g1(double t) const {
    return 2.0 * (1.0 - p.alpha) * dist2(t) + p.n_minus_alpha() * (1.0 - rho * rho);
  }
};

struct ScalarProfile {
  BoundaryData::Family family;
  double h;
  double operator()(double w) const {
    if (family == BoundaryData::Family::Signed) return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
    return w > h ? 1.0 : 0.0;
  }
};

AngularBreaks discontinuity_breaks(const BoundaryData& phi, double gamma) {
  if (phi.family() == BoundaryData::Family::Signed) {
    return [gamma](double) {
      return std::vector<double>{gamma - kPi / 2.0, gamma + kPi / 2.0};
    };
  }
  const double h = phi.height();
  return [gamma, h](double r) {
    if (std::abs(h) >= r) return std::vector<double>{};
    const double d = std::acos(h / r);
    return std::vector<double>{gamma - d, gamma + d};
  };
}

std::vector<double> radial_discontinuity(const BoundaryData& phi) {
  if (phi.family() == BoundaryData::Family::Cap) return {std::abs(phi.height())};
  return {};
}

bool uses_monte_carlo(const BoundaryData& phi, const SphereRule& rule) {
  return rule.kind == SphereRule::Kind::MonteCarlo ||
         phi.family() == BoundaryData::Family::Tabulated;
}

SphereRule bizonal_rule(const SphereRule& rule) {
  return SphereRule::bizonal(rule.n, rule.degree, rule.angular);
}

void check_rule(const BoundaryData& phi, const SphereRule& rule) {
  if (rule.n != phi.dim()) throw DomainError("sphere rule dimension does not match data");
}

void check_point(const BoundaryData& phi, const ProblemParams& params, const BallPoint& x) {
  if (params.n != phi.dim() || x.dim() != phi.dim()) {
    throw DomainError("dimension mismatch between parameters, point and boundary data");
  }
}

double sign_or_zero(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

BoundaryData BoundaryData::constant(int n, const Eigen::VectorXd& c) {
  if (n < 3) throw DomainError("BoundaryData: dimension must be >= 3");
  if (c.size() < 1) throw DomainError("BoundaryData::constant: empty value");
  BoundaryData d;
  d.family_ = Family::Constant;
  d.n_ = n;
  d.m_ = static_cast<int>(c.size());
  d.constant_ = c;
  return d;
}

BoundaryData BoundaryData::coordinate(int n, int i) {
  if (n < 3) throw DomainError("BoundaryData: dimension must be >= 3");
  if (i < 0 || i >= n) throw DomainError("BoundaryData::coordinate: index out of range");
  BoundaryData d;
  d.family_ = Family::Coordinate;
  d.n_ = n;
  d.m_ = 1;
  d.matrix_ = Eigen::MatrixXd::Zero(1, n);
  d.matrix_(0, i) = 1.0;
  return d;
}

BoundaryData BoundaryData::signed_half(const UnitDirection& l) {
  if (l.dim() < 3) throw DomainError("BoundaryData: dimension must be >= 3");
  BoundaryData d;
  d.family_ = Family::Signed;
  d.n_ = l.dim();
  d.direction_ = l.coords();
  return d;
}

BoundaryData BoundaryData::linear(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() < 3) {
    throw DomainError("BoundaryData::linear: need a square matrix of size >= 3");
  }
  if (!A.allFinite()) throw DomainError("BoundaryData::linear: non-finite entries");
  BoundaryData d;
  d.family_ = Family::Linear;
  d.n_ = static_cast<int>(A.cols());
  d.m_ = static_cast<int>(A.rows());
  d.matrix_ = A;
  return d;
}

BoundaryData BoundaryData::cap(const UnitDirection& l, double h) {
  if (l.dim() < 3) throw DomainError("BoundaryData: dimension must be >= 3");
  if (!std::isfinite(h)) throw DomainError("BoundaryData::cap: non-finite height");
  BoundaryData d;
  d.family_ = Family::Cap;
  d.n_ = l.dim();
  d.direction_ = l.coords();
  d.height_ = h;
  return d;
}

BoundaryData BoundaryData::tabulated(const Eigen::MatrixXd& points, const Eigen::MatrixXd& values) {
  if (points.rows() < 1) throw DomainError("BoundaryData::tabulated: need at least one sample");
  if (points.cols() < 3) throw DomainError("BoundaryData: dimension must be >= 3");
  if (values.rows() != points.rows() || values.cols() < 1) {
    throw DomainError("BoundaryData::tabulated: values must have one row per sample");
  }
  // Lexicographic order on (point, value) rows gives a deterministic
  // tie-break for nearest-neighbour lookup.
  std::vector<Eigen::Index> order(points.rows());
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    }
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (values(a, j) != values(b, j)) return values(a, j) < values(b, j);
    }
    return a < b;
  };
  std::stable_sort(order.begin(), order.end(), row_less);
  BoundaryData d;
  d.family_ = Family::Tabulated;
  d.n_ = static_cast<int>(points.cols());
  d.m_ = static_cast<int>(values.cols());
  d.points_.resize(points.rows(), points.cols());
  d.values_.resize(values.rows(), values.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    d.points_.row(i) = points.row(order[i]);
    d.values_.row(i) = values.row(order[i]);
  }
  return d;
}

Eigen::VectorXd BoundaryData::value(const Eigen::VectorXd& zeta) const {
  switch (family_) {
    case Family::Constant:
      return constant_;
    case Family::Coordinate:
    case Family::Linear:
      return matrix_ * zeta;
    case Family::Signed:
      return Eigen::VectorXd::Constant(1, sign_or_zero(direction_.dot(zeta)));
    case Family::Cap:
      return Eigen::VectorXd::Constant(1, direction_.dot(zeta) > height_ ? 1.0 : 0.0);
    case Family::Tabulated: {
      Eigen::Index best = 0;
      (points_.rowwise() - zeta.transpose()).rowwise().squaredNorm().minCoeff(&best);
      return values_.row(best).transpose();
    }
  }
  return constant_;
}

double BoundaryData::sup_norm() const {
  switch (family_) {
    case Family::Constant:
      return constant_.norm();
    case Family::Coordinate:
    case Family::Linear: {
      if (m_ == 1) return matrix_.row(0).norm();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
      return svd.singularValues()(0);
    }
    case Family::Signed:
      return 1.0;
    case Family::Cap:
      return height_ < 1.0 ? 1.0 : 0.0;
    case Family::Tabulated:
      return values_.rowwise().norm().maxCoeff();
  }
  return 0.0;
}

BoundaryData BoundaryData::component(int i) const {
  if (i < 0 || i >= m_) throw DomainError("BoundaryData::component: index out of range");
  switch (family_) {
    case Family::Constant:
      return constant(n_, Eigen::VectorXd::Constant(1, constant_(i)));
    case Family::Coordinate:
    case Family::Linear: {
      BoundaryData d;
      d.family_ = m_ == 1 ? family_ : Family::Linear;
      d.n_ = n_;
      d.m_ = 1;
      d.matrix_ = matrix_.row(i);
      return d;
    }
    case Family::Signed:
    case Family::Cap:
      return *this;
    case Family::Tabulated: {
      BoundaryData d = *this;
      d.m_ = 1;
      d.values_ = values_.col(i);
      return d;
    }
  }
  return *this;
}

BoundaryData load_boundary_csv(const std::string& path, int n, std::ostream* warn) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open boundary data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("boundary data file is empty: " + path);
  const std::size_t header_cols = split_csv_line(line).size();
  if (header_cols < static_cast<std::size_t>(n) + 1) {
    throw DomainError("boundary data header must name n coordinates and at least one value");
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  int renormalized = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header_cols) {
      throw DomainError("boundary data line " + std::to_string(lineno) +
                        ": expected " + std::to_string(header_cols) + " fields");
    }
    std::vector<double> row;
    for (const auto& f : fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < f.size() && std::isspace(static_cast<unsigned char>(f[used]))) ++used;
      if (used != f.size() || f.empty() || !std::isfinite(v)) {
        throw DomainError("boundary data line " + std::to_string(lineno) +
                          ": not a finite number: '" + f + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("boundary data file has no samples: " + path);
  const int m = static_cast<int>(header_cols) - n;
  Eigen::MatrixXd points(rows.size(), n), values(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) points(i, j) = rows[i][j];
    for (int j = 0; j < m; ++j) values(i, j) = rows[i][n + j];
    const double norm = points.row(i).norm();
    if (!(norm > 0.0)) throw DomainError("boundary data: zero coordinate vector");
    if (std::abs(norm - 1.0) > 1e-6) ++renormalized;
    points.row(i) /= norm;
  }
  if (renormalized > 0 && warn) {
    *warn << "warning: renormalized " << renormalized
          << " boundary sample(s) whose coordinates deviated from the unit sphere by more than 1e-6\n";
  }
  return BoundaryData::tabulated(points, values);
}

double lp_norm(const BoundaryData& phi, double p, const SphereRule& rule) {
  check_rule(phi, rule);
  if (!(p >= 1.0)) throw DomainError("lp_norm: need p >= 1");
  if (std::isinf(p)) return phi.sup_norm();
  const int n = phi.dim();
  auto monte_carlo = [&]() {
    auto f = [&](const Eigen::VectorXd& z) { return std::pow(phi.value(z).norm(), p); };
    const std::int64_t samples = rule.kind == SphereRule::Kind::MonteCarlo
                                     ? rule.samples
                                     : SphereRule::monte_carlo(n).samples;
    return std::pow(monte_carlo_sphere(n, f, samples, rule.seed).estimate, 1.0 / p);
  };
  switch (phi.family()) {
    case BoundaryData::Family::Constant:
      return phi.constant_value().norm();
    case BoundaryData::Family::Signed:
      return 1.0;
    case BoundaryData::Family::Tabulated:
      return monte_carlo();
    default:
      break;
  }
  if (rule.kind == SphereRule::Kind::MonteCarlo) return monte_carlo();
  if (phi.family() == BoundaryData::Family::Cap) {
    const double h = phi.height();
    if (h >= 1.0) return 0.0;
    if (h <= -1.0) return 1.0;
    const double area = reduce_zonal(n, [h](double t) { return t > h ? 1.0 : 0.0; }, rule, {h});
    return std::pow(area, 1.0 / p);
  }
  // Linear families.
  const Eigen::MatrixXd& A = phi.matrix();
  if (A.rows() == 1) {
    const double a = A.norm();
    if (a == 0.0) return 0.0;
    const double mean = reduce_zonal(n, [p](double t) { return std::pow(std::abs(t), p); }, rule,
                                     {0.0});
    return a * std::pow(mean, 1.0 / p);
  }
  if (p == 2.0) return A.norm() / std::sqrt(static_cast<double>(n));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv(0) - sv(sv.size() - 1) <= 1e-14 * sv(0)) return sv(0);
  return monte_carlo();
}

MonteCarloVecEstimate poisson_extend_mc(const BoundaryData& phi, const ProblemParams& params,
                                        const BallPoint& x, std::int64_t samples,
                                        std::uint64_t seed) {
  check_point(phi, params, x);
  const double c = c_n_alpha(params);
  auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return kernel_value(params, x.coords(), z, c) * phi.value(z);
  };
  return monte_carlo_sphere_vec(phi.dim(), phi.value_dim(), f, samples, seed);
}

Eigen::VectorXd poisson_extend(const BoundaryData& phi, const ProblemParams& params,
                               const BallPoint& x, const SphereRule& rule) {
  check_point(phi, params, x);
  check_rule(phi, rule);
  if (uses_monte_carlo(phi, rule)) {
    const std::int64_t samples = rule.kind == SphereRule::Kind::MonteCarlo
                                     ? rule.samples
                                     : SphereRule::monte_carlo(rule.n).samples;
    return poisson_extend_mc(phi, params, x, samples, rule.seed).estimate;
  }
  const int n = phi.dim();
  const KernelProfile kp{params, x.norm(), c_n_alpha(params)};
  switch (phi.family()) {
    case BoundaryData::Family::Constant: {
      const double mass = reduce_zonal(n, [&](double t) { return kp.value(t); }, rule);
      return phi.constant_value() * mass;
    }
    case BoundaryData::Family::Coordinate:
    case BoundaryData::Family::Linear: {
      // integral P zeta dsigma = n_x * integral P t dsigma.
      if (kp.rho == 0.0) return Eigen::VectorXd::Zero(phi.value_dim());
      const double first = reduce_zonal(n, [&](double t) { return kp.value(t) * t; }, rule);
      return phi.matrix() * (x.coords() / kp.rho) * first;
    }
    case BoundaryData::Family::Signed:
    case BoundaryData::Family::Cap: {
      const PlaneFrame frame = plane_frame(x, phi.direction());
      const ScalarProfile prof{phi.family(), phi.height()};
      const double cg = std::cos(frame.gamma), sg = std::sin(frame.gamma);
      auto f = [&](double z1, double z2) { return kp.value(z1) * prof(z1 * cg + z2 * sg); };
      const double v = reduce_bizonal(n, f, bizonal_rule(rule),
                                      discontinuity_breaks(phi, frame.gamma),
                                      radial_discontinuity(phi));
      return Eigen::VectorXd::Constant(1, v);
    }
    case BoundaryData::Family::Tabulated:
      break;
  }
  throw NumericalFailure("poisson_extend: unsupported boundary family");
}

double JacobianMatrix::determinant() const {
  if (entries.rows() != entries.cols()) {
    throw DomainError("JacobianMatrix: determinant needs a square matrix");
  }
  return entries.determinant();
}

JacobianMatrix poisson_jacobian(const BoundaryData& phi, const ProblemParams& params,
                                const BallPoint& x, const SphereRule& rule) {
  check_point(phi, params, x);
  check_rule(phi, rule);
  const int n = phi.dim(), m = phi.value_dim();
  const double c = c_n_alpha(params);
  if (uses_monte_carlo(phi, rule)) {
    const std::int64_t samples = rule.kind == SphereRule::Kind::MonteCarlo
                                     ? rule.samples
                                     : SphereRule::monte_carlo(n).samples;
    auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      const Eigen::MatrixXd outer =
          phi.value(z) * kernel_gradient(params, x.coords(), z, c).transpose();
      return outer.reshaped();
    };
    const auto est = monte_carlo_sphere_vec(n, m * n, f, samples, rule.seed);
    return {est.estimate.reshaped(m, n)};
  }
  // grad P = -K g1 x + (n-alpha)(1-|x|^2) K zeta.
  const KernelProfile kp{params, x.norm(), c};
  const double lead = params.n_minus_alpha() * (1.0 - kp.rho * kp.rho);
  const Eigen::VectorXd nx =
      kp.rho > 0.0 ? Eigen::VectorXd(x.coords() / kp.rho) : Eigen::VectorXd::Unit(n, 0);
  auto moment = [&](auto&& weight, int k) {
    return reduce_zonal(n, [&](double t) { return weight(t) * std::pow(t, k); }, rule);
  };
  auto kg = [&](double t) { return kp.k(t) * kp.g1(t); };
  auto kk = [&](double t) { return kp.k(t); };
  switch (phi.family()) {
    case BoundaryData::Family::Constant: {
      const Eigen::VectorXd grad = -moment(kg, 0) * x.coords() + lead * moment(kk, 1) * nx;
      return {phi.constant_value() * grad.transpose()};
    }
    case BoundaryData::Family::Coordinate:
    case BoundaryData::Family::Linear: {
      const Eigen::MatrixXd& A = phi.matrix();
      const double m0 = moment(kk, 0), m2 = moment(kk, 2);
      const Eigen::MatrixXd proj = nx * nx.transpose();
      const Eigen::MatrixXd second =
          m2 * proj + (m0 - m2) / (n - 1.0) * (Eigen::MatrixXd::Identity(n, n) - proj);
      Eigen::MatrixXd du = lead * A * second;
      if (kp.rho > 0.0) du -= (A * nx) * moment(kg, 1) * x.coords().transpose();
      return {du};
    }
    case BoundaryData::Family::Signed:
    case BoundaryData::Family::Cap: {
      const PlaneFrame frame = plane_frame(x, phi.direction());
      const ScalarProfile prof{phi.family(), phi.height()};
      const double cg = std::cos(frame.gamma), sg = std::sin(frame.gamma);
      const SphereRule br = bizonal_rule(rule);
      const auto breaks = discontinuity_breaks(phi, frame.gamma);
      const auto rbreaks = radial_discontinuity(phi);
      auto integrate = [&](auto&& g) {
        return reduce_bizonal(
            n, [&](double z1, double z2) { return g(z1, z2) * prof(z1 * cg + z2 * sg); }, br,
            breaks, rbreaks);
      };
      // In the frame, t = <zeta, n_x> = z1 when x != 0.
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
      if (kp.rho > 0.0) {
        grad -= integrate([&](double z1, double) { return kg(z1); }) * x.coords();
      }
      grad += lead * integrate([&](double z1, double) { return kk(z1) * z1; }) * frame.e1;
      grad += lead * integrate([&](double z1, double z2) { return kk(z1) * z2; }) * frame.e2;
      return {grad.transpose()};
    }
    case BoundaryData::Family::Tabulated:
      break;
  }
  throw NumericalFailure("poisson_jacobian: unsupported boundary family");
}

Eigen::VectorXd alpha_laplacian_residual(const VectorField& u, const ProblemParams& params,
                                         const BallPoint& x, double h) {
  params.validate();
  const int n = x.dim();
  if (!(h > 0.0)) throw DomainError("alpha_laplacian_residual: step must be positive");
  if (!(1.0 - x.norm() > h * std::sqrt(static_cast<double>(n)))) {
    throw DomainError("alpha_laplacian_residual: point too close to the boundary for step h");
  }
  const Eigen::VectorXd& xc = x.coords();
  const Eigen::VectorXd u0 = u(xc);
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(u0.size());
  Eigen::VectorXd radial = Eigen::VectorXd::Zero(u0.size());
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = xc, xm = xc;
    xp(j) += h;
    xm(j) -= h;
    const Eigen::VectorXd up = u(xp), um = u(xm);
    lap += (up - 2.0 * u0 + um) / (h * h);
    radial += xc(j) * (up - um) / (2.0 * h);
  }
  const double om = 1.0 - xc.squaredNorm();
  const double a = params.alpha;
  return om * (om * lap - 2.0 * a * radial + a * (2.0 - n - a) * u0);
}

}  // namespace ahm
