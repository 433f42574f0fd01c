#include "ahm/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ahm/errors.hpp"
#include "ahm/hypergeom.hpp"
#include "ahm/quadrature.hpp"

namespace ahm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGradeLevels = 8;
constexpr int kMinPanelOrder = 16;

void check_dimension(int n) {
  if (n < 3) throw DomainError("sphere: dimension must be >= 3");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double zonal_normalization(int n) {
  return std::exp(std::lgamma(n / 2.0) - std::lgamma((n - 1) / 2.0)) / std::sqrt(kPi);
}

// Panel breakpoints on [lo, hi] with extra interior points, each refined
// geometrically on both sides, deduplicated.
std::vector<double> merge_breaks(std::vector<double> base, const std::vector<double>& extra,
                                 double lo, double hi) {
  for (double e : extra) {
    if (!(e > lo && e < hi)) continue;
    base.push_back(e);
    double d = 0.25 * (hi - lo);
    for (int k = 0; k < kGradeLevels; ++k, d *= 0.5) {
      if (e - d > lo) base.push_back(e - d);
      if (e + d < hi) base.push_back(e + d);
    }
  }
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             base.end());
  return base;
}

int panel_order(int total, std::size_t panels) {
  return std::max(kMinPanelOrder, static_cast<int>(total / std::max<std::size_t>(panels, 1)));
}

// Integral over theta in [-pi, pi) of g(theta).
template <typename G>
double angular_integral(const G& g, int nodes, std::vector<double> breaks) {
  if (breaks.empty()) {
    const double h = 2.0 * kPi / nodes;
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) sum += g(-kPi + h * i);
    return sum * h;
  }
  for (double& b : breaks) b = std::remainder(b, 2.0 * kPi);  // into [-pi, pi]
  breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               breaks.end());
  double sum = 0.0;
  const std::size_t k = breaks.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = breaks[i];
    const double hi = i + 1 < k ? breaks[i + 1] : breaks[0] + 2.0 * kPi;
    if (hi - lo <= 0.0) continue;
    const int order =
        std::max(kMinPanelOrder, static_cast<int>(std::ceil(nodes * (hi - lo) / (2.0 * kPi))));
    sum += gauss_panel(g, lo, hi, order);
  }
  return sum;
}

}  // namespace

SphereRule SphereRule::zonal(int n, int degree) {
  SphereRule r;
  r.kind = Kind::Zonal1D;
  r.n = n;
  r.degree = degree;
  return r;
}

SphereRule SphereRule::bizonal(int n, int radial, int angular) {
  SphereRule r;
  r.kind = Kind::Bizonal2D;
  r.n = n;
  r.degree = radial;
  r.angular = angular;
  return r;
}

SphereRule SphereRule::monte_carlo(int n, std::int64_t samples, std::uint64_t seed) {
  SphereRule r;
  r.kind = Kind::MonteCarlo;
  r.n = n;
  r.samples = samples;
  r.seed = seed;
  return r;
}

double reduce_zonal(int n, const ZonalFn& f, const SphereRule& rule,
                    const std::vector<double>& breaks) {
  check_dimension(n);
  // zeta_1 = cos(phi); the weight (1 - t^2)^{(n-3)/2} dt becomes sin^{n-2}(phi) dphi.
  std::vector<double> phi_breaks;
  for (double t : breaks) {
    if (t > -1.0 && t < 1.0) phi_breaks.push_back(std::acos(t));
  }
  const auto panels = merge_breaks(graded_breaks(0.0, kPi, kGradeLevels), phi_breaks, 0.0, kPi);
  const int order = panel_order(rule.degree, panels.size() - 1);
  auto integrand = [&](double phi) {
    return std::pow(std::sin(phi), n - 2) * f(std::cos(phi));
  };
  const double value = gauss_composite(integrand, panels, order);
  if (!std::isfinite(value)) throw NumericalFailure("reduce_zonal: non-finite quadrature value");
  return zonal_normalization(n) * value;
}

double reduce_bizonal(int n, const BizonalFn& f, const SphereRule& rule,
                      const AngularBreaks& angular_breaks,
                      const std::vector<double>& radial_breaks) {
  check_dimension(n);
  std::vector<double> u_breaks;
  for (double r : radial_breaks) {
    if (r > 0.0 && r < 1.0) u_breaks.push_back(std::asin(r));
  }
  const auto panels =
      merge_breaks(graded_breaks(0.0, kPi / 2.0, kGradeLevels), u_breaks, 0.0, kPi / 2.0);
  const int order = panel_order(rule.degree, panels.size() - 1);
  auto radial = [&](double u) {
    const double r = std::sin(u);
    const double weight = std::pow(std::cos(u), n - 3) * r;
    if (weight == 0.0) return 0.0;
    auto ring = [&](double theta) { return f(r * std::cos(theta), r * std::sin(theta)); };
    std::vector<double> breaks = angular_breaks ? angular_breaks(r) : std::vector<double>{};
    return weight * angular_integral(ring, rule.angular, std::move(breaks));
  };
  const double value = (n - 2) / (2.0 * kPi) * gauss_composite(radial, panels, order);
  if (!std::isfinite(value)) throw NumericalFailure("reduce_bizonal: non-finite quadrature value");
  return value;
}

Eigen::MatrixXd sphere_block_samples(int n, std::uint64_t seed, std::int64_t block,
                                     int count) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block))));
  std::normal_distribution<double> normal;
  Eigen::MatrixXd pts(count, n);
  for (int i = 0; i < count; ++i) {
    double norm2 = 0.0;
    do {
      for (int j = 0; j < n; ++j) pts(i, j) = normal(rng);
      norm2 = pts.row(i).squaredNorm();
    } while (norm2 == 0.0);
    pts.row(i) /= std::sqrt(norm2);
  }
  return pts;
}

MonteCarloVecEstimate monte_carlo_sphere_vec(
    int n, int m, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    std::int64_t count, std::uint64_t seed) {
  check_dimension(n);
  if (count < 2) throw DomainError("monte_carlo_sphere: need at least two samples");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(m);
  std::int64_t seen = 0;
  const std::int64_t blocks = (count + kMonteCarloBlock - 1) / kMonteCarloBlock;
  for (std::int64_t b = 0; b < blocks; ++b) {
    const int size = static_cast<int>(std::min<std::int64_t>(kMonteCarloBlock, count - b * kMonteCarloBlock));
    const Eigen::MatrixXd pts = sphere_block_samples(n, seed, b, size);
    // Welford within the block, then Chan's merge in fixed block order.
    Eigen::VectorXd bmean = Eigen::VectorXd::Zero(m), bm2 = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < size; ++i) {
      const Eigen::VectorXd v = f(pts.row(i).transpose());
      const Eigen::VectorXd delta = v - bmean;
      bmean += delta / (i + 1.0);
      bm2.array() += delta.array() * (v - bmean).array();
    }
    const double na = static_cast<double>(seen), nb = size, nt = na + nb;
    const Eigen::VectorXd delta = bmean - mean;
    mean += delta * (nb / nt);
    m2 += bm2 + (delta.array().square() * (na * nb / nt)).matrix();
    seen += size;
  }
  const double nt = static_cast<double>(seen);
  return {mean, (m2.array() / (nt - 1.0) / nt).sqrt().matrix()};
}

MonteCarloEstimate monte_carlo_sphere(int n,
                                      const std::function<double(const Eigen::VectorXd&)>& f,
                                      std::int64_t count, std::uint64_t seed) {
  auto vf = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(1);
    out(0) = f(z);
    return out;
  };
  const auto est = monte_carlo_sphere_vec(n, 1, vf, count, seed);
  return {est.estimate(0), est.std_error(0)};
}

double liu_identity(int n, double lambda, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("liu_identity: need 0 <= t < 1");
  return hyp2f1(lambda, lambda - n / 2.0 + 1.0, n / 2.0, t);
}

double liu_identity_euler(int n, double lambda, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("liu_identity: need 0 <= t < 1");
  return std::pow(1.0 - t, n - 2.0 * lambda - 1.0) *
         hyp2f1(n / 2.0 - lambda, n - lambda - 1.0, n / 2.0, t);
}

}  // namespace ahm
