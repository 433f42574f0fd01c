#include "ahm/sharp_bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "ahm/errors.hpp"
#include "ahm/hypergeom.hpp"
#include "ahm/quadrature.hpp"

namespace ahm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScriptPanelOrder = 24;
constexpr int kScriptGradeLevels = 12;
constexpr int kThetaGrid = 4096;

void check_t(double t, const char* who) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError(std::string(who) + ": need 0 <= |x| < 1");
}

void check_q(double q, const char* who) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw DomainError(std::string(who) + ": need finite q >= 1");
  }
}

double parse_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw DomainError(std::string("cannot parse ") + what + ": '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& text, const char* what) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw DomainError(std::string("cannot parse ") + what + ": '" + text + "'");
  }
  return v;
}

// Breakpoints on [-pi, pi] refined geometrically around each singular point.
std::vector<double> script_breaks(const std::vector<double>& singular) {
  std::vector<double> b{-kPi, kPi};
  for (double s : singular) {
    s = std::remainder(s, 2.0 * kPi);
    b.push_back(s);
    double d = kPi / 2.0;
    for (int k = 0; k < kScriptGradeLevels; ++k) {
      d *= 0.5;
      for (double v : {s - d, s + d}) {
        // Map back into [-pi, pi]; the integrand is 2 pi periodic.
        b.push_back(std::remainder(v, 2.0 * kPi));
      }
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }),
          b.end());
  return b;
}

double sweep_beta(int i, int points, double hi) {
  return points == 1 ? 0.0 : hi * i / (points - 1.0);
}

DirectionSweep finish_sweep(DirectionSweep s, double flat_tol) {
  const auto it = std::max_element(s.values.begin(), s.values.end());
  s.argmax = static_cast<std::size_t>(it - s.values.begin());
  s.max_value = *it;
  const double lo = *std::min_element(s.values.begin(), s.values.end());
  if (s.max_value - lo <= flat_tol * std::abs(s.max_value)) {
    s.maximizer = Maximizer::Any;
  } else if (s.argmax == 0) {
    s.maximizer = Maximizer::Radial;
  } else if (s.argmax + 1 == s.values.size()) {
    s.maximizer = Maximizer::Tangential;
  }
  return s;
}

}  // namespace

ExponentPair ExponentPair::from_p(double p) {
  if (!(p >= 1.0)) throw DomainError("ExponentPair: need p >= 1");
  ExponentPair e;
  e.p = p;
  if (std::isinf(p)) {
    e.q = 1.0;
  } else if (p == 1.0) {
    e.q = std::numeric_limits<double>::infinity();
  } else {
    e.q = p / (p - 1.0);
  }
  return e;
}

ExponentPair ExponentPair::from_q(double q) {
  if (!(q >= 1.0)) throw DomainError("ExponentPair: need q >= 1");
  ExponentPair e;
  e.q = q;
  if (std::isinf(q)) {
    e.p = 1.0;
  } else if (q == 1.0) {
    e.p = std::numeric_limits<double>::infinity();
  } else {
    e.p = q / (q - 1.0);
  }
  return e;
}

ExponentPair ExponentPair::from_q_ratio(long num, long den) {
  if (den <= 0 || num < den) throw DomainError("ExponentPair: need q = a/b >= 1 with b > 0");
  ExponentPair e = from_q(static_cast<double>(num) / static_cast<double>(den));
  e.q_ratio = std::make_pair(num, den);
  return e;
}

ExponentPair ExponentPair::parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity") return from_q(std::numeric_limits<double>::infinity());
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return from_q_ratio(parse_long(text.substr(0, slash), "q numerator"),
                        parse_long(text.substr(slash + 1), "q denominator"));
  }
  return from_q(parse_double(text, "q"));
}

ExponentPair ExponentPair::parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return from_p(std::numeric_limits<double>::infinity());
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const long a = parse_long(text.substr(0, slash), "p numerator");
    const long b = parse_long(text.substr(slash + 1), "p denominator");
    if (b <= 0 || a < b) throw DomainError("ExponentPair: need p = a/b >= 1 with b > 0");
    // q = a / (a - b) exactly.
    if (a == b) return from_p(1.0);
    return from_q_ratio(a, a - b);
  }
  return from_p(parse_double(text, "p"));
}

const char* to_string(RegimeCase c) {
  switch (c) {
    case RegimeCase::LowerThreshold:
      return "lower_threshold";
    case RegimeCase::UpperThreshold:
      return "upper_threshold";
    case RegimeCase::Between:
      return "between";
    case RegimeCase::Outside:
      return "outside";
  }
  return "?";
}

const char* to_string(Maximizer m) {
  switch (m) {
    case Maximizer::Any:
      return "any";
    case Maximizer::Tangential:
      return "tangential";
    case Maximizer::Radial:
      return "radial";
  }
  return "?";
}

QThresholds q_thresholds(const ProblemParams& p) {
  return {(2.0 * p.n - 2.0) / p.n_minus_alpha(), 2.0 * p.n / p.n_minus_alpha()};
}

namespace {

// q = num/den compared with (2n-2)/(n-alpha) and 2n/(n-alpha) after
// clearing denominators.
RegimeTag classify_cross(const ProblemParams& p, double num, double den) {
  const double lhs = num * p.n_minus_alpha();
  const double lo = den * (2.0 * p.n - 2.0), hi = den * 2.0 * p.n;
  if (std::abs(lhs - lo) <= kThresholdTol * lo) return {RegimeCase::LowerThreshold, Maximizer::Any};
  if (std::abs(lhs - hi) <= kThresholdTol * hi) return {RegimeCase::UpperThreshold, Maximizer::Any};
  if (lhs > lo && lhs < hi) return {RegimeCase::Between, Maximizer::Tangential};
  return {RegimeCase::Outside, Maximizer::Radial};
}

}  // namespace

RegimeTag classify_regime(const ProblemParams& params, double q) {
  check_q(q, "classify_regime");
  return classify_cross(params, q, 1.0);
}

RegimeTag classify_regime(const ProblemParams& params, const ExponentPair& pair) {
  if (pair.q_ratio) {
    return classify_cross(params, static_cast<double>(pair.q_ratio->first),
                          static_cast<double>(pair.q_ratio->second));
  }
  return classify_regime(params, pair.q);
}

double I_exponent(const ProblemParams& p, double q) { return p.n_minus_alpha() * q / 2.0 - p.n + 1.0; }

double base_factor(int n, double q) {
  return std::exp(std::lgamma(n / 2.0) + std::lgamma((q + 1.0) / 2.0) -
                  std::lgamma((n + q) / 2.0)) /
         std::sqrt(kPi);
}

double J_term(const ProblemParams& p, double q, double t) {
  check_q(q, "J_term");
  check_t(t, "J_term");
  const double k = std::abs(p.hyperbolic_offset()) / p.n_minus_alpha();
  if (t == 0.0 || k == 0.0) return 0.0;
  const double nma = p.n_minus_alpha();
  return q * t * k * std::pow(1.0 + k * t, q - 1.0) *
         hyp2f1(p.n - 1.0 - q * nma / 2.0, (p.n - q * nma) / 2.0, p.n / 2.0, t * t);
}

double I_bruteforce(const ProblemParams& p, double q, const BallPoint& x, const UnitDirection& l,
                    const SphereRule& rule) {
  check_q(q, "I_bruteforce");
  if (x.dim() != p.n || l.dim() != p.n) throw DomainError("I_bruteforce: dimension mismatch");
  const double a = I_exponent(p, q);
  if (rule.kind == SphereRule::Kind::MonteCarlo) {
    auto f = [&](const Eigen::VectorXd& eta) {
      return std::pow((eta - x.coords()).squaredNorm(), a) * std::pow(std::abs(eta.dot(l.coords())), q);
    };
    return monte_carlo_sphere(p.n, f, rule.samples, rule.seed).estimate;
  }
  const double rho = x.norm();
  // Frame: e1 = n_x (or l at the origin), l = cos(beta) e1 + sin(beta) e2.
  const Eigen::VectorXd e1 = rho > 0.0 ? Eigen::VectorXd(x.coords() / rho) : l.coords();
  const double cb = std::clamp(l.coords().dot(e1), -1.0, 1.0);
  const double beta = std::acos(cb), sb = std::sin(beta);
  auto f = [&](double z1, double z2) {
    const double d2 = std::max(1.0 + rho * rho - 2.0 * rho * z1, 0.0);
    return std::pow(d2, a) * std::pow(std::abs(z1 * cb + z2 * sb), q);
  };
  auto breaks = [beta](double) { return std::vector<double>{beta - kPi / 2.0, beta + kPi / 2.0}; };
  return reduce_bizonal(p.n, f, SphereRule::bizonal(p.n, rule.degree, rule.angular), breaks);
}

double script_I(double A, double B, double a, double b, double beta) {
  if (!(B >= 0.0 && B < A)) throw DomainError("script_I: need 0 <= B < A");
  if (!(b > 0.0)) throw DomainError("script_I: need b > 0");
  const auto breaks = script_breaks({0.0, beta - kPi / 2.0, beta + kPi / 2.0});
  auto f = [&](double th) {
    return std::pow(A - B * std::cos(th), a) * std::pow(std::abs(std::cos(th - beta)), b);
  };
  return gauss_composite(f, breaks, kScriptPanelOrder);
}

double script_J(const ProblemParams& p, double beta, double q, double r, double s) {
  check_t(r, "script_J");
  check_t(s, "script_J");
  return script_I(1.0 + s * s, 2.0 * r * s, I_exponent(p, q), q, beta);
}

double I_reduced(const ProblemParams& p, double q, double t, double beta, int radial_degree) {
  check_q(q, "I_reduced");
  check_t(t, "I_reduced");
  // r = sin u on [0, pi/2].
  const auto panels = graded_breaks(0.0, kPi / 2.0, 8);
  const int order = std::max(16, radial_degree / static_cast<int>(panels.size() - 1));
  auto integrand = [&](double u) {
    const double r = std::sin(u);
    const double w = std::pow(std::cos(u), p.n - 3) * std::pow(r, q + 1.0);
    if (w == 0.0) return 0.0;
    return w * script_J(p, beta, q, r, t);
  };
  return (p.n - 2.0) / (2.0 * kPi) * gauss_composite(integrand, panels, order);
}

SupI sup_I_closed(const ProblemParams& p, const ExponentPair& pair, double t) {
  check_q(pair.q, "sup_I_closed");
  check_t(t, "sup_I_closed");
  const RegimeTag tag = classify_regime(p, pair);
  const double q = pair.q, n = p.n, nma = p.n_minus_alpha();
  const double B = base_factor(p.n, q);
  double v = 0.0;
  switch (tag.regime) {
    case RegimeCase::LowerThreshold:
      v = B;
      break;
    case RegimeCase::UpperThreshold:
      v = B * (1.0 + t * t);
      break;
    case RegimeCase::Between:
      v = B * hyp2f1(n - 1.0 - nma * q / 2.0, (n - (n + 1.0 - p.alpha) * q) / 2.0, (q + n) / 2.0,
                     t * t);
      break;
    case RegimeCase::Outside: {
      const double a = I_exponent(p, q);
      const double s = 4.0 * t * t / ((1.0 + t * t) * (1.0 + t * t));
      v = std::pow(1.0 + t * t, a) * B *
          hyp3f2((2.0 * n - 2.0 - nma * q) / 4.0, (2.0 * n - nma * q) / 4.0, (q + 1.0) / 2.0, 0.5,
                 (q + n) / 2.0, s);
      break;
    }
  }
  return {BoundValue::point(v), tag};
}

SupI sup_I_closed(const ProblemParams& params, double q, double t) {
  return sup_I_closed(params, ExponentPair::from_q(q), t);
}

BoundValue sup_I_global(const ProblemParams& p, double q) {
  const RegimeTag tag = classify_regime(p, q);
  const double n = p.n, nma = p.n_minus_alpha();
  const double B = base_factor(p.n, q);
  switch (tag.regime) {
    case RegimeCase::LowerThreshold:
    case RegimeCase::UpperThreshold:
      throw DomainError("sup_I_global: q lies on a regime threshold");
    case RegimeCase::Between:
      return BoundValue::point(
          B * two_f_one_at_one(n - 1.0 - nma * q / 2.0, (n - (n + 1.0 - p.alpha) * q) / 2.0,
                               (q + n) / 2.0));
    case RegimeCase::Outside:
      return BoundValue::point(std::pow(2.0, I_exponent(p, q)) * B *
                               hyp3f2((2.0 * n - 2.0 - nma * q) / 4.0, (2.0 * n - nma * q) / 4.0,
                                      (q + 1.0) / 2.0, 0.5, (q + n) / 2.0, 1.0));
  }
  throw NumericalFailure("sup_I_global: unknown regime");
}

double thm11_coefficient(const ProblemParams& p, double q, double t) {
  check_q(q, "thm11_coefficient");
  check_t(t, "thm11_coefficient");
  const double sup = sup_I_closed(p, q, t).value.value();
  const double j = J_term(p, q, t);
  return p.n_minus_alpha() * c_n_alpha(p) *
         std::pow(1.0 - t * t, -(p.n * (q - 1.0) + 1.0) / q) * std::pow(sup + j, 1.0 / q);
}

double thm11_coefficient(const ProblemParams& p, const ExponentPair& pair, const BallPoint& x) {
  if (!std::isfinite(pair.q)) throw DomainError("thm11_coefficient: needs p > 1 (finite q)");
  const double t = x.norm();
  const double sup = sup_I_closed(p, pair, t).value.value();
  const double q = pair.q;
  const double j = J_term(p, q, t);
  return p.n_minus_alpha() * c_n_alpha(p) *
         std::pow(1.0 - t * t, -(p.n * (q - 1.0) + 1.0) / q) * std::pow(sup + j, 1.0 / q);
}

double c_infty_direction(const ProblemParams& p, double rho, double beta) {
  check_t(rho, "c_infty_direction");
  const double a = p.alpha, n = p.n, nma = p.n_minus_alpha();
  const double P = (2.0 - 3.0 * a + n) * rho + (2.0 - a - n) * rho * rho * rho;
  const double Q = a - n + (-4.0 + 3.0 * a + n) * rho * rho;
  const double tang = nma * (1.0 - rho * rho) * std::sin(beta);
  const double cb = std::cos(beta);
  const double power = nma / 2.0 + 1.0;
  double best = 0.0;
  for (double sign : {1.0, -1.0}) {
    auto f = [&](double th) {
      const double num = std::abs(tang * std::sin(th) + sign * (P + Q * std::cos(th)) * cb);
      return num / std::pow(1.0 + rho * rho - 2.0 * rho * std::cos(th), power);
    };
    const double h = 2.0 * kPi / kThetaGrid;
    int arg = 0;
    double grid_best = -1.0;
    for (int i = 0; i <= kThetaGrid; ++i) {
      const double v = f(h * i);
      if (v > grid_best) {
        grid_best = v;
        arg = i;
      }
    }
    const double th = golden_section_max(f, h * (arg - 1), h * (arg + 1), 1e-12);
    best = std::max({best, grid_best, f(th)});
  }
  return c_n_alpha(p) * std::pow(1.0 - rho * rho, -a) * best;
}

double c_infty_direction(const ProblemParams& p, const BallPoint& x, const UnitDirection& l) {
  if (x.dim() != p.n || l.dim() != p.n) throw DomainError("c_infty_direction: dimension mismatch");
  const double rho = x.norm();
  const double cb = rho > 0.0 ? std::clamp(x.coords().dot(l.coords()) / rho, -1.0, 1.0) : 1.0;
  return c_infty_direction(p, rho, std::acos(cb));
}

BoundValue c_infty_sup_uncorrected(const ProblemParams& p, double t) {
  check_t(t, "c_infty_sup");
  const double c = c_n_alpha(p), nma = p.n_minus_alpha(), k = p.n + p.alpha - 2.0;
  const double denom = std::pow(1.0 - t, p.n);
  const double first = c * (nma + k * t) / denom;
  if (p.alpha >= 2.0 - p.n) return BoundValue::point(first, true);
  return {first, c * (nma - k * t) / denom, false};
}

BoundValue c_infty_sup(const ProblemParams& p, double t) {
  BoundValue v = c_infty_sup_uncorrected(p, t);
  const double factor = std::pow(1.0 + t, -p.alpha);
  v.lower *= factor;
  v.upper *= factor;
  return v;
}

double thm12_coefficient(const ProblemParams& p, double t) {
  const BoundValue v = c_infty_sup(p, t);
  return v.upper;
}

double K_alpha(const ProblemParams& p, double rho, double t) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("K_alpha: need 0 < rho < 1");
  if (!(t >= -1.0 && t <= 1.0)) throw DomainError("K_alpha: need -1 <= t <= 1");
  const double a = p.alpha, n = p.n, r2 = rho * rho;
  const double num = (n - a) * (n - a) + 2.0 * (2.0 - 3.0 * a * (2.0 - a) - (n - 2.0) * n) * r2 +
                     (n + a - 2.0) * (n + a - 2.0) * r2 * r2 -
                     4.0 * (1.0 - a) * rho * (n - a + (2.0 - a - n) * r2) * t;
  return num / (1.0 + r2 - 2.0 * rho * t);
}

DirectionSweep sweep_I(const ProblemParams& p, double q, double t, int points,
                       const SphereRule& rule, double flat_tol) {
  if (points < 2) throw DomainError("sweep_I: need at least two points");
  const BallPoint x = BallPoint::on_axis(p.n, t);
  DirectionSweep s;
  for (int i = 0; i < points; ++i) {
    const double beta = sweep_beta(i, points, kPi / 2.0);
    s.betas.push_back(beta);
    s.values.push_back(I_bruteforce(p, q, x, UnitDirection::in_plane(p.n, beta), rule));
  }
  return finish_sweep(std::move(s), flat_tol);
}

DirectionSweep sweep_c_infty(const ProblemParams& p, double t, int points) {
  if (points < 2) throw DomainError("sweep_c_infty: need at least two points");
  DirectionSweep s;
  for (int i = 0; i < points; ++i) {
    const double beta = sweep_beta(i, points, kPi);
    s.betas.push_back(beta);
    s.values.push_back(c_infty_direction(p, t, beta));
  }
  s = finish_sweep(std::move(s), 1e-12);
  // l and -l give the same constant, so both ends of [0, pi] are radial.
  if (s.maximizer == Maximizer::Tangential) s.maximizer = Maximizer::Radial;
  if (!s.maximizer && 2 * s.argmax + 1 == s.values.size()) s.maximizer = Maximizer::Tangential;
  return s;
}

}  // namespace ahm
