#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ahm/kernel.hpp"
#include "ahm/sphere.hpp"

namespace ahm {

/// Hoelder-conjugate exponents, 1/p + 1/q = 1.
struct ExponentPair {
  double p = std::numeric_limits<double>::infinity();
  double q = 1.0;
  /// Set when q was entered as an exact ratio num/den.
  std::optional<std::pair<long, long>> q_ratio;

  static ExponentPair from_p(double p);
  static ExponentPair from_q(double q);
  static ExponentPair from_q_ratio(long num, long den);
  /// Accepts "a/b", a decimal, or "inf".
  static ExponentPair parse_q(const std::string& text);
  static ExponentPair parse_p(const std::string& text);
};

enum class RegimeCase { LowerThreshold, UpperThreshold, Between, Outside };
enum class Maximizer { Any, Tangential, Radial };

struct RegimeTag {
  RegimeCase regime = RegimeCase::LowerThreshold;
  Maximizer maximizer = Maximizer::Any;
};

const char* to_string(RegimeCase c);
const char* to_string(Maximizer m);

/// A value, or an interval [lower, upper] when only a sandwich is known.
struct BoundValue {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = true;

  static BoundValue point(double v, bool exact = true) { return {v, v, exact}; }
  bool is_interval() const { return lower != upper; }
  double value() const { return upper; }
};

/// (2n-2)/(n-alpha) and 2n/(n-alpha).
struct QThresholds {
  double lower = 0.0;
  double upper = 0.0;
};
QThresholds q_thresholds(const ProblemParams& params);

/// Relative tolerance for snapping q onto a threshold.
inline constexpr double kThresholdTol = 1e-12;

RegimeTag classify_regime(const ProblemParams& params, double q);
/// Uses the exact ratio when available.
RegimeTag classify_regime(const ProblemParams& params, const ExponentPair& pair);

/// (n-alpha) q / 2 - n + 1, half the exponent of |eta - x| in I.
double I_exponent(const ProblemParams& params, double q);

/// Gamma(n/2) Gamma((q+1)/2) / (sqrt(pi) Gamma((n+q)/2)) = integral |zeta_1|^q.
double base_factor(int n, double q);

/// q t k (1 + k t)^{q-1} 2F1(n-1-q(n-alpha)/2, (n-q(n-alpha))/2; n/2; t^2),
/// k = |2-alpha-n|/(n-alpha).
double J_term(const ProblemParams& params, double q, double t);

/// integral |eta - x|^{(n-alpha)q-2n+2} |<eta, l>|^q dsigma(eta) by quadrature
/// in the plane span(n_x, l).
double I_bruteforce(const ProblemParams& params, double q, const BallPoint& x,
                    const UnitDirection& l, const SphereRule& rule);

/// The same integral through the radial integral of script_J (t = |x|,
/// beta the angle between n_x and l).
double I_reduced(const ProblemParams& params, double q, double t, double beta,
                 int radial_degree = 256);

/// integral_{-pi}^{pi} (A - B cos theta)^a |cos(theta - beta)|^b dtheta.
double script_I(double A, double B, double a, double b, double beta);

/// script_I(1 + s^2, 2rs; (n-alpha)q/2 - n + 1, q; beta).
double script_J(const ProblemParams& params, double beta, double q, double r, double s);

struct SupI {
  BoundValue value;
  RegimeTag tag;
};

/// Closed form of sup_l I(alpha, q, x, l) at |x| = t.
SupI sup_I_closed(const ProblemParams& params, double q, double t);
SupI sup_I_closed(const ProblemParams& params, const ExponentPair& pair, double t);

/// sup over x and l; refuses threshold q (DomainError).
BoundValue sup_I_global(const ProblemParams& params, double q);

/// L^p gradient coefficient: sup |grad u(x)| per unit L^p norm bound.
double thm11_coefficient(const ProblemParams& params, const ExponentPair& pair,
                         const BallPoint& x);
double thm11_coefficient(const ProblemParams& params, double q, double t);

/// sup_zeta |<grad P(x, zeta), l>|.
double c_infty_direction(const ProblemParams& params, const BallPoint& x,
                         const UnitDirection& l);
/// Same quantity with x = t e_1 and l = cos(beta) e_1 + sin(beta) e_2.
double c_infty_direction(const ProblemParams& params, double t, double beta);

/// sup_l c_infty_direction at |x| = t. Exact for alpha >= 2-n, a sandwich
/// otherwise. Both carry the factor (1+t)^{-alpha}.
BoundValue c_infty_sup(const ProblemParams& params, double t);
/// The same expressions without the (1+t)^{-alpha} factor.
BoundValue c_infty_sup_uncorrected(const ProblemParams& params, double t);

/// L^1 gradient coefficient (p = 1, q = infinity), with the (1+t)^{-alpha} factor.
double thm12_coefficient(const ProblemParams& params, double t);

/// The rational function K_alpha(t) at radius rho.
double K_alpha(const ProblemParams& params, double rho, double t);

struct DirectionSweep {
  std::vector<double> betas;
  std::vector<double> values;
  double max_value = 0.0;
  std::size_t argmax = 0;
  /// Classification of the sweep: Any if the relative spread is below
  /// `flat_tol`, else Radial/Tangential by the argmax end, else nullopt.
  std::optional<Maximizer> maximizer;
};

/// I_bruteforce at `points` equally spaced beta in [0, pi/2], x = t e_1.
DirectionSweep sweep_I(const ProblemParams& params, double q, double t, int points,
                       const SphereRule& rule, double flat_tol = 1e-9);

/// c_infty_direction at `points` equally spaced beta in [0, pi].
DirectionSweep sweep_c_infty(const ProblemParams& params, double t, int points);

}  // namespace ahm
