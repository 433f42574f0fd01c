#pragma once

#include <vector>

#include "ahm/errors.hpp"

namespace ahm {

/// Rising factorial (a)_k. (0)_0 is taken to be 1.
double pochhammer(double a, int k);

/// Gamma function for positive arguments; throws DomainError otherwise.
double gamma_fn(double x);

/// Gamma function on the whole real line minus the poles (internal use by
/// closed forms whose Gamma arguments may be negative).
double gamma_real(double x);

/// True if x is a non-positive integer (0, -1, -2, ...).
bool is_nonpositive_integer(double x);

/// Parameters of a generalized hypergeometric series with p = q + 1.
struct HypergeomSpec {
  std::vector<double> upper;
  std::vector<double> lower;
  double argument = 0.0;

  /// sum(lower) - sum(upper); positivity gives absolute convergence on [-1, 1].
  double excess() const;
  /// Some upper parameter is a non-positive integer.
  bool terminates() const;
  /// Throws DomainError / DivergenceError if the spec is not admissible.
  void validate() const;
};

inline constexpr double kDefaultSeriesTol = 1e-15;

/// Sum of the series  sum_k prod (a_i)_k / prod (b_j)_k * s^k / k!.
///
/// Summation stops once |term| <= tol (1 + |sum|) for three consecutive
/// terms and the ratio-based tail estimate is below the same threshold, or
/// when the series terminates. At s = 1 a non-terminating series is summed
/// by Richardson extrapolation in the known algebraic tail exponents. For
/// 0.999 < s < 1 with excess below 0.05 the evaluation is refused
/// (PrecisionError).
double hyp_pfq(const HypergeomSpec& spec, double tol = kDefaultSeriesTol);

/// Convenience wrappers.
double hyp2f1(double a, double b, double c, double s, double tol = kDefaultSeriesTol);
double hyp3f2(double a1, double a2, double a3, double b1, double b2, double s,
              double tol = kDefaultSeriesTol);

/// Gauss summation 2F1(a, b; c; 1) = G(c)G(c-a-b) / (G(c-a)G(c-b)).
/// Terminating series are summed exactly.
double two_f_one_at_one(double a, double b, double c);

}  // namespace ahm
