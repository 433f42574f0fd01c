#include "ahm/hypergeom.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ahm {

namespace {

constexpr int kMaxTerms = 10000000;
constexpr double kNearOne = 0.999;
constexpr double kMinNearOneExcess = 0.05;

struct SeriesState {
  double sum = 1.0;
  double term = 1.0;
  int k = 0;  // index of `term`
};

// Ratio t_{k+1} / t_k without the argument factor.
double coefficient_ratio(const HypergeomSpec& spec, int k) {
  double r = 1.0 / (k + 1.0);
  for (double a : spec.upper) r *= (a + k);
  for (double b : spec.lower) r /= (b + k);
  return r;
}

// Partial sums S_K (K terms, k = 0..K-1) at s = 1 for each requested K.
std::vector<double> partial_sums_at_one(const HypergeomSpec& spec,
                                        const std::vector<int>& counts) {
  std::vector<double> out;
  out.reserve(counts.size());
  double sum = 0.0, comp = 0.0, term = 1.0;
  int next = 0;
  for (int k = 0; next < static_cast<int>(counts.size()); ++k) {
    if (k == counts[next]) {
      out.push_back(sum + comp);
      ++next;
      if (next == static_cast<int>(counts.size())) break;
    }
    // Neumaier summation; tails are long and slowly varying here.
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    term *= coefficient_ratio(spec, k);
  }
  return out;
}

// Non-terminating series at s = 1: S_K = S - sum_j d_j K^{-(e + j)}.
double sum_at_one_extrapolated(const HypergeomSpec& spec) {
  const double e = spec.excess();
  constexpr int kLevels = 6;
  std::vector<int> counts;
  for (int i = 0; i < kLevels; ++i) counts.push_back(500 << i);
  const std::vector<double> partial = partial_sums_at_one(spec, counts);

  Eigen::MatrixXd m(kLevels, kLevels);
  Eigen::VectorXd rhs(kLevels);
  for (int i = 0; i < kLevels; ++i) {
    m(i, 0) = 1.0;
    for (int j = 1; j < kLevels; ++j) {
      m(i, j) = -std::pow(static_cast<double>(counts[i]) / counts[0], -(e + j - 1));
    }
    rhs(i) = partial[i];
  }
  const Eigen::VectorXd sol = m.colPivHouseholderQr().solve(rhs);
  return sol(0);
}

}  // namespace

double pochhammer(double a, int k) {
  if (k < 0) throw DomainError("pochhammer: negative index");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= (a + i);
  return p;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "gamma_fn: argument must be positive, got " << x;
    throw DomainError(msg.str());
  }
  return std::tgamma(x);
}

double gamma_real(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("gamma_real: pole");
  return std::tgamma(x);
}

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && std::nearbyint(x) == x;
}

double HypergeomSpec::excess() const {
  return std::accumulate(lower.begin(), lower.end(), 0.0) -
         std::accumulate(upper.begin(), upper.end(), 0.0);
}

bool HypergeomSpec::terminates() const {
  for (double a : upper) {
    if (is_nonpositive_integer(a)) return true;
  }
  return false;
}

void HypergeomSpec::validate() const {
  if (upper.size() != lower.size() + 1) {
    throw DomainError("hyp_pfq: need p = q + 1 parameters");
  }
  for (double b : lower) {
    if (is_nonpositive_integer(b)) {
      throw DomainError("hyp_pfq: lower parameter is zero or a negative integer");
    }
  }
  if (!std::isfinite(argument) || std::abs(argument) > 1.0) {
    throw DomainError("hyp_pfq: argument outside [-1, 1]");
  }
  if (std::abs(argument) == 1.0 && !terminates() && !(excess() > 0.0)) {
    throw DivergenceError("hyp_pfq: non-convergent series on |s| = 1 (excess <= 0)");
  }
}

double hyp_pfq(const HypergeomSpec& spec, double tol) {
  spec.validate();
  if (!(tol > 0.0)) throw DomainError("hyp_pfq: tolerance must be positive");
  const double s = spec.argument;
  const bool terminating = spec.terminates();

  if (!terminating && s > kNearOne && s < 1.0 && spec.excess() < kMinNearOneExcess) {
    throw PrecisionError("hyp_pfq: argument too close to 1 for a slowly convergent series");
  }

  if (s == 1.0 && !terminating) return sum_at_one_extrapolated(spec);

  SeriesState st;
  int small_run = 0;
  while (st.k < kMaxTerms) {
    const double ratio = coefficient_ratio(spec, st.k) * s;
    const double next = st.term * ratio;
    if (next == 0.0) return st.sum;  // terminated (or s == 0)
    st.sum += next;
    st.term = next;
    ++st.k;

    const double scale = tol * (1.0 + std::abs(st.sum));
    small_run = std::abs(next) <= scale ? small_run + 1 : 0;
    if (small_run >= 3) {
      const double ahead = std::abs(coefficient_ratio(spec, st.k) * s);
      double tail;
      if (coefficient_ratio(spec, st.k) * s < 0.0) {
        tail = std::abs(next) * ahead;
      } else {
        const double rho = std::max(ahead, std::abs(s));
        tail = rho < 1.0 ? std::abs(next) * rho / (1.0 - rho)
                         : std::numeric_limits<double>::infinity();
      }
      if (tail <= scale) return st.sum;
    }
  }
  throw DivergenceError("hyp_pfq: term cap reached before convergence");
}

double hyp2f1(double a, double b, double c, double s, double tol) {
  return hyp_pfq(HypergeomSpec{{a, b}, {c}, s}, tol);
}

double hyp3f2(double a1, double a2, double a3, double b1, double b2, double s,
              double tol) {
  return hyp_pfq(HypergeomSpec{{a1, a2, a3}, {b1, b2}, s}, tol);
}

double two_f_one_at_one(double a, double b, double c) {
  HypergeomSpec spec{{a, b}, {c}, 1.0};
  if (spec.terminates()) return hyp_pfq(spec);
  spec.validate();
  const double excess = c - a - b;
  for (double x : {c - a, c - b}) {
    if (is_nonpositive_integer(x)) return 0.0;  // 1/Gamma vanishes at poles
  }
  auto sign = [](double x) {
    return x > 0.0 || static_cast<long long>(std::floor(x)) % 2 == 0 ? 1.0 : -1.0;
  };
  const double lg = std::lgamma(c) + std::lgamma(excess) - std::lgamma(c - a) -
                    std::lgamma(c - b);
  return sign(c) * sign(c - a) * sign(c - b) * std::exp(lg);
}

}  // namespace ahm
