#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ahm {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached Gauss-Legendre rule of the given degree (Newton iteration on P_n).
const GaussRule& gauss_legendre(int degree);

/// Integral of f over [lo, hi] with one Gauss-Legendre panel.
template <typename F>
double gauss_panel(F&& f, double lo, double hi, int degree) {
  const GaussRule& g = gauss_legendre(degree);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sum += g.weights[i] * f(mid + half * g.nodes[i]);
  }
  return sum * half;
}

/// Sum of Gauss-Legendre panels over consecutive breakpoints.
template <typename F>
double gauss_composite(F&& f, std::span<const double> breaks, int degree) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) sum += gauss_panel(f, breaks[i], breaks[i + 1], degree);
  }
  return sum;
}

/// Breakpoints on [lo, hi] refined geometrically toward both ends
/// (`levels` halvings per side). Returned sorted, endpoints included.
std::vector<double> graded_breaks(double lo, double hi, int levels);

/// Argmax of a unimodal function on [lo, hi] by golden-section search.
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace ahm
