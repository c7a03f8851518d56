#pragma once

// Quadrature primitives shared by the geometry and bound computations:
// uniform trapezoid on periodic smooth integrands (spectrally accurate),
// Gauss-Legendre rules built at runtime, and composite panels for
// semi-infinite integrals with exponential decay.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace robinext {

struct GaussRule {
  std::vector<double> node;    // on [-1, 1]
  std::vector<double> weight;
};

// Legendre roots by Newton from the Chebyshev-angle starting guess.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussRule g;
  g.node.resize(n);
  g.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        break;
      }
    }
    g.node[i] = x;
    g.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

template <class F>
double integrate(F&& f, double a, double b, const GaussRule& g) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.node.size(); ++i)
    s += g.weight[i] * f(mid + half * g.node[i]);
  return half * s;
}

// Trapezoid over one period of a smooth 2*pi-periodic integrand.
template <class F>
double integrate_periodic(F&& f, int n) {
  if (n < 4) throw std::invalid_argument("integrate_periodic: grid too small");
  const double h = 2.0 * std::numbers::pi / n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += f(h * j);
  return h * s;
}

// int_a^inf f(r) dr for f with an e^{-rate (r-a)} envelope: fixed-width
// Gauss-Legendre panels marched right until both the running contribution is
// negligible and the envelope bound is exhausted.
template <class F>
double integrate_decaying(F&& f, double a, double rate, double rel_tol = 1e-14) {
  if (!(rate > 0.0))
    throw std::invalid_argument("integrate_decaying: decay rate must be positive");
  static const GaussRule g = gauss_legendre(24);
  const double w = std::min(1.0, 6.0 / rate);
  double total = 0.0;
  double lo = a;
  for (int panel = 0; panel < 20000; ++panel) {
    const double part = integrate(f, lo, lo + w, g);
    total += part;
    lo += w;
    if (rate * (lo - a) > 40.0 && std::abs(part) <= rel_tol * std::abs(total))
      return total;
    if (rate * (lo - a) > 1500.0) return total;  // envelope below double range
  }
  return total;
}

}  // namespace robinext
