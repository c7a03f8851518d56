#pragma once

// Scalar root finding on (0, inf) for the transcendental eigenvalue
// equations: geometric bracket expansion from a seed, bisection to a relative
// width, then a short safeguarded Newton polish confined to the bracket.
// Monotonicity of the target function is never assumed.

#include <cmath>
#include <stdexcept>
#include <string>

namespace robinext {

struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bracket {
  double lo;
  double hi;
};

// Expands geometrically from x0 > 0 until f changes sign.  The downward
// search stops at 1e-300: a sign that persists down there means the root
// sits below double range, and the caller gets a NoRootError either way.
template <class F>
Bracket bracket_root(F&& f, double x0, int max_steps = 240) {
  if (!(x0 > 0.0)) throw std::invalid_argument("bracket_root: seed must be positive");
  double a = x0;
  double fa = f(a);
  if (fa == 0.0) return {a, a};
  if (fa < 0.0) {
    double b = a;
    for (int i = 0; i < max_steps; ++i) {
      const double c = 2.0 * b;
      if (!(f(c) < 0.0)) return {b, c};
      b = c;
    }
    throw NoRootError("bracket_root: no sign change during upward expansion");
  }
  double b = a;
  for (int i = 0; i < max_steps; ++i) {
    const double c = 0.5 * b;
    if (c < 1e-300)
      throw NoRootError("bracket_root: root below representable range");
    if (!(f(c) > 0.0)) return {c, b};
    b = c;
  }
  throw NoRootError("bracket_root: no sign change during downward expansion");
}

// Bisection on a sign-changing bracket to relative width rel_tol.
template <class F>
Bracket bisect(F&& f, Bracket b, double rel_tol = 1e-13) {
  double flo = f(b.lo);
  if (flo == 0.0) return {b.lo, b.lo};
  for (int i = 0; i < 2000; ++i) {
    if (b.hi - b.lo <= rel_tol * std::abs(b.hi)) break;
    const double m = 0.5 * (b.lo + b.hi);
    if (m <= b.lo || m >= b.hi) break;
    const double fm = f(m);
    if (fm == 0.0) return {m, m};
    if ((flo < 0.0) == (fm < 0.0)) {
      b.lo = m;
      flo = fm;
    } else {
      b.hi = m;
    }
  }
  return b;
}

// Newton steps started from the bracket midpoint; any step that leaves the
// bracket or fails to evaluate falls back to that midpoint.
template <class F, class DF>
double polish_newton(F&& f, DF&& df, Bracket b, int steps = 2) {
  double x = 0.5 * (b.lo + b.hi);
  for (int i = 0; i < steps; ++i) {
    const double d = df(x);
    const double fx = f(x);
    double next = x - fx / d;
    if (!std::isfinite(next) || next <= b.lo || next >= b.hi)
      next = 0.5 * (b.lo + b.hi);
    x = next;
  }
  return x;
}

template <class F, class DF>
double find_root(F&& f, DF&& df, double x0, double rel_tol = 1e-13) {
  Bracket b = bracket_root(f, x0);
  if (b.lo == b.hi) return b.lo;
  b = bisect(f, b, rel_tol);
  if (b.lo == b.hi) return b.lo;
  return polish_newton(f, df, b);
}

}  // namespace robinext
