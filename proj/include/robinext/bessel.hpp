#pragma once

// Modified Bessel functions of the second kind K0, K1 (and K_n by upward
// recurrence), with exponentially scaled variants e^x K_n(x).
//
// Accuracy: relative error <= 1e-12 on x in [1e-6, 700] for both scaled and
// unscaled values.  For larger x the unscaled value decays like e^-x; once it
// drops below the smallest normal double it is flushed to zero, and callers
// that need the tail must use the scaled variants.
//
// Method: ascending series with the logarithmic term for x <= 2; Chebyshev
// expansions of e^x sqrt(x) K_n(x) for x > 2 (tables in detail/bessel_coeffs.hpp).

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "robinext/detail/bessel_coeffs.hpp"

namespace robinext {

struct BesselEval {
  double value;         // K_n(x), 0 if flushed on underflow
  double scaled_value;  // e^x K_n(x), always representable
  double x;
};

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;

inline void require_positive(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
}

// f(t) = c[0]/2 + sum_{k>=1} c[k] T_k(t) by Clenshaw.
template <std::size_t N>
inline double cheb_eval(const double (&c)[N], double t) {
  double b0 = 0.0, b1 = 0.0;
  for (std::size_t k = N; k-- > 1;) {
    const double b2 = b1;
    b1 = b0;
    b0 = 2.0 * t * b1 - b2 + c[k];
  }
  return t * b0 - b1 + 0.5 * c[0];
}

// e^x K0(x) for x > 2.
inline double k0_scaled_large(double x) {
  const double f = (x <= 8.0) ? cheb_eval(k0_cheb_mid, (16.0 / x - 5.0) / 3.0)
                              : cheb_eval(k0_cheb_tail, 16.0 / x - 1.0);
  return f / std::sqrt(x);
}

// e^x K1(x) for x > 2.
inline double k1_scaled_large(double x) {
  const double f = (x <= 8.0) ? cheb_eval(k1_cheb_mid, (16.0 / x - 5.0) / 3.0)
                              : cheb_eval(k1_cheb_tail, 16.0 / x - 1.0);
  return f / std::sqrt(x);
}

// K0(x) for 0 < x <= 2: -(log(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2.
inline double k0_series(double x) {
  const double u = 0.25 * x * x;
  double i0 = 1.0;   // running sum of (x^2/4)^k / (k!)^2
  double s = 0.0;    // running sum with harmonic-number weights
  double term = 1.0;
  double h = 0.0;
  for (int k = 1; k < 40; ++k) {
    term *= u / (static_cast<double>(k) * k);
    h += 1.0 / k;
    i0 += term;
    s += term * h;
    if (term * (h + 1.0) < 1e-18 * (i0 + s)) break;
  }
  return -(std::log(0.5 * x) + euler_gamma) * i0 + s;
}

// K1(x) for 0 < x <= 2:
//   1/x + log(x/2) I1(x)
//   - (x/4) sum_{k>=0} (H_k + H_{k+1} - 2 gamma) (x^2/4)^k / (k! (k+1)!).
inline double k1_series(double x) {
  const double u = 0.25 * x * x;
  double i1sum = 1.0;  // running sum of (x^2/4)^k / (k! (k+1)!)
  double psum = 1.0;   // same terms weighted by H_k + H_{k+1}
  double term = 1.0;
  double h = 0.0, hp = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= u / (static_cast<double>(k) * (k + 1));
    h += 1.0 / k;
    hp += 1.0 / (k + 1);
    i1sum += term;
    psum += term * (h + hp);
    if (term * (h + hp + 1.0) < 1e-18 * (i1sum + psum)) break;
  }
  const double i1 = 0.5 * x * i1sum;
  return 1.0 / x + std::log(0.5 * x) * i1 -
         0.25 * x * (psum - 2.0 * euler_gamma * i1sum);
}

// Flush-to-zero policy for unscaled tails.
inline double unscale(double scaled, double x) {
  const double v = scaled * std::exp(-x);
  return (v < std::numeric_limits<double>::min()) ? 0.0 : v;
}

}  // namespace detail

inline double k0_scaled(double x) {
  detail::require_positive(x);
  if (x <= 2.0) return std::exp(x) * detail::k0_series(x);
  return detail::k0_scaled_large(x);
}

inline double k1_scaled(double x) {
  detail::require_positive(x);
  if (x <= 2.0) return std::exp(x) * detail::k1_series(x);
  return detail::k1_scaled_large(x);
}

inline double k0(double x) {
  detail::require_positive(x);
  if (x <= 2.0) return detail::k0_series(x);
  return detail::unscale(detail::k0_scaled_large(x), x);
}

inline double k1(double x) {
  detail::require_positive(x);
  if (x <= 2.0) return detail::k1_series(x);
  return detail::unscale(detail::k1_scaled_large(x), x);
}

// K0'(x) = -K1(x).
inline double k0_prime(double x) { return -k1(x); }

// K1'(x) = -K0(x) - K1(x)/x.
inline double k1_prime(double x) {
  detail::require_positive(x);
  return -(k0(x) + k1(x) / x);
}

// K_n by upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n; forward-stable
// because K_n grows with n.
inline double kn(int n, double x) {
  detail::require_positive(x);
  if (n < 0) throw std::domain_error("bessel: order must be nonnegative");
  if (n == 0) return k0(x);
  double km1 = k0(x);
  double kcur = k1(x);
  for (int m = 1; m < n; ++m) {
    const double kp1 = km1 + (2.0 * m / x) * kcur;
    km1 = kcur;
    kcur = kp1;
  }
  return kcur;
}

inline double kn_scaled(int n, double x) {
  detail::require_positive(x);
  if (n < 0) throw std::domain_error("bessel: order must be nonnegative");
  if (n == 0) return k0_scaled(x);
  double km1 = k0_scaled(x);
  double kcur = k1_scaled(x);
  for (int m = 1; m < n; ++m) {
    const double kp1 = km1 + (2.0 * m / x) * kcur;
    km1 = kcur;
    kcur = kp1;
  }
  return kcur;
}

inline BesselEval eval_kn(int n, double x) {
  const double s = kn_scaled(n, x);
  return {detail::unscale(s, x), s, x};
}

// K0(x)/K1(x), computed from scaled values so the e^-x tails cancel.
// Strictly increasing from 0 to 1 on (0, inf).
inline double k_ratio(double x) {
  detail::require_positive(x);
  if (x <= 2.0) return detail::k0_series(x) / detail::k1_series(x);
  return detail::k0_scaled_large(x) / detail::k1_scaled_large(x);
}

}  // namespace robinext
