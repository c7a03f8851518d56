#pragma once

// Exact negative spectrum of the Robin Laplacian outside a disk of radius R
// with coupling alpha < 0.  Separation of variables reduces each angular
// momentum n to a radial problem whose L2 solution is K_n(omega r); the Robin
// condition at r = R pins omega through a scalar transcendental equation:
//
//   n = 0:   x K1(x) = -alpha R K0(x)              (x = xi R,  lambda1 = -xi^2)
//   n >= 1:  x K_{n-1}(x) / K_n(x) = -(alpha R + n) (x = omega R, lambda = -omega^2)
//
// The n = 0 equation has a root for every alpha < 0; the fiber-n equation has
// one exactly when alpha < -n/R.  Eigenvalues for n >= 1 carry multiplicity
// two (cos and sin branches).  All equations are solved in exponentially
// scaled form so radii and couplings far from 1 cannot underflow.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "robinext/bessel.hpp"
#include "robinext/roots.hpp"

namespace robinext {

struct DiskEigen {
  double root;    // xi or omega
  double lambda;  // -root^2
};

struct DiskSpectrum {
  double radius = 0.0;
  double alpha = 0.0;
  double xi = 0.0;                    // lambda1 = -xi^2
  std::optional<double> omega;        // present iff alpha < -1/R
  int n_star = 0;                     // largest fiber index with a negative eigenvalue
  std::vector<std::pair<int, double>> fiber_values;  // (n, lambda), n = 0..n_star

  double lambda1() const { return -xi * xi; }
  std::optional<double> lambda2() const {
    if (!omega) return std::nullopt;
    return -*omega * *omega;
  }
  int negative_count() const { return 2 * n_star + 1; }

  // Ascending listing with the double multiplicity of every fiber n >= 1.
  std::vector<double> eigenvalues_with_multiplicity() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(negative_count()));
    for (const auto& [n, lam] : fiber_values) {
      out.push_back(lam);
      if (n >= 1) out.push_back(lam);
    }
    return out;
  }
};

namespace detail {

inline void require_radius(double R) {
  if (!(R > 0.0)) throw std::domain_error("disk: radius must be positive");
}

inline void require_attractive(double alpha) {
  if (!(alpha < 0.0))
    throw std::domain_error("disk: coupling must be negative");
}

}  // namespace detail

inline double critical_coupling_disk(double R) {
  detail::require_radius(R);
  return -1.0 / R;
}

// Ground state: solves x K1(x) - t K0(x) = 0 with t = -alpha R, then
// xi = x / R.  The scaled residual h(x) = x k1s - t k0s is strictly
// increasing (h' = (x + t)(k1s - k0s) > 0), so the root is unique.
inline DiskEigen lambda1_disk(double R, double alpha) {
  detail::require_radius(R);
  detail::require_attractive(alpha);
  const double t = -alpha * R;
  auto h = [t](double x) { return x * k1_scaled(x) - t * k0_scaled(x); };
  auto hp = [t](double x) { return (x + t) * (k1_scaled(x) - k0_scaled(x)); };
  const double x = find_root(h, hp, std::max(t, 1e-8));
  if (std::abs(h(x)) > 1e-12 * t * k0_scaled(x))
    throw std::runtime_error("lambda1_disk: transcendental residual above tolerance");
  const double xi = x / R;
  return {xi, -xi * xi};
}

// Lowest eigenvalue of the angular-momentum-n radial problem, absent when
// alpha >= -n/R.  For n >= 1 solves x K_{n-1}(x)/K_n(x) = t with
// t = -(alpha R + n) > 0.
inline std::optional<double> fiber_lowest(double R, double alpha, int n) {
  detail::require_radius(R);
  detail::require_attractive(alpha);
  if (n < 0) throw std::domain_error("disk: fiber index must be nonnegative");
  if (n == 0) return lambda1_disk(R, alpha).lambda;

  const double t = -(alpha * R + n);
  if (!(t > 0.0)) return std::nullopt;

  auto f = [n, t](double x) {
    return x * kn_scaled(n - 1, x) / kn_scaled(n, x) - t;
  };
  auto df = [n, &f](double x) {
    if (n == 1) {
      // d/dx [x K0/K1] = 2r + x r^2 - x with r = K0/K1.
      const double r = k_ratio(x);
      return 2.0 * r + x * r * r - x;
    }
    const double h = 1e-7 * std::max(1.0, x);
    return (f(x + h) - f(x - h)) / (2.0 * h);
  };
  const double x = find_root(f, df, std::max(t, 1e-8));
  if (std::abs(f(x)) > 1e-12 * std::max(1.0, t))
    throw std::runtime_error("fiber_lowest: transcendental residual above tolerance");
  const double w = x / R;
  return -w * w;
}

// First excited level; present exactly below the critical coupling -1/R.
inline std::optional<DiskEigen> lambda2_disk(double R, double alpha) {
  detail::require_radius(R);
  if (!(alpha < critical_coupling_disk(R))) return std::nullopt;
  const auto lam = fiber_lowest(R, alpha, 1);
  if (!lam) return std::nullopt;
  const double omega = std::sqrt(-*lam);
  return DiskEigen{omega, *lam};
}

// Enumerates fibers upward until the first absent one; eigenvalue existence
// in fiber n requires alpha < -n/R, so absences are contiguous and the scan
// is exact.
inline DiskSpectrum disk_spectrum_full(double R, double alpha, int fiber_cap = 64) {
  detail::require_radius(R);
  detail::require_attractive(alpha);
  DiskSpectrum s;
  s.radius = R;
  s.alpha = alpha;

  const DiskEigen ground = lambda1_disk(R, alpha);
  s.xi = ground.root;
  s.fiber_values.emplace_back(0, ground.lambda);
  s.n_star = 0;

  for (int n = 1;; ++n) {
    if (n > fiber_cap)
      throw std::runtime_error("disk_spectrum_full: fiber cap exceeded");
    const auto lam = fiber_lowest(R, alpha, n);
    if (!lam) break;
    s.fiber_values.emplace_back(n, *lam);
    s.n_star = n;
    if (n == 1) s.omega = std::sqrt(-*lam);
  }
  return s;
}

}  // namespace robinext
