#pragma once

// Star-shaped smooth planar domains given by a radial trigonometric
// polynomial rho(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta),
// with the differential geometry the eigenvalue bounds consume: curvature,
// perimeter, area, elastic energy (half the integral of squared curvature),
// convexity and central-symmetry predicates, inscribed disks, constraint
// normalization, and clockwise unit-speed arclength tables.
//
// Sign convention: curvature is positive on convex boundaries; the arclength
// tables traverse clockwise so that nu = (-tau2, tau1) is the outer normal
// and d(tau)/ds = -kappa nu.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "robinext/quadrature.hpp"

namespace robinext {

struct DomainShape {
  double a0 = 1.0;
  std::vector<double> cos_coeffs;  // a_k for k = 1..K
  std::vector<double> sin_coeffs;  // b_k for k = 1..K, same K
  int n_samples = 1024;            // power of two
};

struct RadialJet {
  double rho;
  double drho;
  double ddrho;
};

struct GeometrySummary {
  double perimeter = 0.0;
  double area = 0.0;
  double elastic_energy = 0.0;
  double total_curvature = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double max_curvature = 0.0;
  bool convex = false;
  bool centrally_symmetric = false;
};

struct ArclengthTables {
  double length = 0.0;
  std::vector<double> s;      // uniform nodes j L / M
  std::vector<double> theta;  // polar angle at s_j (clockwise traversal)
  std::vector<double> kappa;
  std::vector<double> tau1;
  std::vector<double> tau2;
};

enum class MatchConstraint { area, perimeter, elastic };

namespace detail {

inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline void require_grid(const DomainShape& s) {
  if (s.cos_coeffs.size() != s.sin_coeffs.size())
    throw std::invalid_argument("shape: cosine/sine coefficient counts differ");
  if (!power_of_two(s.n_samples) || s.n_samples < 16)
    throw std::invalid_argument("shape: n_samples must be a power of two >= 16");
}

// Golden-section minimization of a smooth scalar function on [a, b].
template <class F>
double golden_min(F&& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 72; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Grid scan plus golden refinement; returns the minimizing angle.
template <class F>
double grid_argmin(F&& f, int n) {
  const double h = 2.0 * std::numbers::pi / n;
  int best = 0;
  double fbest = f(0.0);
  for (int j = 1; j < n; ++j) {
    const double v = f(h * j);
    if (v < fbest) {
      fbest = v;
      best = j;
    }
  }
  return golden_min(f, h * (best - 1), h * (best + 1));
}

}  // namespace detail

inline RadialJet rho_derivatives(const DomainShape& s, double theta) {
  double r = s.a0, d1 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < s.cos_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double c = std::cos(k * theta);
    const double sn = std::sin(k * theta);
    const double a = s.cos_coeffs[i];
    const double b = s.sin_coeffs[i];
    r += a * c + b * sn;
    d1 += k * (b * c - a * sn);
    d2 -= k * k * (a * c + b * sn);
  }
  return {r, d1, d2};
}

inline double curvature_polar(const DomainShape& s, double theta) {
  const RadialJet j = rho_derivatives(s, theta);
  const double g = j.rho * j.rho + j.drho * j.drho;
  return (g + j.drho * j.drho - j.rho * j.ddrho) / (g * std::sqrt(g));
}

// Boundary speed |d Gamma / d theta|.
inline double boundary_speed(const DomainShape& s, double theta) {
  const RadialJet j = rho_derivatives(s, theta);
  return std::sqrt(j.rho * j.rho + j.drho * j.drho);
}

inline double min_rho(const DomainShape& s) {
  detail::require_grid(s);
  auto f = [&s](double t) { return rho_derivatives(s, t).rho; };
  return f(detail::grid_argmin(f, s.n_samples));
}

inline double inradius_centered(const DomainShape& s) { return min_rho(s); }

inline bool contains_disk(const DomainShape& s, double R) {
  if (!(R > 0.0)) throw std::domain_error("contains_disk: radius must be positive");
  return min_rho(s) >= R;
}

inline bool centrally_symmetric(const DomainShape& s) {
  for (std::size_t i = 0; i < s.cos_coeffs.size(); ++i)
    if (i % 2 == 0 &&  // k = i+1 odd
        (std::abs(s.cos_coeffs[i]) > 1e-12 || std::abs(s.sin_coeffs[i]) > 1e-12))
      return false;
  return true;
}

inline GeometrySummary summarize(const DomainShape& s) {
  detail::require_grid(s);
  GeometrySummary out;

  auto rho_at = [&s](double t) { return rho_derivatives(s, t).rho; };
  const double rho_min = rho_at(detail::grid_argmin(rho_at, s.n_samples));
  if (!(rho_min > 0.0))
    throw std::invalid_argument("summarize: boundary radius must stay positive");
  out.min_rho = rho_min;
  auto neg_rho = [&rho_at](double t) { return -rho_at(t); };
  out.max_rho = rho_at(detail::grid_argmin(neg_rho, s.n_samples));

  const int n = s.n_samples;
  const double h = 2.0 * std::numbers::pi / n;
  double L = 0.0, A = 0.0, E = 0.0, TC = 0.0;
  for (int j = 0; j < n; ++j) {
    const RadialJet jet = rho_derivatives(s, h * j);
    const double g = jet.rho * jet.rho + jet.drho * jet.drho;
    const double sp = std::sqrt(g);
    const double kap = (g + jet.drho * jet.drho - jet.rho * jet.ddrho) / (g * sp);
    L += sp;
    A += jet.rho * jet.rho;
    E += kap * kap * sp;
    TC += kap * sp;
  }
  out.perimeter = h * L;
  out.area = 0.5 * h * A;
  out.elastic_energy = 0.5 * h * E;
  out.total_curvature = h * TC;

  auto kap_at = [&s](double t) { return curvature_polar(s, t); };
  const double kap_min = kap_at(detail::grid_argmin(kap_at, s.n_samples));
  auto neg_kap = [&kap_at](double t) { return -kap_at(t); };
  out.max_curvature = kap_at(detail::grid_argmin(neg_kap, s.n_samples));
  out.convex = kap_min >= -1e-10;
  out.centrally_symmetric = centrally_symmetric(s);
  return out;
}

inline double matched_disk_radius(const DomainShape& s, MatchConstraint c) {
  const GeometrySummary g = summarize(s);
  switch (c) {
    case MatchConstraint::area:
      return std::sqrt(g.area / std::numbers::pi);
    case MatchConstraint::perimeter:
      return g.perimeter / (2.0 * std::numbers::pi);
    case MatchConstraint::elastic:
      return std::numbers::pi / g.elastic_energy;
  }
  throw std::logic_error("matched_disk_radius: unknown constraint");
}

// Uniform dilation: every Fourier coefficient scales by the same factor, so
// L -> cL, A -> c^2 A, E -> E/c and all three matched radii scale by c.
inline DomainShape normalize(const DomainShape& s, MatchConstraint c,
                             double target_radius) {
  if (!(target_radius > 0.0))
    throw std::domain_error("normalize: target radius must be positive");
  const double scale = target_radius / matched_disk_radius(s, c);
  DomainShape out = s;
  out.a0 *= scale;
  for (double& a : out.cos_coeffs) a *= scale;
  for (double& b : out.sin_coeffs) b *= scale;
  return out;
}

// Clockwise unit-speed boundary tables at M uniform arclength nodes.
inline ArclengthTables arclength_tables(const DomainShape& s, int M) {
  detail::require_grid(s);
  if (M < 64) throw std::invalid_argument("arclength_tables: need at least 64 nodes");

  const int n = s.n_samples;
  const double h = 2.0 * std::numbers::pi / n;
  static const GaussRule g8 = gauss_legendre(8);
  auto speed = [&s](double t) { return boundary_speed(s, t); };

  // Cumulative arclength S(theta_i) along increasing theta, each cell by
  // Gauss-Legendre so partial-interval lookups stay accurate.
  std::vector<double> S(n + 1, 0.0);
  for (int i = 0; i < n; ++i)
    S[i + 1] = S[i] + integrate(speed, h * i, h * (i + 1), g8);
  const double L = S[n];

  ArclengthTables out;
  out.length = L;
  out.s.resize(M);
  out.theta.resize(M);
  out.kappa.resize(M);
  out.tau1.resize(M);
  out.tau2.resize(M);

  for (int j = 0; j < M; ++j) {
    const double sj = L * j / M;
    // Clockwise traversal from theta = 0: polar angle theta* satisfies
    // S(theta*) = L - sj.
    const double target = L - sj;
    const auto it = std::lower_bound(S.begin(), S.end(), target);
    int cell = static_cast<int>(it - S.begin());
    if (cell > 0) --cell;
    if (cell >= n) cell = n - 1;
    double theta = h * cell + (target - S[cell]) /
                                  std::max(speed(h * cell), 1e-300);
    theta = std::clamp(theta, h * cell, h * (cell + 1));
    for (int it2 = 0; it2 < 4; ++it2) {
      const double resid = S[cell] + integrate(speed, h * cell, theta, g8) - target;
      theta -= resid / speed(theta);
      theta = std::clamp(theta, h * cell, h * (cell + 1));
    }

    const RadialJet jet = rho_derivatives(s, theta);
    const double sp = std::sqrt(jet.rho * jet.rho + jet.drho * jet.drho);
    const double ct = std::cos(theta), st = std::sin(theta);
    // d Gamma / d theta, then reversed for the clockwise direction.
    const double dx = jet.drho * ct - jet.rho * st;
    const double dy = jet.drho * st + jet.rho * ct;
    out.s[j] = sj;
    out.theta[j] = (theta >= 2.0 * std::numbers::pi) ? theta - 2.0 * std::numbers::pi
                                                     : theta;
    out.kappa[j] = curvature_polar(s, theta);
    out.tau1[j] = -dx / sp;
    out.tau2[j] = -dy / sp;
  }
  return out;
}

// Plain-text shape format: line 1 "K n_samples", line 2 a0, then K lines
// "a_k b_k".
inline DomainShape read_shape(std::istream& in) {
  DomainShape s;
  int K = 0;
  if (!(in >> K >> s.n_samples))
    throw std::runtime_error("shape file: expected header 'K n_samples'");
  if (K < 0 || K > 4096)
    throw std::runtime_error("shape file: harmonic count out of range");
  if (!(in >> s.a0))
    throw std::runtime_error("shape file: expected mean radius a0");
  s.cos_coeffs.resize(K);
  s.sin_coeffs.resize(K);
  for (int k = 0; k < K; ++k)
    if (!(in >> s.cos_coeffs[k] >> s.sin_coeffs[k]))
      throw std::runtime_error("shape file: expected K lines of 'a_k b_k'");
  detail::require_grid(s);
  return s;
}

inline void write_shape(std::ostream& out, const DomainShape& s) {
  detail::require_grid(s);
  std::ostringstream buf;
  buf.precision(17);
  buf << s.cos_coeffs.size() << ' ' << s.n_samples << '\n' << s.a0 << '\n';
  for (std::size_t k = 0; k < s.cos_coeffs.size(); ++k)
    buf << s.cos_coeffs[k] << ' ' << s.sin_coeffs[k] << '\n';
  out << buf.str();
}

}  // namespace robinext
