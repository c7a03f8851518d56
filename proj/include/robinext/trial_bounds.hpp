// Trial-state machinery for certified upper bounds on the second exterior
// eigenvalue. Two constructions are covered: the boundary-term bound for
// star-shaped centrally symmetric supersets of a disk, and the
// parallel-coordinate Rayleigh quotients for convex shapes matched to a disk
// of equal elastic energy.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robinext/bessel.hpp"
#include "robinext/disk_spectrum.hpp"
#include "robinext/geometry.hpp"
#include "robinext/quadrature.hpp"

namespace robinext {

struct HypothesisError : std::runtime_error {
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

enum class TrialBranch { cos_branch, sin_branch };

inline const char* branch_name(TrialBranch b) {
  return b == TrialBranch::cos_branch ? "cos" : "sin";
}

struct HypothesisFlags {
  bool star_shaped = false;
  bool centrally_symmetric = false;
  bool contains_disk = false;  // comparison disk sits inside the shape
  bool convex = false;
  bool elastic_match = false;  // disk radius equals pi / elastic energy
};

// Evaluator for a numerically computed exterior ground state in polar
// coordinates; it must return 0 beyond any truncation radius it was built on.
using GroundStateFn = std::function<double(double r, double theta)>;

struct TrialBoundReport {
  double alpha = 0.0;
  double disk_radius = 0.0;
  double lambda2_disk = 0.0;
  double omega = 0.0;
  double gamma_omega = 0.0;
  TrialBranch chosen_branch = TrialBranch::cos_branch;
  double boundary_term = 0.0;  // exact boundary integral of the trial state
  double estimate1 = 0.0;      // drops the angular-derivative contribution
  double estimate2 = 0.0;      // radial profile g against the boundary trace
  double trial_norm_sq = 0.0;
  double upper_bound = 0.0;    // lambda2_disk + boundary_term / trial_norm_sq
  // Cosine trial, sine trial, and the chosen branch against the reference
  // ground state, each normalized by the product of norms.
  std::array<double, 3> orthogonality_residuals{};
  std::string ground_state_source;  // "fem" or "symmetry-analytic"
  HypothesisFlags hypothesis_flags;
};

struct IsoelasticReport {
  double alpha = 0.0;
  double disk_radius = 0.0;  // pi / elastic energy of the shape
  double perimeter = 0.0;
  double elastic_energy = 0.0;
  double rayleigh_u = 0.0;
  double rayleigh_v = 0.0;            // uses the exact curvature term
  double rayleigh_v_surrogate = 0.0;  // Jensen-replaced curvature term
  double lambda1_disk = 0.0;
  double lambda2_disk = 0.0;
  double jensen_margin = 0.0;
  double curvature_term_exact = 0.0;
  double curvature_term_surrogate = 0.0;
  // L2 pairing, gradient pairing, boundary-trace pairing of the two trial
  // states, normalized by the product of norms.
  std::array<double, 3> orthogonality_residuals{};
  HypothesisFlags hypothesis_flags;
};

struct CriticalCouplingBounds {
  std::optional<double> from_inscribed;  // -1 / min rho
  std::optional<double> from_elastic;    // -E / pi
  std::optional<double> from_inradius;   // -1 / centered inradius
};

namespace detail {

// Integral of f over [a, infinity) for integrands decaying at least like
// exp(-scale (r - a)) times a polynomial. The substitution
// r = a + sinh(u)/scale makes the decay doubly exponential in u, so
// fixed-width Gauss panels converge after a handful of steps; the sweep
// stops once two consecutive panels fall below 1e-16 of the running total.
// Each panel is also evaluated with a coarser embedded rule, and strict
// mode turns disagreement into an error; callers integrating merely
// piecewise-smooth data (interpolated grid functions) pass strict = false.
template <class F>
double integrate_radial_tail(F&& f, double a, double scale, bool strict = true) {
  if (!(scale > 0.0))
    throw std::invalid_argument("integrate_radial_tail: positive decay scale required");
  static const GaussRule fine = gauss_legendre(16);
  static const GaussRule coarse = gauss_legendre(8);
  const double width = 0.5;
  double total = 0.0, total_coarse = 0.0;
  int quiet = 0;
  for (int panel = 0; panel < 64 && quiet < 2; ++panel) {
    const double mid = width * (panel + 0.5);
    double p = 0.0, pc = 0.0;
    for (std::size_t i = 0; i < fine.node.size(); ++i) {
      const double u = mid + 0.5 * width * fine.node[i];
      p += 0.5 * width * fine.weight[i] * f(a + std::sinh(u) / scale) * std::cosh(u) / scale;
    }
    for (std::size_t i = 0; i < coarse.node.size(); ++i) {
      const double u = mid + 0.5 * width * coarse.node[i];
      pc += 0.5 * width * coarse.weight[i] * f(a + std::sinh(u) / scale) * std::cosh(u) / scale;
    }
    total += p;
    total_coarse += pc;
    quiet = std::abs(p) <= 1e-16 * std::abs(total) ? quiet + 1 : 0;
  }
  if (quiet < 2)
    throw std::runtime_error("integrate_radial_tail: tail failed to decay within the panel budget");
  if (strict &&
      !(std::abs(total - total_coarse) <= 1e-9 * std::max(std::abs(total), 1e-300)))
    throw std::runtime_error("integrate_radial_tail: embedded-rule self-estimate failed");
  return total;
}

inline double branch_weight(TrialBranch b, double theta) {
  const double c = b == TrialBranch::cos_branch ? std::cos(theta) : std::sin(theta);
  return c * c;
}

inline HypothesisFlags shape_flags(const DomainShape& shape, double R) {
  const GeometrySummary s = summarize(shape);
  HypothesisFlags f;
  f.star_shaped = s.min_rho > 0.0;
  f.centrally_symmetric = s.centrally_symmetric;
  f.contains_disk = contains_disk(shape, R);
  f.convex = s.convex;
  f.elastic_match =
      std::abs(s.elastic_energy * R - std::numbers::pi) <= 1e-10 * std::numbers::pi;
  return f;
}

inline void require_flags(const std::vector<std::pair<bool, const char*>>& checks,
                          const char* context) {
  std::string failed;
  for (const auto& [ok, name] : checks) {
    if (ok) continue;
    if (!failed.empty()) failed += ", ";
    failed += name;
  }
  if (!failed.empty())
    throw HypothesisError(std::string(context) + " hypotheses violated: " + failed);
}

}  // namespace detail

// gamma = integral of (rho'/rho) K1(omega rho)^2 sin(theta) cos(theta); its
// sign picks the angular factor of the trial state. Evaluation goes through
// the scaled Bessel form internally, so large omega*rho underflows cleanly.
inline double gamma_omega(const DomainShape& shape, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("gamma_omega: omega must be positive");
  detail::require_grid(shape);
  return integrate_periodic(
      [&](double th) {
        const RadialJet j = rho_derivatives(shape, th);
        const double v = k1(omega * j.rho);
        return j.drho / j.rho * v * v * std::sin(th) * std::cos(th);
      },
      shape.n_samples);
}

// g(r) = -omega K1'(omega r) + alpha K1(omega r). By the transcendental
// equation defining omega it vanishes at r = R and is negative beyond; far
// past the support of the trial integrands it underflows to zero.
inline std::vector<double> g_profile(double R, double alpha,
                                     const std::vector<double>& r_grid) {
  const auto second = lambda2_disk(R, alpha);
  if (!second)
    throw HypothesisError(
        "g_profile hypotheses violated: coupling-below-critical (need alpha < -1/R)");
  const double w = second->root;
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) throw std::domain_error("g_profile: radii must be positive");
    const double x = w * r;
    out.push_back(std::exp(-x) * (w * k0_scaled(x) + (1.0 / r + alpha) * k1_scaled(x)));
  }
  return out;
}

struct BoundaryTerm {
  double value = 0.0;
  TrialBranch branch = TrialBranch::cos_branch;
  double gamma = 0.0;
  double estimate1 = 0.0;
  double estimate2 = 0.0;
  double omega = 0.0;
  double lambda2 = 0.0;
  HypothesisFlags flags;
};

// Exact boundary integral of the trial state u(r,theta) = K1(omega r) c(theta)
// over the shape boundary, c = cos or sin by the sign of gamma. In the
// theta parametrization, with J(r) = K1(omega r) and speed |G'| given by
// rho^2 + rho'^2, the integral of u (alpha u - du/dnu) splits into a radial
// part and an angular part; the angular part equals -|gamma| once the branch
// is chosen, which is what makes the whole term negative for genuine
// supersets of the disk. estimate1 drops that angular part, estimate2
// replaces the speed by rho so the integrand becomes rho J g(rho) c^2; the
// chain value <= estimate1 <= estimate2 holds pointwise.
inline BoundaryTerm monotonicity_boundary_term(const DomainShape& shape, double R,
                                               double alpha, bool enforce = true) {
  detail::require_grid(shape);
  const auto second = lambda2_disk(R, alpha);
  if (!second)
    throw HypothesisError(
        "monotonicity bound hypotheses violated: coupling-below-critical (need alpha < -1/R)");
  const HypothesisFlags flags = detail::shape_flags(shape, R);
  if (enforce)
    detail::require_flags({{flags.star_shaped, "star-shaped"},
                           {flags.centrally_symmetric, "centrally-symmetric"},
                           {flags.contains_disk, "contains-comparison-disk"}},
                          "monotonicity bound");

  BoundaryTerm bt;
  bt.omega = second->root;
  bt.lambda2 = second->lambda;
  bt.flags = flags;
  bt.gamma = gamma_omega(shape, bt.omega);
  bt.branch = bt.gamma >= 0.0 ? TrialBranch::cos_branch : TrialBranch::sin_branch;

  const double w = bt.omega;
  const int n = shape.n_samples;
  const double h = 2.0 * std::numbers::pi / n;
  double i1 = 0.0, i2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = h * j;
    const RadialJet jet = rho_derivatives(shape, th);
    const double r = jet.rho;
    const double speed = std::sqrt(r * r + jet.drho * jet.drho);
    const double c2 = detail::branch_weight(bt.branch, th);
    const double jv = k1(w * r);
    const double mjp = w * k0(w * r) + jv / r;  // -J'(r)
    const double common = r * jv * mjp * c2;
    i1 += common + alpha * speed * jv * jv * c2;
    i2 += common + alpha * r * jv * jv * c2;
  }
  bt.estimate1 = i1 * h;
  bt.estimate2 = i2 * h;
  bt.value = bt.estimate1 - std::abs(bt.gamma);
  return bt;
}

inline TrialBoundReport monotonicity_bound(const DomainShape& shape, double R,
                                           double alpha,
                                           const GroundStateFn& ground_state = {},
                                           bool enforce = true) {
  const BoundaryTerm bt = monotonicity_boundary_term(shape, R, alpha, enforce);
  const double w = bt.omega;

  TrialBoundReport rep;
  rep.alpha = alpha;
  rep.disk_radius = R;
  rep.lambda2_disk = bt.lambda2;
  rep.omega = w;
  rep.gamma_omega = bt.gamma;
  rep.chosen_branch = bt.branch;
  rep.boundary_term = bt.value;
  rep.estimate1 = bt.estimate1;
  rep.estimate2 = bt.estimate2;
  rep.hypothesis_flags = bt.flags;

  const DiskEigen ground_disk = lambda1_disk(R, alpha);
  const double xi = ground_disk.root;
  const bool have_fem = static_cast<bool>(ground_state);
  rep.ground_state_source = have_fem ? "fem" : "symmetry-analytic";

  // One pass over the angular grid accumulates the squared norm of both
  // branches together with the pairings against the reference ground state.
  const int n = shape.n_samples;
  const double h = 2.0 * std::numbers::pi / n;
  double norm_cos = 0.0, norm_sin = 0.0;
  double cross_cos = 0.0, cross_sin = 0.0, ref_norm = 0.0;
  const double cross_scale = w + xi;
  for (int j = 0; j < n; ++j) {
    const double th = h * j;
    const double a = rho_derivatives(shape, th).rho;
    const double cs = std::cos(th), sn = std::sin(th);
    const double q = detail::integrate_radial_tail(
        [w](double r) {
          const double v = k1(w * r);
          return v * v * r;
        },
        a, 2.0 * w);
    norm_cos += q * cs * cs;
    norm_sin += q * sn * sn;

    auto ref = [&](double r) { return have_fem ? ground_state(r, th) : k0(xi * r); };
    const double pair = detail::integrate_radial_tail(
        [&](double r) { return k1(w * r) * ref(r) * r; }, a, cross_scale, !have_fem);
    const double ref_sq = detail::integrate_radial_tail(
        [&](double r) {
          const double v = ref(r);
          return v * v * r;
        },
        a, 2.0 * xi, !have_fem);
    cross_cos += pair * cs;
    cross_sin += pair * sn;
    ref_norm += ref_sq;
  }
  norm_cos *= h;
  norm_sin *= h;
  cross_cos *= h;
  cross_sin *= h;
  ref_norm *= h;

  rep.trial_norm_sq = bt.branch == TrialBranch::cos_branch ? norm_cos : norm_sin;
  rep.upper_bound = rep.lambda2_disk + rep.boundary_term / rep.trial_norm_sq;

  const double res_cos = std::abs(cross_cos) / std::sqrt(norm_cos * ref_norm);
  const double res_sin = std::abs(cross_sin) / std::sqrt(norm_sin * ref_norm);
  rep.orthogonality_residuals = {
      res_cos, res_sin, bt.branch == TrialBranch::cos_branch ? res_cos : res_sin};
  return rep;
}

// Rayleigh quotients of the two parallel-coordinate trial states built from
// the matched disk of radius R = pi/E. Coordinates are (s, t): s arclength
// along the boundary, t distance along the outward normal, area element
// (1 + kappa t) dt ds. The radial profiles are f(t) = K0(xi (t+R)) for the
// ground trial and g(t) = K1(omega (t+R)) for the excited one; the excited
// state carries the unit tangent as angular factor, which contributes the
// curvature term integral of kappa^2/(1 + t kappa) |g|^2. The quotient is
// reported both with that exact term and with its Jensen surrogate
// (L/R) integral of |g|^2/(t+R), and the margin of the underlying concavity
// estimate is the minimum over a t grid of
// (1/R)/(R+t) - (1/L) integral of kappa^2/(1 + t kappa) ds.
inline IsoelasticReport isoelastic_rayleigh(const DomainShape& shape, double alpha,
                                            int arclength_nodes = 2048) {
  detail::require_grid(shape);
  const GeometrySummary sum = summarize(shape);
  if (!sum.convex)
    throw HypothesisError("isoelastic bound hypotheses violated: convex");
  const double R = std::numbers::pi / sum.elastic_energy;
  const auto second = lambda2_disk(R, alpha);
  if (!second)
    throw HypothesisError(
        "isoelastic bound hypotheses violated: coupling-below-critical (need alpha < -E/pi)");
  const DiskEigen ground = lambda1_disk(R, alpha);
  const double xi = ground.root;
  const double w = second->root;

  const ArclengthTables tab = arclength_tables(shape, arclength_nodes);
  const double L = tab.length;
  const int m = static_cast<int>(tab.kappa.size());
  const double ds = L / m;

  IsoelasticReport rep;
  rep.alpha = alpha;
  rep.disk_radius = R;
  rep.perimeter = L;
  rep.elastic_energy = sum.elastic_energy;
  rep.lambda1_disk = ground.lambda;
  rep.lambda2_disk = second->lambda;
  rep.hypothesis_flags = detail::shape_flags(shape, R);

  auto fv = [xi, R](double t) { return k0(xi * (t + R)); };
  auto fp = [xi, R](double t) { return -xi * k1(xi * (t + R)); };
  auto gv = [w, R](double t) { return k1(w * (t + R)); };
  auto gp = [w, R](double t) {
    const double x = w * (t + R);
    return -(w * k0(x) + k1(x) / (t + R));
  };
  const double two_pi = 2.0 * std::numbers::pi;
  auto weight = [L, two_pi](double t) { return L + two_pi * t; };

  auto curvature_integral = [&](double t) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      const double k = tab.kappa[j];
      const double denom = 1.0 + t * k;
      if (!(denom > 0.0))
        throw std::runtime_error("isoelastic_rayleigh: parallel coordinates degenerate");
      s += k * k / denom;
    }
    return s * ds;
  };

  using detail::integrate_radial_tail;
  const double nu = integrate_radial_tail(
      [&](double t) { return fv(t) * fv(t) * weight(t); }, 0.0, 2.0 * xi);
  const double du = integrate_radial_tail(
      [&](double t) { return fp(t) * fp(t) * weight(t); }, 0.0, 2.0 * xi);
  const double nv = integrate_radial_tail(
      [&](double t) { return gv(t) * gv(t) * weight(t); }, 0.0, 2.0 * w);
  const double dv = integrate_radial_tail(
      [&](double t) { return gp(t) * gp(t) * weight(t); }, 0.0, 2.0 * w);
  rep.curvature_term_exact = integrate_radial_tail(
      [&](double t) { return gv(t) * gv(t) * curvature_integral(t); }, 0.0, 2.0 * w);
  rep.curvature_term_surrogate =
      L / R *
      integrate_radial_tail([&](double t) { return gv(t) * gv(t) / (t + R); }, 0.0,
                            2.0 * w);

  const double trace_u = alpha * L * fv(0.0) * fv(0.0);
  const double trace_v = alpha * L * gv(0.0) * gv(0.0);
  rep.rayleigh_u = (du + trace_u) / nu;
  rep.rayleigh_v = (dv + rep.curvature_term_exact + trace_v) / nv;
  rep.rayleigh_v_surrogate = (dv + rep.curvature_term_surrogate + trace_v) / nv;

  // The grid covers the support of g^2; past it both sides decay to zero at
  // the same first-order rate, with the gap staying positive since L > 2 pi R.
  const double t_max = R + 40.0 / w;
  const int grid_n = 256;
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid_n; ++j) {
    const double frac = static_cast<double>(j) / (grid_n - 1);
    const double t = t_max * frac * frac;
    margin = std::min(margin, 1.0 / R / (R + t) - curvature_integral(t) / L);
  }
  rep.jensen_margin = margin;

  // The pairings of the two trial states reduce to the two boundary
  // constants below; both vanish exactly for closed curves, so the residuals
  // measure quadrature consistency only.
  double c0_re = 0.0, c0_im = 0.0, c1_re = 0.0, c1_im = 0.0;
  for (int j = 0; j < m; ++j) {
    c0_re += tab.tau1[j];
    c0_im -= tab.tau2[j];
    c1_re += tab.kappa[j] * tab.tau1[j];
    c1_im -= tab.kappa[j] * tab.tau2[j];
  }
  c0_re *= ds;
  c0_im *= ds;
  c1_re *= ds;
  c1_im *= ds;

  const double cross_scale = xi + w;
  const double pair0 =
      integrate_radial_tail([&](double t) { return fv(t) * gv(t); }, 0.0, cross_scale);
  const double pair1 = integrate_radial_tail(
      [&](double t) { return fv(t) * gv(t) * t; }, 0.0, cross_scale);
  const double dpair0 =
      integrate_radial_tail([&](double t) { return fp(t) * gp(t); }, 0.0, cross_scale);
  const double dpair1 = integrate_radial_tail(
      [&](double t) { return fp(t) * gp(t) * t; }, 0.0, cross_scale);

  const double res_l2 = std::hypot(c0_re * pair0 + c1_re * pair1,
                                   c0_im * pair0 + c1_im * pair1) /
                        std::sqrt(nu * nv);
  const double res_grad = std::hypot(c0_re * dpair0 + c1_re * dpair1,
                                     c0_im * dpair0 + c1_im * dpair1) /
                          std::sqrt(du * (dv + rep.curvature_term_exact));
  const double res_trace = std::hypot(c0_re, c0_im) / L;
  rep.orthogonality_residuals = {res_l2, res_grad, res_trace};
  return rep;
}

// Lower bounds on the critical coupling of the exterior problem, each valid
// under its own geometric hypothesis and absent otherwise.
inline CriticalCouplingBounds critical_coupling_bounds(const DomainShape& shape) {
  detail::require_grid(shape);
  const GeometrySummary s = summarize(shape);
  CriticalCouplingBounds out;
  if (s.centrally_symmetric && s.min_rho > 0.0) out.from_inscribed = -1.0 / s.min_rho;
  if (s.convex) out.from_elastic = -s.elastic_energy / std::numbers::pi;
  if (s.convex && s.centrally_symmetric)
    out.from_inradius = -1.0 / inradius_centered(shape);
  return out;
}

}  // namespace robinext
