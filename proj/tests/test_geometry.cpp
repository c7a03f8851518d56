#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <robinext/geometry.hpp>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using robinext::DomainShape;
using robinext::MatchConstraint;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen 40-digit quadrature values for rho = 1 + 0.2 cos(2 theta).
constexpr double kEllipseL = 6.5297223006393357749;
constexpr double kEllipseA = 3.2044245066615891032;
constexpr double kEllipseE = 3.623206625691252679;
constexpr double kEllipseGageMargin = 0.42236236067197043638;
// Curvature of rho = 1 + 0.05 cos(2 theta) at theta = 0.
constexpr double kKappaEps05 = 1.1337868480725623583;

DomainShape disk(double R) {
  DomainShape s;
  s.a0 = R;
  return s;
}

DomainShape cos_harmonic(double eps, int k) {
  DomainShape s;
  s.cos_coeffs.assign(k, 0.0);
  s.sin_coeffs.assign(k, 0.0);
  s.cos_coeffs[k - 1] = eps;
  return s;
}

DomainShape scaled(const DomainShape& s, double c) {
  DomainShape out = s;
  out.a0 *= c;
  for (double& a : out.cos_coeffs) a *= c;
  for (double& b : out.sin_coeffs) b *= c;
  return out;
}

std::vector<DomainShape> random_valid_shapes(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick_k(1, 6);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<DomainShape> out;
  while (static_cast<int>(out.size()) < count) {
    DomainShape s;
    const int K = pick_k(rng);
    s.cos_coeffs.resize(K);
    s.sin_coeffs.resize(K);
    for (int k = 1; k <= K; ++k) {
      s.cos_coeffs[k - 1] = 0.35 * unit(rng) / (k * k);
      s.sin_coeffs[k - 1] = 0.35 * unit(rng) / (k * k);
    }
    if (robinext::min_rho(s) > 0.05) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("radial jet evaluates the trigonometric polynomial exactly") {
  const DomainShape d = disk(2.5);
  for (double t : {0.0, 0.7, 3.9}) {
    const auto j = robinext::rho_derivatives(d, t);
    REQUIRE(j.rho == 2.5);
    REQUIRE(j.drho == 0.0);
    REQUIRE(j.ddrho == 0.0);
  }

  const DomainShape e = cos_harmonic(0.1, 2);
  const auto j0 = robinext::rho_derivatives(e, 0.0);
  REQUIRE_THAT(j0.rho, WithinRel(1.1, 1e-15));
  REQUIRE_THAT(j0.drho, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(j0.ddrho, WithinRel(-0.4, 1e-15));

  // Central differences agree to O(h^2).
  const DomainShape mixed = [] {
    DomainShape s;
    s.cos_coeffs = {0.1, -0.05, 0.02};
    s.sin_coeffs = {0.0, 0.07, -0.03};
    return s;
  }();
  const double h = 1e-5;
  for (double t : {0.3, 1.9, 5.1}) {
    CAPTURE(t);
    const auto jm = robinext::rho_derivatives(mixed, t - h);
    const auto jc = robinext::rho_derivatives(mixed, t);
    const auto jp = robinext::rho_derivatives(mixed, t + h);
    REQUIRE_THAT((jp.rho - jm.rho) / (2.0 * h), WithinAbs(jc.drho, 1e-8));
    REQUIRE_THAT((jp.drho - jm.drho) / (2.0 * h), WithinAbs(jc.ddrho, 1e-8));
  }
}

TEST_CASE("polar curvature matches closed forms") {
  for (double t : {0.0, 1.1, 4.4})
    REQUIRE_THAT(robinext::curvature_polar(disk(2.0), t), WithinRel(0.5, 1e-14));
  REQUIRE_THAT(robinext::curvature_polar(cos_harmonic(0.05, 2), 0.0),
               WithinRel(kKappaEps05, 1e-13));
}

TEST_CASE("total curvature of random valid shapes is one full turn") {
  for (const DomainShape& s : random_valid_shapes(20, 91021u)) {
    const auto g = robinext::summarize(s);
    REQUIRE_THAT(g.total_curvature, WithinAbs(2.0 * kPi, 1e-10));
  }
}

TEST_CASE("summary functionals on disks and the ellipse-like shape") {
  SECTION("unit disk") {
    const auto g = robinext::summarize(disk(1.0));
    REQUIRE_THAT(g.perimeter, WithinRel(2.0 * kPi, 1e-12));
    REQUIRE_THAT(g.area, WithinRel(kPi, 1e-12));
    REQUIRE_THAT(g.elastic_energy, WithinRel(kPi, 1e-12));
    REQUIRE_THAT(g.total_curvature, WithinRel(2.0 * kPi, 1e-12));
    REQUIRE(g.convex);
    REQUIRE(g.centrally_symmetric);
    REQUIRE(g.min_rho == 1.0);
    REQUIRE(g.max_rho == 1.0);
    REQUIRE_THAT(g.max_curvature, WithinRel(1.0, 1e-12));
  }
  SECTION("elastic energy of a disk is pi over its radius") {
    REQUIRE_THAT(robinext::summarize(disk(2.0)).elastic_energy,
                 WithinRel(kPi / 2.0, 1e-12));
  }
  SECTION("frozen values for rho = 1 + 0.2 cos 2 theta") {
    const auto g = robinext::summarize(cos_harmonic(0.2, 2));
    REQUIRE_THAT(g.perimeter, WithinRel(kEllipseL, 1e-12));
    REQUIRE_THAT(g.area, WithinRel(kEllipseA, 1e-12));
    REQUIRE_THAT(g.elastic_energy, WithinRel(kEllipseE, 1e-12));
    REQUIRE(g.elastic_energy * g.elastic_energy * g.area >= kPi * kPi * kPi);
    REQUIRE(g.convex);
    REQUIRE_THAT(g.elastic_energy - kPi * g.perimeter / (2.0 * g.area),
                 WithinRel(kEllipseGageMargin, 1e-10));
    REQUIRE(g.centrally_symmetric);
    REQUIRE_THAT(g.min_rho, WithinRel(0.8, 1e-13));
    REQUIRE_THAT(g.max_rho, WithinRel(1.2, 1e-13));
  }
  SECTION("odd harmonics break central symmetry") {
    DomainShape s = cos_harmonic(0.1, 2);
    s.sin_coeffs[0] = 0.05;  // k = 1 term
    REQUIRE_FALSE(robinext::summarize(s).centrally_symmetric);
  }
}

TEST_CASE("geometric inequalities hold on random samples") {
  int convex_seen = 0;
  for (const DomainShape& s : random_valid_shapes(20, 5150u)) {
    const auto g = robinext::summarize(s);
    REQUIRE(g.elastic_energy * g.elastic_energy * g.area >=
            kPi * kPi * kPi * (1.0 - 1e-12));
    if (g.convex) {
      ++convex_seen;
      REQUIRE(g.elastic_energy >=
              kPi * g.perimeter / (2.0 * g.area) * (1.0 - 1e-12));
    }
  }
  REQUIRE(convex_seen > 0);
}

TEST_CASE("inscribed disks and the centered in-radius") {
  REQUIRE(robinext::inradius_centered(disk(3.0)) == 3.0);
  const DomainShape s = cos_harmonic(0.3, 2);
  REQUIRE_THAT(robinext::inradius_centered(s), WithinRel(0.7, 1e-13));
  REQUIRE(robinext::contains_disk(s, 0.7));
  REQUIRE_FALSE(robinext::contains_disk(s, 0.71));
  REQUIRE(robinext::contains_disk(disk(1.0), 1.0));
  for (const DomainShape& r : random_valid_shapes(10, 777u))
    REQUIRE(robinext::contains_disk(r, robinext::min_rho(r) - 1e-12));
  REQUIRE_THROWS_AS(robinext::contains_disk(s, 0.0), std::domain_error);
}

TEST_CASE("matched disk radii and normalization") {
  for (auto c : {MatchConstraint::area, MatchConstraint::perimeter,
                 MatchConstraint::elastic})
    REQUIRE_THAT(robinext::matched_disk_radius(disk(2.0), c), WithinRel(2.0, 1e-12));

  const DomainShape e = cos_harmonic(0.1, 2);
  const auto g = robinext::summarize(e);
  // Perimeter exceeds the isoelastic disk's: L E > 2 pi^2.
  REQUIRE(g.perimeter * g.elastic_energy > 2.0 * kPi * kPi);

  const double c = 1.7;
  for (auto which : {MatchConstraint::area, MatchConstraint::perimeter,
                     MatchConstraint::elastic}) {
    CAPTURE(static_cast<int>(which));
    REQUIRE_THAT(robinext::matched_disk_radius(scaled(e, c), which),
                 WithinRel(c * robinext::matched_disk_radius(e, which), 1e-12));
  }

  const DomainShape nd = robinext::normalize(disk(3.0), MatchConstraint::elastic, 1.0);
  REQUIRE_THAT(nd.a0, WithinRel(1.0, 1e-12));
  const DomainShape ne = robinext::normalize(e, MatchConstraint::elastic, 1.3);
  REQUIRE_THAT(robinext::matched_disk_radius(ne, MatchConstraint::elastic),
               WithinRel(1.3, 1e-12));
  REQUIRE_THAT(robinext::summarize(ne).elastic_energy, WithinRel(kPi / 1.3, 1e-12));
  REQUIRE_THROWS_AS(robinext::normalize(e, MatchConstraint::area, -1.0),
                    std::domain_error);
}

TEST_CASE("summary scales covariantly under dilation") {
  const DomainShape e = cos_harmonic(0.2, 2);
  const double c = 2.3;
  const auto g1 = robinext::summarize(e);
  const auto g2 = robinext::summarize(scaled(e, c));
  REQUIRE_THAT(g2.perimeter, WithinRel(c * g1.perimeter, 1e-12));
  REQUIRE_THAT(g2.area, WithinRel(c * c * g1.area, 1e-12));
  REQUIRE_THAT(g2.elastic_energy, WithinRel(g1.elastic_energy / c, 1e-12));
  REQUIRE_THAT(g2.total_curvature, WithinRel(2.0 * kPi, 1e-12));
  REQUIRE_THAT(g2.min_rho, WithinRel(c * g1.min_rho, 1e-12));
  REQUIRE_THAT(g2.max_curvature, WithinRel(g1.max_curvature / c, 1e-12));
}

TEST_CASE("invalid shapes are rejected") {
  DomainShape pinched;
  pinched.a0 = 0.5;
  pinched.cos_coeffs = {0.0, 0.6};
  pinched.sin_coeffs = {0.0, 0.0};
  REQUIRE_THROWS_AS(robinext::summarize(pinched), std::invalid_argument);

  DomainShape badgrid = disk(1.0);
  badgrid.n_samples = 1000;
  REQUIRE_THROWS_AS(robinext::summarize(badgrid), std::invalid_argument);

  DomainShape mismatched = disk(1.0);
  mismatched.cos_coeffs = {0.1};
  REQUIRE_THROWS_AS(robinext::summarize(mismatched), std::invalid_argument);
}

TEST_CASE("arclength tables traverse clockwise at unit speed") {
  SECTION("disk") {
    const auto t = robinext::arclength_tables(disk(1.0), 256);
    REQUIRE_THAT(t.length, WithinRel(2.0 * kPi, 1e-12));
    REQUIRE_THAT(t.s[1] - t.s[0], WithinRel(2.0 * kPi / 256, 1e-12));
    REQUIRE(t.theta[0] == 0.0);
    REQUIRE_THAT(t.theta[1], WithinRel(2.0 * kPi * 255.0 / 256.0, 1e-10));
    for (int j = 0; j < 256; ++j) {
      CAPTURE(j);
      REQUIRE_THAT(t.kappa[j], WithinRel(1.0, 1e-12));
      REQUIRE_THAT(t.tau1[j] * t.tau1[j] + t.tau2[j] * t.tau2[j],
                   WithinRel(1.0, 1e-12));
    }
  }
  SECTION("ellipse-like boundary") {
    const DomainShape e = cos_harmonic(0.2, 2);
    const auto g = robinext::summarize(e);
    const int M = 1024;
    const auto t = robinext::arclength_tables(e, M);
    REQUIRE_THAT(t.length, WithinRel(kEllipseL, 1e-12));

    const double ds = t.length / M;
    double sum1 = 0.0, sum2 = 0.0, sumk = 0.0, sumk2 = 0.0, signed_area = 0.0;
    for (int j = 0; j < M; ++j) {
      REQUIRE_THAT(t.tau1[j] * t.tau1[j] + t.tau2[j] * t.tau2[j],
                   WithinRel(1.0, 1e-12));
      sum1 += t.tau1[j];
      sum2 += t.tau2[j];
      sumk += t.kappa[j];
      sumk2 += t.kappa[j] * t.kappa[j];
      const double r = robinext::rho_derivatives(e, t.theta[j]).rho;
      const double x = r * std::cos(t.theta[j]);
      const double y = r * std::sin(t.theta[j]);
      signed_area += 0.5 * (x * t.tau2[j] - y * t.tau1[j]);
    }
    REQUIRE_THAT(sum1 * ds, WithinAbs(0.0, 1e-10));  // closed curve
    REQUIRE_THAT(sum2 * ds, WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(sumk * ds, WithinAbs(2.0 * kPi, 1e-10));
    REQUIRE_THAT(0.5 * sumk2 * ds, WithinRel(g.elastic_energy, 1e-9));
    // Clockwise traversal encloses the area negatively.
    REQUIRE_THAT(signed_area * ds, WithinRel(-g.area, 1e-8));

    // Finite-difference Frenet check: d(tau)/ds = -kappa nu with nu the outer
    // normal (-tau2, tau1).
    for (int j = 0; j < M; ++j) {
      const int jp = (j + 1) % M, jm = (j + M - 1) % M;
      const double d1 = (t.tau1[jp] - t.tau1[jm]) / (2.0 * ds);
      const double d2 = (t.tau2[jp] - t.tau2[jm]) / (2.0 * ds);
      CAPTURE(j);
      REQUIRE_THAT(d1, WithinAbs(-t.kappa[j] * -t.tau2[j], 5e-4));
      REQUIRE_THAT(d2, WithinAbs(-t.kappa[j] * t.tau1[j], 5e-4));
    }
  }
  SECTION("node floor") {
    REQUIRE_THROWS_AS(robinext::arclength_tables(disk(1.0), 32),
                      std::invalid_argument);
  }
}

TEST_CASE("shape files round-trip and reject malformed input") {
  DomainShape s;
  s.a0 = 1.25;
  s.cos_coeffs = {0.2, 0.0, -0.04};
  s.sin_coeffs = {0.0, 0.013, 0.0};
  s.n_samples = 512;

  std::stringstream buf;
  robinext::write_shape(buf, s);
  const DomainShape r = robinext::read_shape(buf);
  REQUIRE(r.a0 == s.a0);
  REQUIRE(r.n_samples == s.n_samples);
  REQUIRE(r.cos_coeffs == s.cos_coeffs);
  REQUIRE(r.sin_coeffs == s.sin_coeffs);

  std::stringstream bad1("not a shape");
  REQUIRE_THROWS_AS(robinext::read_shape(bad1), std::runtime_error);
  std::stringstream bad2("2 1024\n1.0\n0.1 0.0\n");  // missing second harmonic
  REQUIRE_THROWS_AS(robinext::read_shape(bad2), std::runtime_error);
  std::stringstream bad3("-1 1024\n1.0\n");
  REQUIRE_THROWS_AS(robinext::read_shape(bad3), std::runtime_error);
}
