// Finite-element eigensolver for the exterior Robin problem on the truncated
// complement of a star-shaped domain. The complement is parametrized by the
// radial offset map x(theta, t) = (rho(theta) + t)(cos theta, sin theta) on a
// periodic-by-radial tensor grid, discretized with bilinear quadrilaterals,
// a lumped Robin line mass at t = 0, and a homogeneous Dirichlet cut at
// t = T. Dirichlet truncation keeps every computed level an upper bound for
// the corresponding exterior eigenvalue.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "robinext/disk_spectrum.hpp"
#include "robinext/geometry.hpp"
#include "robinext/trial_bounds.hpp"

namespace robinext {

struct MeshSpec {
  int n_theta = 128;     // even, >= 64
  int n_t = 64;          // >= 32
  double T = 12.0;       // truncation depth
  double grading = 1.05; // geometric stretch of the radial grid, in [1, 1.3]
};

struct FactorizationError : std::runtime_error {
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending, negative levels only
  int n_converged = 0;
  std::vector<double> residual_norms;
  MeshSpec mesh;
  double truncation_indicator = 0.0;  // worst mass fraction in the outer shell
  bool truncation_warning = false;
  double shift_used = 0.0;
  int iterations = 0;
  Eigen::MatrixXd vectors;  // M-normalized eigenvectors, one column per level
  std::vector<double> theta_nodes;
  std::vector<double> t_nodes;
};

struct AssembledSystem {
  // Reduced operators act on the free nodes (t < T); the full ones keep the
  // Dirichlet ring and exist for conservation checks on unconstrained fields.
  // The boundary line mass is assembled consistently (not lumped): the
  // discrete form then stays a true Galerkin restriction and every computed
  // level inherits the min-max upper-bound property, which nodal lumping
  // breaks at O(alpha h^2) for oscillatory traces.
  Eigen::SparseMatrix<double> stiffness;  // includes alpha times boundary mass
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> stiffness_full;
  Eigen::SparseMatrix<double> mass_full;
  Eigen::SparseMatrix<double> boundary_mass_full;  // line mass on t = 0, no alpha
  MeshSpec mesh;
  std::vector<double> theta_nodes;
  std::vector<double> t_nodes;
};

namespace detail {

inline void require_mesh(const MeshSpec& m) {
  if (m.n_theta < 64 || m.n_theta % 2 != 0)
    throw std::invalid_argument("mesh: n_theta must be an even integer >= 64");
  if (m.n_t < 32) throw std::invalid_argument("mesh: n_t must be >= 32");
  if (!(m.T > 0.0)) throw std::invalid_argument("mesh: truncation depth must be positive");
  if (!(m.grading >= 1.0 && m.grading <= 1.3))
    throw std::invalid_argument("mesh: grading must lie in [1, 1.3]");
}

inline std::vector<double> radial_nodes(const MeshSpec& m) {
  std::vector<double> t(static_cast<std::size_t>(m.n_t) + 1, 0.0);
  if (m.grading == 1.0) {
    for (int j = 0; j <= m.n_t; ++j) t[j] = m.T * j / m.n_t;
  } else {
    const double g = m.grading;
    double step = m.T * (g - 1.0) / (std::pow(g, m.n_t) - 1.0);
    for (int j = 1; j <= m.n_t; ++j) {
      t[j] = t[j - 1] + step;
      step *= g;
    }
    t[m.n_t] = m.T;
  }
  return t;
}

}  // namespace detail

inline AssembledSystem assemble(const DomainShape& shape, double alpha,
                                const MeshSpec& mesh) {
  detail::require_grid(shape);
  detail::require_mesh(mesh);

  const int nth = mesh.n_theta;
  const int nt = mesh.n_t;
  const double dtheta = 2.0 * std::numbers::pi / nth;

  AssembledSystem sys;
  sys.mesh = mesh;
  sys.t_nodes = detail::radial_nodes(mesh);
  sys.theta_nodes.resize(nth);
  for (int i = 0; i < nth; ++i) sys.theta_nodes[i] = dtheta * i;

  const int n_full = nth * (nt + 1);
  const int n_free = nth * nt;
  auto node = [nth](int i, int j) { return j * nth + i; };

  // 3-point Gauss on [-1, 1] in each direction.
  const double gq[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

  // rho and rho' at the angular quadrature points, shared by every radial row.
  std::vector<double> rho_q(static_cast<std::size_t>(nth) * 3);
  std::vector<double> drho_q(static_cast<std::size_t>(nth) * 3);
  for (int i = 0; i < nth; ++i)
    for (int q = 0; q < 3; ++q) {
      const double th = dtheta * (i + 0.5 * (1.0 + gq[q]));
      const RadialJet jet = rho_derivatives(shape, th);
      rho_q[3 * i + q] = jet.rho;
      drho_q[3 * i + q] = jet.drho;
    }

  std::vector<Eigen::Triplet<double>> k_trip, m_trip;
  k_trip.reserve(static_cast<std::size_t>(nth) * nt * 16);
  m_trip.reserve(static_cast<std::size_t>(nth) * nt * 16);

  double ke[4][4], me[4][4];
  for (int j = 0; j < nt; ++j) {
    const double t0 = sys.t_nodes[j];
    const double dt = sys.t_nodes[j + 1] - t0;
    for (int i = 0; i < nth; ++i) {
      const int ip = (i + 1) % nth;
      const int gl[4] = {node(i, j), node(ip, j), node(ip, j + 1), node(i, j + 1)};
      for (auto& row : ke) std::fill(row, row + 4, 0.0);
      for (auto& row : me) std::fill(row, row + 4, 0.0);

      for (int qa = 0; qa < 3; ++qa) {
        const double xi = gq[qa];
        const double rho = rho_q[3 * i + qa];
        const double drho = drho_q[3 * i + qa];
        for (int qb = 0; qb < 3; ++qb) {
          const double eta = gq[qb];
          const double t = t0 + dt * 0.5 * (1.0 + eta);
          const double r = rho + t;
          if (!(r > 0.0))
            throw std::runtime_error("assemble: singular map, rho(theta) + t <= 0");
          const double w = gw[qa] * gw[qb] * dtheta * dt * 0.25;

          // Bilinear shape values and their (theta, t) derivatives.
          double nval[4], dth[4], dtt[4];
          const double xm = 0.5 * (1.0 - xi), xp = 0.5 * (1.0 + xi);
          const double em = 0.5 * (1.0 - eta), ep = 0.5 * (1.0 + eta);
          nval[0] = xm * em; nval[1] = xp * em; nval[2] = xp * ep; nval[3] = xm * ep;
          dth[0] = -em / dtheta; dth[1] = em / dtheta;
          dth[2] = ep / dtheta; dth[3] = -ep / dtheta;
          dtt[0] = -xm / dt; dtt[1] = -xp / dt; dtt[2] = xp / dt; dtt[3] = xm / dt;

          const double ctt = (drho * drho + r * r) / r;
          for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
              const double grad = dth[a] * dth[b] / r -
                                  drho / r * (dth[a] * dtt[b] + dtt[a] * dth[b]) +
                                  ctt * dtt[a] * dtt[b];
              ke[a][b] += w * grad;
              me[a][b] += w * nval[a] * nval[b] * r;
            }
        }
      }
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
          k_trip.emplace_back(gl[a], gl[b], ke[a][b]);
          m_trip.emplace_back(gl[a], gl[b], me[a][b]);
          if (a != b) {
            k_trip.emplace_back(gl[b], gl[a], ke[a][b]);
            m_trip.emplace_back(gl[b], gl[a], me[a][b]);
          }
        }
    }
  }

  std::vector<Eigen::Triplet<double>> b_trip;
  b_trip.reserve(static_cast<std::size_t>(nth) * 4);
  for (int i = 0; i < nth; ++i) {
    const int ip = (i + 1) % nth;
    double be[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (int q = 0; q < 3; ++q) {
      const double th = dtheta * (i + 0.5 * (1.0 + gq[q]));
      const double sp = boundary_speed(shape, th);
      const double n0 = 0.5 * (1.0 - gq[q]), n1 = 0.5 * (1.0 + gq[q]);
      const double w = gw[q] * dtheta * 0.5 * sp;
      be[0][0] += w * n0 * n0;
      be[0][1] += w * n0 * n1;
      be[1][1] += w * n1 * n1;
    }
    b_trip.emplace_back(node(i, 0), node(i, 0), be[0][0]);
    b_trip.emplace_back(node(i, 0), node(ip, 0), be[0][1]);
    b_trip.emplace_back(node(ip, 0), node(i, 0), be[0][1]);
    b_trip.emplace_back(node(ip, 0), node(ip, 0), be[1][1]);
  }
  sys.boundary_mass_full.resize(n_full, n_full);
  sys.boundary_mass_full.setFromTriplets(b_trip.begin(), b_trip.end());
  for (const auto& e : b_trip) k_trip.emplace_back(e.row(), e.col(), alpha * e.value());

  sys.stiffness_full.resize(n_full, n_full);
  sys.mass_full.resize(n_full, n_full);
  sys.stiffness_full.setFromTriplets(k_trip.begin(), k_trip.end());
  sys.mass_full.setFromTriplets(m_trip.begin(), m_trip.end());

  // Dirichlet elimination: the t = T ring occupies the trailing indices, so
  // the free system is the leading principal block.
  auto free_part = [n_free](const std::vector<Eigen::Triplet<double>>& trip) {
    std::vector<Eigen::Triplet<double>> kept;
    kept.reserve(trip.size());
    for (const auto& e : trip)
      if (e.row() < n_free && e.col() < n_free) kept.push_back(e);
    Eigen::SparseMatrix<double> m(n_free, n_free);
    m.setFromTriplets(kept.begin(), kept.end());
    return m;
  };
  sys.stiffness = free_part(k_trip);
  sys.mass = free_part(m_trip);
  return sys;
}

// Smallest k levels of the generalized pencil (A, M) by shift-invert block
// subspace iteration: factor A - shift M once, iterate a block of k+3
// vectors with M-orthonormalization and Rayleigh-Ritz extraction. The block
// size and the cluster-agnostic stopping rule keep degenerate pairs honest.
// Nonnegative Ritz values are artifacts of the truncated continuum and are
// excluded from the report (and from the convergence requirement, since
// clustered continuum modes rotate freely without affecting the levels that
// matter).
inline EigenResult solve_lowest(const Eigen::SparseMatrix<double>& A,
                                const Eigen::SparseMatrix<double>& M, int k,
                                double shift, int max_iter = 2000) {
  if (k < 1) throw std::invalid_argument("solve_lowest: k must be >= 1");
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw std::invalid_argument("solve_lowest: matrix dimensions disagree");
  const int n = static_cast<int>(A.rows());
  const int block = std::min(n, k + 3);

  Eigen::SparseMatrix<double> S = A - shift * M;
  S.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(S);
  if (solver.info() != Eigen::Success)
    throw FactorizationError(
        "solve_lowest: factorization of the shifted operator failed; retry with "
        "shift * 1.5");

  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd V(n, block);
  V.col(0).setOnes();
  for (int c = 1; c < block; ++c)
    for (int i = 0; i < n; ++i) V(i, c) = unif(rng);

  Eigen::VectorXd ritz = Eigen::VectorXd::Zero(block);
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::infinity());
  Eigen::VectorXd resnorm = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::infinity());
  int iter = 0;
  bool done = false;
  for (; iter < max_iter && !done; ++iter) {
    Eigen::MatrixXd Y = solver.solve(M * V);

    // M-orthonormalize by symmetric whitening of the small Gram matrix; the
    // eigenvalue form tolerates near-dependent blocks better than Cholesky.
    Eigen::MatrixXd G = Y.transpose() * (M * Y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gw(0.5 * (G + G.transpose()));
    const double gmax = gw.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd inv_sqrt(block);
    for (int c = 0; c < block; ++c) {
      const double ev = gw.eigenvalues()[c];
      inv_sqrt[c] = ev > 1e-14 * gmax ? 1.0 / std::sqrt(ev) : 0.0;
    }
    Y = Y * gw.eigenvectors() * inv_sqrt.asDiagonal();

    Eigen::MatrixXd H = Y.transpose() * (A * Y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (H + H.transpose()));
    ritz = rr.eigenvalues();
    V = Y * rr.eigenvectors();

    Eigen::MatrixXd AV = A * V;
    Eigen::MatrixXd MV = M * V;
    // Only the negative Ritz values must settle: nonnegative ones sample the
    // truncated continuum, whose dense clusters rotate indefinitely, and they
    // are excluded from the report regardless. A floor on the iteration count
    // gives slow bound states time to surface below zero first.
    done = iter >= 40;
    for (int c = 0; c < std::min(k, block); ++c) {
      resnorm[c] = (AV.col(c) - ritz[c] * MV.col(c)).norm();
      if (!(ritz[c] < 0.0)) continue;
      const double change = std::abs(ritz[c] - prev[c]);
      const bool value_ok = change <= 1e-10 * std::abs(ritz[c]);
      const bool residual_ok = resnorm[c] <= 1e-9 * std::max(1.0, std::abs(ritz[c]));
      if (!(value_ok && residual_ok)) done = false;
    }
    prev = ritz;
  }
  if (!done)
    throw std::runtime_error(
        "solve_lowest: eigensolver failed to converge within the iteration budget");

  EigenResult res;
  res.shift_used = shift;
  res.iterations = iter;
  int count = 0;
  for (int c = 0; c < std::min(k, block); ++c)
    if (ritz[c] < 0.0) ++count;
  res.vectors.resize(n, count);
  for (int c = 0, out = 0; c < std::min(k, block); ++c) {
    if (!(ritz[c] < 0.0)) continue;
    res.eigenvalues.push_back(ritz[c]);
    res.residual_norms.push_back(resnorm[c]);
    res.vectors.col(out++) = V.col(c);
  }
  res.n_converged = count;
  return res;
}

// Default truncation depth: 40 decay lengths of the slowest relevant Bessel
// tail past the reference radius, using the second-level rate when it exists
// and the ground rate otherwise.
inline double default_truncation(double R_ref, double alpha) {
  const auto second = lambda2_disk(R_ref, alpha);
  const double rate = second ? second->root : lambda1_disk(R_ref, alpha).root;
  return R_ref + 40.0 / rate;
}

inline EigenResult eig_exterior(const DomainShape& shape, double alpha,
                                const MeshSpec& mesh, int k) {
  if (!(alpha < 0.0)) throw std::invalid_argument("eig_exterior: alpha must be negative");
  const AssembledSystem sys = assemble(shape, alpha, mesh);

  double shift = -1.1 * alpha * alpha - 1.0;
  EigenResult res;
  for (int attempt = 0;; ++attempt) {
    try {
      res = solve_lowest(sys.stiffness, sys.mass, k, shift);
      break;
    } catch (const FactorizationError&) {
      if (attempt >= 2) throw;
      shift *= 1.5;
    }
  }
  res.mesh = mesh;
  res.theta_nodes = sys.theta_nodes;
  res.t_nodes = sys.t_nodes;

  // Mass fraction of each eigenvector in the outer 10% radial shell; any
  // visible weight there means the Dirichlet cut is biting.
  const int nth = mesh.n_theta;
  const double t_shell = 0.9 * mesh.T;
  double worst = 0.0;
  for (int c = 0; c < res.vectors.cols(); ++c) {
    Eigen::VectorXd masked = res.vectors.col(c);
    for (int j = 0; j < mesh.n_t; ++j)
      if (sys.t_nodes[j] < t_shell)
        for (int i = 0; i < nth; ++i) masked[j * nth + i] = 0.0;
    worst = std::max(worst, masked.dot(sys.mass * masked));
  }
  res.truncation_indicator = worst;
  res.truncation_warning = worst > 1e-6;
  return res;
}

// Bilinear evaluator for a computed eigenvector in polar coordinates,
// suitable as the reference ground state of the trial-bound reports. Returns
// zero past the truncation ring and clamps hairline undershoot at t = 0.
inline GroundStateFn make_ground_state(const DomainShape& shape, const EigenResult& res,
                                       int which = 0) {
  if (which < 0 || which >= res.vectors.cols())
    throw std::invalid_argument("make_ground_state: eigenvector index out of range");
  if (res.theta_nodes.empty() || res.t_nodes.empty())
    throw std::invalid_argument("make_ground_state: result carries no grid");
  const Eigen::VectorXd vec = res.vectors.col(which);
  const std::vector<double> t_nodes = res.t_nodes;
  const int nth = res.mesh.n_theta;
  const int nt = res.mesh.n_t;
  DomainShape shp = shape;
  const double two_pi = 2.0 * std::numbers::pi;

  return [vec, t_nodes, nth, nt, shp, two_pi](double r, double theta) -> double {
    double t = r - rho_derivatives(shp, theta).rho;
    if (t < 0.0) {
      if (t < -1e-9) return 0.0;
      t = 0.0;
    }
    if (t >= t_nodes.back()) return 0.0;

    double th = std::fmod(theta, two_pi);
    if (th < 0.0) th += two_pi;
    const double dtheta = two_pi / nth;
    int i = static_cast<int>(th / dtheta);
    if (i >= nth) i = nth - 1;
    const double fx = th / dtheta - i;
    const int ip = (i + 1) % nth;

    const auto hi = std::upper_bound(t_nodes.begin(), t_nodes.end(), t);
    int j = static_cast<int>(hi - t_nodes.begin()) - 1;
    if (j < 0) j = 0;
    if (j >= nt) return 0.0;
    const double fy = (t - t_nodes[j]) / (t_nodes[j + 1] - t_nodes[j]);

    auto value = [&](int ii, int jj) -> double {
      return jj >= nt ? 0.0 : vec[jj * nth + ii];
    };
    return (1.0 - fx) * (1.0 - fy) * value(i, j) + fx * (1.0 - fy) * value(ip, j) +
           (1.0 - fx) * fy * value(i, j + 1) + fx * fy * value(ip, j + 1);
  };
}

struct ConvergenceStudy {
  std::vector<MeshSpec> meshes;
  std::vector<std::vector<double>> eigenvalues;  // one row per mesh
  std::vector<double> observed_order;            // per eigenvalue index
  std::vector<double> extrapolated;              // per eigenvalue index
};

inline ConvergenceStudy convergence_study(const DomainShape& shape, double alpha,
                                          const std::vector<MeshSpec>& ladder, int k) {
  if (ladder.size() < 3)
    throw std::invalid_argument("convergence_study: need at least three meshes");
  ConvergenceStudy st;
  st.meshes = ladder;
  for (const auto& mesh : ladder) {
    const EigenResult r = eig_exterior(shape, alpha, mesh, k);
    st.eigenvalues.push_back(r.eigenvalues);
  }
  std::size_t common = st.eigenvalues.front().size();
  for (const auto& row : st.eigenvalues) common = std::min(common, row.size());

  const auto& coarse = st.eigenvalues[st.eigenvalues.size() - 3];
  const auto& mid = st.eigenvalues[st.eigenvalues.size() - 2];
  const auto& fine = st.eigenvalues[st.eigenvalues.size() - 1];
  for (std::size_t idx = 0; idx < common; ++idx) {
    const double d1 = coarse[idx] - mid[idx];
    const double d2 = mid[idx] - fine[idx];
    double order = 2.0;
    if (std::abs(d2) > 1e-14 * std::abs(fine[idx]) && d1 / d2 > 0.0)
      order = std::log2(std::abs(d1) / std::abs(d2));
    st.observed_order.push_back(order);
    const double p = std::clamp(order, 0.5, 4.0);
    st.extrapolated.push_back(fine[idx] + (fine[idx] - mid[idx]) / (std::pow(2.0, p) - 1.0));
  }
  return st;
}

// Coordinate text dump, one `row col value` triplet per line, 0-based.
inline void dump_matrix(std::ostream& out, const Eigen::SparseMatrix<double>& m) {
  out.precision(17);
  for (int outer = 0; outer < m.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, outer); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace robinext
