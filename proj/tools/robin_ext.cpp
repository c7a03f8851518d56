// robin_ext: command-line driver for the exterior Robin spectrum toolkit.
//
// Subcommands: disk (closed-form disk spectrum), shape-info (geometry and
// inequality report), bound (variational certificates), eig (finite-element
// spectrum), sweep (batch experiments from a spec file), verify (acceptance
// suite). Shapes travel as plain text files; see the README for formats.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "robinext/verify.hpp"

namespace {

using namespace robinext;

std::string g17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

void print_kv(const char* key, const std::string& value) {
  std::printf("%-22s %s\n", key, value.c_str());
}
void print_kv(const char* key, double value) { print_kv(key, g17(value)); }

// Line-aware counterpart of read_shape: same grammar, errors carry the file
// name and one-based line number.
DomainShape read_shape_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  auto fail = [&path](std::size_t lineno, const std::string& msg) -> std::runtime_error {
    return std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  std::size_t at = 0;
  auto next_tokens = [&](int want, const char* what) {
    std::vector<double> vals;
    if (at >= lines.size()) throw fail(lines.size() + 1, std::string("expected ") + what);
    std::istringstream ls(lines[at]);
    double v = 0.0;
    while (ls >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != want || !ls.eof())
      throw fail(at + 1, std::string("expected ") + what);
    ++at;
    return vals;
  };

  DomainShape s;
  const std::vector<double> head = next_tokens(2, "header 'K n_samples'");
  const int K = static_cast<int>(head[0]);
  if (K < 0 || head[0] != K) throw fail(1, "harmonic count must be a nonnegative integer");
  s.n_samples = static_cast<int>(head[1]);
  s.a0 = next_tokens(1, "mean radius a0")[0];
  for (int k = 0; k < K; ++k) {
    const std::vector<double> ab = next_tokens(2, "'a_k b_k' pair");
    s.cos_coeffs.push_back(ab[0]);
    s.sin_coeffs.push_back(ab[1]);
  }
  for (std::size_t extra = at; extra < lines.size(); ++extra) {
    std::istringstream ls(lines[extra]);
    std::string tok;
    if (ls >> tok) throw fail(extra + 1, "unexpected trailing content");
  }
  try {
    summarize(s);  // runs full validation
  } catch (const std::exception& e) {
    throw fail(1, e.what());
  }
  return s;
}

void append_csv_row(const std::string& path, const std::string& header,
                    const std::string& row) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open csv file " + path);
  if (fresh) out << "# schema=1\n" << header << "\n";
  out << row << "\n";
}

int cmd_disk(double R, double alpha, const std::string& csv) {
  const DiskSpectrum s = disk_spectrum_full(R, alpha);
  print_kv("radius", s.radius);
  print_kv("alpha", s.alpha);
  print_kv("xi", s.xi);
  print_kv("omega", s.omega ? g17(*s.omega) : "none");
  print_kv("lambda1", s.lambda1());
  print_kv("lambda2", s.lambda2() ? g17(*s.lambda2()) : "none");
  print_kv("alpha_star", critical_coupling_disk(R));
  print_kv("n_star", std::to_string(s.n_star));
  print_kv("N_alpha", std::to_string(s.negative_count()));
  if (s.n_star >= 2) {
    std::string fibers;
    for (const auto& [n, lam] : s.fiber_values) {
      if (n < 2) continue;
      if (!fibers.empty()) fibers += ", ";
      fibers += g17(lam);
    }
    print_kv("deeper_fibers", fibers);
  }
  if (!csv.empty()) {
    append_csv_row(csv, "radius,alpha,xi,omega,lambda1,lambda2,alpha_star,n_star,N_alpha",
                   g17(R) + "," + g17(alpha) + "," + g17(s.xi) + "," +
                       (s.omega ? g17(*s.omega) : "") + "," + g17(s.lambda1()) + "," +
                       (s.lambda2() ? g17(*s.lambda2()) : "") + "," +
                       g17(critical_coupling_disk(R)) + "," + std::to_string(s.n_star) + "," +
                       std::to_string(s.negative_count()));
  }
  return 0;
}

int cmd_shape_info(const std::string& file) {
  constexpr double pi = std::numbers::pi;
  const DomainShape s = read_shape_file(file);
  const GeometrySummary g = summarize(s);
  print_kv("perimeter", g.perimeter);
  print_kv("area", g.area);
  print_kv("elastic_energy", g.elastic_energy);
  print_kv("total_curvature", g.total_curvature);
  print_kv("min_rho", g.min_rho);
  print_kv("max_rho", g.max_rho);
  print_kv("max_curvature", g.max_curvature);
  print_kv("convex", g.convex ? "yes" : "no");
  print_kv("centrally_symmetric", g.centrally_symmetric ? "yes" : "no");
  print_kv("R_matched_area", matched_disk_radius(s, MatchConstraint::area));
  print_kv("R_matched_perimeter", matched_disk_radius(s, MatchConstraint::perimeter));
  print_kv("R_matched_elastic", matched_disk_radius(s, MatchConstraint::elastic));

  const CriticalCouplingBounds cc = critical_coupling_bounds(s);
  print_kv("alpha_star_inscribed", cc.from_inscribed ? g17(*cc.from_inscribed) : "n/a");
  print_kv("alpha_star_elastic", cc.from_elastic ? g17(*cc.from_elastic) : "n/a");
  print_kv("alpha_star_inradius", cc.from_inradius ? g17(*cc.from_inradius) : "n/a");

  if (g.convex) {
    const bool gage = g.elastic_energy >= pi * g.perimeter / (2.0 * g.area) * (1.0 - 1e-12);
    std::printf("gage_inequality        %s  (E = %.12g vs pi L / 2A = %.12g)\n",
                gage ? "PASS" : "FAIL", g.elastic_energy, pi * g.perimeter / (2.0 * g.area));
  } else {
    print_kv("gage_inequality", "not applicable (nonconvex)");
  }
  const bool bh =
      g.elastic_energy * g.elastic_energy * g.area >= pi * pi * pi * (1.0 - 1e-12);
  std::printf("bh_inequality          %s  (E^2 A = %.12g vs pi^3 = %.12g)\n",
              bh ? "PASS" : "FAIL", g.elastic_energy * g.elastic_energy * g.area,
              pi * pi * pi);
  return 0;
}

int cmd_bound(const std::string& file, double alpha, const std::string& mode,
              std::optional<double> radius, const std::string& csv) {
  const DomainShape s = read_shape_file(file);
  if (mode == "monotonicity") {
    const double R = radius ? *radius : min_rho(s);
    TrialBoundReport rep;
    try {
      rep = monotonicity_bound(s, R, alpha);
    } catch (const HypothesisError& e) {
      std::printf("hypothesis violation: %s\n", e.what());
      return 3;
    }
    print_kv("mode", "monotonicity");
    print_kv("alpha", rep.alpha);
    print_kv("disk_radius", rep.disk_radius);
    print_kv("lambda2_disk", rep.lambda2_disk);
    print_kv("omega", rep.omega);
    print_kv("gamma_omega", rep.gamma_omega);
    print_kv("branch", rep.chosen_branch == TrialBranch::cos_branch ? "cos" : "sin");
    print_kv("boundary_term", rep.boundary_term);
    print_kv("estimate1", rep.estimate1);
    print_kv("estimate2", rep.estimate2);
    print_kv("trial_norm_sq", rep.trial_norm_sq);
    print_kv("upper_bound", rep.upper_bound);
    std::printf("orthogonality          %.3e %.3e %.3e  (vs %s ground state)\n",
                rep.orthogonality_residuals[0], rep.orthogonality_residuals[1],
                rep.orthogonality_residuals[2], rep.ground_state_source.c_str());
    print_kv("flags", encode_flags(rep.hypothesis_flags));
    if (rep.upper_bound < rep.lambda2_disk)
      std::printf("certificate            lambda2(shape) <= %.12g < %.12g = lambda2(disk)\n",
                  rep.upper_bound, rep.lambda2_disk);
    if (!csv.empty())
      append_csv_row(csv, "mode,file,alpha,disk_radius,lambda2_disk,bound,margin,flags",
                     "monotonicity," + file + "," + g17(alpha) + "," + g17(R) + "," +
                         g17(rep.lambda2_disk) + "," + g17(rep.upper_bound) + "," +
                         g17(rep.boundary_term) + "," + encode_flags(rep.hypothesis_flags));
  } else if (mode == "isoelastic") {
    IsoelasticReport rep;
    try {
      rep = isoelastic_rayleigh(s, alpha);
    } catch (const HypothesisError& e) {
      std::printf("hypothesis violation: %s\n", e.what());
      return 3;
    }
    print_kv("mode", "isoelastic");
    print_kv("alpha", rep.alpha);
    print_kv("disk_radius", rep.disk_radius);
    print_kv("perimeter", rep.perimeter);
    print_kv("elastic_energy", rep.elastic_energy);
    print_kv("rayleigh_u", rep.rayleigh_u);
    print_kv("rayleigh_v", rep.rayleigh_v);
    print_kv("rayleigh_v_surrogate", rep.rayleigh_v_surrogate);
    print_kv("lambda1_disk", rep.lambda1_disk);
    print_kv("lambda2_disk", rep.lambda2_disk);
    print_kv("jensen_margin", rep.jensen_margin);
    std::printf("orthogonality          %.3e %.3e %.3e\n", rep.orthogonality_residuals[0],
                rep.orthogonality_residuals[1], rep.orthogonality_residuals[2]);
    print_kv("flags", encode_flags(rep.hypothesis_flags));
    if (std::max(rep.rayleigh_u, rep.rayleigh_v) < rep.lambda2_disk)
      std::printf("certificate            lambda2(shape) <= %.12g < %.12g = lambda2(disk)\n",
                  std::max(rep.rayleigh_u, rep.rayleigh_v), rep.lambda2_disk);
    if (!csv.empty())
      append_csv_row(csv, "mode,file,alpha,disk_radius,lambda2_disk,bound,margin,flags",
                     "isoelastic," + file + "," + g17(alpha) + "," + g17(rep.disk_radius) +
                         "," + g17(rep.lambda2_disk) + "," +
                         g17(std::max(rep.rayleigh_u, rep.rayleigh_v)) + "," +
                         g17(rep.jensen_margin) + "," + encode_flags(rep.hypothesis_flags));
  } else {
    std::fprintf(stderr, "unknown mode '%s' (monotonicity|isoelastic)\n", mode.c_str());
    return 2;
  }
  return 0;
}

int cmd_eig(const std::string& file, double alpha, int n_theta, int n_t,
            const std::string& T_flag, double grading, int k, bool study,
            const std::string& dump_prefix) {
  const DomainShape s = read_shape_file(file);
  MeshSpec mesh{n_theta, n_t, 0.0, grading};
  if (T_flag == "auto") {
    mesh.T = default_truncation(matched_disk_radius(s, MatchConstraint::area), alpha);
  } else {
    mesh.T = std::stod(T_flag);
  }
  print_kv("mesh", std::to_string(mesh.n_theta) + " x " + std::to_string(mesh.n_t) +
                       ", T = " + g17(mesh.T) + ", grading = " + g17(mesh.grading));

  if (!dump_prefix.empty()) {
    const AssembledSystem sys = assemble(s, alpha, mesh);
    std::ofstream ka(dump_prefix + "_stiffness.txt"), ma(dump_prefix + "_mass.txt");
    dump_matrix(ka, sys.stiffness);
    dump_matrix(ma, sys.mass);
    std::printf("matrices dumped to %s_{stiffness,mass}.txt\n", dump_prefix.c_str());
  }

  if (study) {
    // resolution ladder: each rung doubles both directions; the grading is
    // re-profiled (n_t log g held fixed) so every radial cell halves
    std::vector<MeshSpec> ladder;
    const double c = mesh.n_t * std::log(mesh.grading);
    for (int rung = 0; rung < 3; ++rung) {
      const int f = 1 << rung;
      ladder.push_back(MeshSpec{mesh.n_theta * f, mesh.n_t * f, mesh.T,
                                std::exp(c / (mesh.n_t * f))});
    }
    const ConvergenceStudy st = convergence_study(s, alpha, ladder, k);
    for (std::size_t m = 0; m < st.meshes.size(); ++m) {
      std::printf("rung %zu (%d x %d):", m, st.meshes[m].n_theta, st.meshes[m].n_t);
      for (double v : st.eigenvalues[m]) std::printf(" %.12g", v);
      std::printf("\n");
    }
    std::printf("observed order:");
    for (double p : st.observed_order) std::printf(" %.2f", p);
    std::printf("\nextrapolated:  ");
    for (double v : st.extrapolated) std::printf(" %.12g", v);
    std::printf("\n");
    return 0;
  }

  EigenResult r;
  try {
    r = eig_exterior(s, alpha, mesh, k);
  } catch (const FactorizationError& e) {
    std::fprintf(stderr, "%s\nhint: pass a deeper truncation (--T) or rerun; the solver "
                         "already retries with an enlarged shift\n", e.what());
    return 4;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "%s\nhint: try a finer mesh (--n-theta/--n-t), a deeper "
                         "truncation (--T), or fewer pairs (--k)\n", e.what());
    return 4;
  }

  const bool pure_disk = [&s] {
    for (double v : s.cos_coeffs) if (v != 0.0) return false;
    for (double v : s.sin_coeffs) if (v != 0.0) return false;
    return true;
  }();
  std::optional<DiskSpectrum> exact;
  if (pure_disk) exact = disk_spectrum_full(s.a0, alpha);
  std::vector<double> exact_list;
  if (exact) exact_list = exact->eigenvalues_with_multiplicity();

  std::printf("%-4s %-24s %-12s", "k", "lambda", "residual");
  if (exact) std::printf(" %-24s %-10s", "exact", "rel err");
  std::printf("\n");
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    std::printf("%-4zu %-24.17g %-12.3e", i + 1, r.eigenvalues[i], r.residual_norms[i]);
    if (exact && i < exact_list.size())
      std::printf(" %-24.17g %-10.2e", exact_list[i],
                  (r.eigenvalues[i] - exact_list[i]) / std::abs(exact_list[i]));
    std::printf("\n");
  }
  print_kv("converged", std::to_string(r.n_converged));
  print_kv("iterations", std::to_string(r.iterations));
  print_kv("truncation_indicator", r.truncation_indicator);
  if (r.truncation_warning)
    std::printf("warning: outer-shell mass fraction above 1e-6; deepen --T\n");
  return 0;
}

int cmd_sweep(const std::string& spec_file, const std::string& manifest_file, int jobs) {
  SweepSpec spec;
  if (!manifest_file.empty()) {
    std::ifstream in(manifest_file);
    if (!in) throw std::runtime_error("cannot open manifest " + manifest_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    spec = spec_from_manifest(ss.str());
  } else {
    std::ifstream in(spec_file);
    if (!in) throw std::runtime_error("cannot open spec " + spec_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    spec = parse_sweep_spec(ss.str());
  }

  const SweepOutcome out = run_sweep(spec, resolve_jobs(jobs));
  std::printf("rows: %zu\ncsv: %s\nmanifest: %s\n", out.rows.size(), out.csv_path.c_str(),
              out.manifest_path.c_str());
  if (!out.svg_path.empty()) std::printf("chart: %s\n", out.svg_path.c_str());
  int errors = 0;
  for (const SweepRow& r : out.rows)
    if (r.note.rfind("error:", 0) == 0) ++errors;
  if (errors > 0) std::printf("rows with solver errors: %d (see notes in csv flags)\n", errors);
  if (out.theorem_violations > 0) {
    std::printf("THEOREM VIOLATIONS: %d\n", out.theorem_violations);
    for (const std::string& n : out.violation_notes) std::printf("  %s\n", n.c_str());
    return 1;
  }
  std::printf("no theorem-covered row has a nonnegative difference\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exterior Robin spectrum toolkit"};
  app.require_subcommand(1);

  // disk
  double radius = 1.0, alpha = -2.0;
  std::string csv;
  CLI::App* disk = app.add_subcommand("disk", "closed-form spectrum of the disk complement");
  disk->add_option("--radius,-R", radius, "disk radius")->required();
  disk->add_option("--alpha,-a", alpha, "boundary coupling (negative)")->required();
  disk->add_option("--csv", csv, "append a machine-readable row to this file");

  // shape-info
  std::string shape_file;
  CLI::App* info = app.add_subcommand("shape-info", "geometry and inequality report");
  info->add_option("file", shape_file, "shape file")->required();

  // bound
  std::string bound_file, bound_mode = "monotonicity", bound_csv;
  double bound_alpha = -2.0;
  std::optional<double> bound_radius;
  CLI::App* bound = app.add_subcommand("bound", "variational upper-bound certificates");
  bound->add_option("file", bound_file, "shape file")->required();
  bound->add_option("--alpha,-a", bound_alpha, "boundary coupling (negative)")->required();
  bound->add_option("--mode,-m", bound_mode, "monotonicity|isoelastic");
  bound->add_option("--radius,-R", bound_radius,
                    "comparison disk radius (monotonicity mode; default: inscribed)");
  bound->add_option("--csv", bound_csv, "append a machine-readable row to this file");

  // eig
  std::string eig_file, eig_T = "auto", dump_prefix;
  double eig_alpha = -2.0, eig_grading = 1.05;
  int n_theta = 128, n_t = 64, eig_k = 3;
  bool study = false;
  CLI::App* eig = app.add_subcommand("eig", "finite-element spectrum of a shape complement");
  eig->add_option("file", eig_file, "shape file")->required();
  eig->add_option("--alpha,-a", eig_alpha, "boundary coupling (negative)")->required();
  eig->add_option("--n-theta", n_theta, "angular cells (even, >= 64)");
  eig->add_option("--n-t", n_t, "radial cells (>= 32)");
  eig->add_option("--T", eig_T, "truncation depth, or 'auto' for the decay-based default");
  eig->add_option("--grading", eig_grading, "radial stretch factor in [1, 1.3]");
  eig->add_option("--k", eig_k, "number of requested pairs");
  eig->add_flag("--study", study, "run a three-rung resolution ladder instead");
  eig->add_option("--dump-matrix", dump_prefix,
                  "debug: write stiffness/mass as 'row col value' triplets");

  // sweep
  std::string sweep_spec, sweep_manifest;
  int jobs = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "batch experiments from a spec file");
  sweep->add_option("--spec,-s", sweep_spec, "sweep spec file");
  sweep->add_option("--from-manifest", sweep_manifest, "re-run from a manifest");
  sweep->add_option("--jobs,-j", jobs,
                    "worker count (default: ROBIN_EXT_JOBS or hardware)");

  // verify
  bool quick = false, inject = false;
  std::string only_list, out_dir;
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_flag("--quick", quick, "trim solver-heavy parts; finishes in seconds");
  verify->add_option("--only", only_list, "comma-separated criterion ids");
  verify->add_option("--out-dir", out_dir, "directory for sweep artifacts");
  verify->add_flag("--inject-bessel-error", inject, "negative control: must turn criterion 1 red")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (disk->parsed()) return cmd_disk(radius, alpha, csv);
    if (info->parsed()) return cmd_shape_info(shape_file);
    if (bound->parsed())
      return cmd_bound(bound_file, bound_alpha, bound_mode, bound_radius, bound_csv);
    if (eig->parsed())
      return cmd_eig(eig_file, eig_alpha, n_theta, n_t, eig_T, eig_grading, eig_k, study,
                     dump_prefix);
    if (sweep->parsed()) {
      if (sweep_spec.empty() == sweep_manifest.empty()) {
        std::fprintf(stderr, "sweep: pass exactly one of --spec or --from-manifest\n");
        return 2;
      }
      return cmd_sweep(sweep_spec, sweep_manifest, jobs);
    }
    if (verify->parsed()) {
      robinext::AcceptanceOptions opt;
      opt.quick = quick;
      opt.perturb_bessel = inject;
      opt.work_dir = out_dir;
      for (const char* p = only_list.c_str(); *p;) {
        char* end = nullptr;
        const long id = std::strtol(p, &end, 10);
        if (end == p) break;
        opt.only.push_back(static_cast<int>(id));
        p = *end == ',' ? end + 1 : end;
      }
      const auto results = robinext::run_acceptance(opt);
      robinext::print_scoreboard(std::cout, results);
      return robinext::acceptance_passed(results) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
