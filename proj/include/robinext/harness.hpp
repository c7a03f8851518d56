// Sweep orchestration: a flat text spec describes a family of shapes, a
// matching constraint, a coupling grid, and the solvers to run; the harness
// executes the (shape, alpha) grid over a worker pool and persists a
// deterministic CSV, a re-runnable manifest, and a self-contained SVG chart.
//
// Spec grammar (documented in the README): `[section]` headers over
// `key = value` lines, `#` or `;` starting a comment line.
//
//   [family]  kind = cos2k-perturbation | coefficient-list | file
//             k = <int>                       (cos2k: harmonic is 2k)
//             eps_list = 0, 0.05, 0.1          or eps_min/eps_max/eps_step
//             shape.<id> = a0 : a1,b1 : ...    (coefficient-list)
//             path = <shape file>              (file; repeatable)
//   [sweep]   constraint = area|perimeter|elastic|inclusion
//             target_radius = <len>   alphas = <list>
//             solvers = exact-disk, trial-bound, fem
//             output_dir = <dir>
//   [mesh]    n_theta, n_t, T (= auto for the decay-based default), grading

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "robinext/disk_spectrum.hpp"
#include "robinext/exterior_eig.hpp"
#include "robinext/geometry.hpp"
#include "robinext/trial_bounds.hpp"

namespace robinext {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepConstraint { area, perimeter, elastic, inclusion };

inline const char* constraint_name(SweepConstraint c) {
  switch (c) {
    case SweepConstraint::area: return "area";
    case SweepConstraint::perimeter: return "perimeter";
    case SweepConstraint::elastic: return "elastic";
    case SweepConstraint::inclusion: return "inclusion";
  }
  return "?";
}

namespace detail {

// Compact SHA-256, used to fingerprint sweep specs in manifests.
class Sha256 {
 public:
  Sha256() { reset(); }
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    total_ += len;
    while (len > 0) {
      const std::size_t take = std::min(len, std::size_t{64} - fill_);
      std::memcpy(buf_ + fill_, p, take);
      fill_ += take;
      p += take;
      len -= take;
      if (fill_ == 64) {
        block(buf_);
        fill_ = 0;
      }
    }
  }
  std::string hex_digest() {
    const std::uint64_t bits = total_ * 8;
    std::uint8_t pad = 0x80;
    update(&pad, 1);
    const std::uint8_t zero = 0;
    while (fill_ != 56) update(&zero, 1);
    std::uint8_t lenb[8];
    for (int i = 0; i < 8; ++i) lenb[i] = static_cast<std::uint8_t>(bits >> (8 * (7 - i)));
    update(lenb, 8);
    char out[65];
    for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h_[i]);
    return std::string(out, 64);
  }

 private:
  void reset() {
    static constexpr std::uint32_t init[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                              0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::copy(init, init + 8, h_);
    fill_ = 0;
    total_ = 0;
  }
  static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }
  void block(const std::uint8_t* p) {
    static constexpr std::uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
             (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3];
    std::uint32_t e = h_[4], f = h_[5], g = h_[6], h = h_[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      h = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    h_[0] += a; h_[1] += b; h_[2] += c; h_[3] += d;
    h_[4] += e; h_[5] += f; h_[6] += g; h_[7] += h;
  }
  std::uint32_t h_[8];
  std::uint8_t buf_[64];
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

inline std::string sha256_hex(const std::string& text) {
  Sha256 s;
  s.update(text.data(), text.size());
  return s.hex_digest();
}

inline std::string g17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

inline std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trimmed(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("sweep spec: bad ") + what + " entry '" + tok + "'");
    }
    if (used != tok.size())
      throw std::runtime_error(std::string("sweep spec: bad ") + what + " entry '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

struct SweepSpec {
  std::string family;  // cos2k-perturbation | coefficient-list | file
  int cos_harmonic = 2;
  std::vector<double> eps_values;
  std::vector<std::pair<std::string, DomainShape>> listed_shapes;

  SweepConstraint constraint = SweepConstraint::area;
  double target_radius = 1.0;
  std::vector<double> alpha_grid;
  bool use_exact = true;
  bool use_trial = true;
  bool use_fem = false;

  MeshSpec mesh{128, 64, 12.0, 1.05};
  bool mesh_auto_T = true;
  std::string output_dir = "sweep-out";
  std::string raw_text;  // verbatim spec, embedded in the manifest
};

// One prepared work unit: the shape after constraint normalization, with the
// radius of its comparison disk.
struct SweepShape {
  std::string id;
  double eps = 0.0;
  DomainShape shape;
  double matched_radius = 0.0;
};

struct SweepRow {
  std::string shape_id;
  double eps = 0.0;
  double perimeter = 0.0, area = 0.0, elastic = 0.0;
  SweepConstraint constraint = SweepConstraint::area;
  double matched_radius = 0.0;
  double alpha = 0.0;
  std::optional<double> lambda2_trial;
  std::optional<double> lambda2_fem;
  std::optional<double> lambda2_disk;
  std::optional<double> diff;  // designated solver minus matched disk
  HypothesisFlags flags;
  bool theorem_applicable = false;
  std::string note;
};

inline std::string encode_flags(const HypothesisFlags& f) {
  std::string s;
  s += f.star_shaped ? 'S' : '-';
  s += f.centrally_symmetric ? 'C' : '-';
  s += f.contains_disk ? 'I' : '-';
  s += f.convex ? 'V' : '-';
  s += f.elastic_match ? 'E' : '-';
  return s;
}

inline SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec spec;
  spec.raw_text = text;

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  std::vector<std::tuple<std::string, std::string, std::string, int>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trimmed(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error("sweep spec:" + std::to_string(lineno) + ": unterminated section header");
      section = detail::trimmed(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("sweep spec:" + std::to_string(lineno) + ": expected 'key = value'");
    entries.emplace_back(section, detail::trimmed(t.substr(0, eq)),
                         detail::trimmed(t.substr(eq + 1)), lineno);
  }

  std::optional<double> eps_min, eps_max, eps_step;
  for (const auto& [sec, key, value, ln] : entries) {
    auto fail = [&](const std::string& msg) -> std::runtime_error {
      return std::runtime_error("sweep spec:" + std::to_string(ln) + ": " + msg);
    };
    if (sec == "family") {
      if (key == "kind") spec.family = value;
      else if (key == "k") spec.cos_harmonic = 2 * std::stoi(value);
      else if (key == "eps_list") spec.eps_values = detail::parse_doubles(value, "eps");
      else if (key == "eps_min") eps_min = std::stod(value);
      else if (key == "eps_max") eps_max = std::stod(value);
      else if (key == "eps_step") eps_step = std::stod(value);
      else if (key.rfind("shape.", 0) == 0) {
        DomainShape s;
        const std::vector<std::string> groups = detail::split(value, ':');
        if (groups.empty()) throw fail("empty shape definition");
        s.a0 = std::stod(groups[0]);
        for (std::size_t g = 1; g < groups.size(); ++g) {
          const std::vector<double> ab = detail::parse_doubles(groups[g], "coefficient");
          if (ab.size() != 2) throw fail("each harmonic group needs 'a_k, b_k'");
          s.cos_coeffs.push_back(ab[0]);
          s.sin_coeffs.push_back(ab[1]);
        }
        spec.listed_shapes.emplace_back(key.substr(6), s);
      } else if (key == "path") {
        std::ifstream f(value);
        if (!f) throw fail("cannot open shape file '" + value + "'");
        DomainShape s = read_shape(f);
        spec.listed_shapes.emplace_back(std::filesystem::path(value).stem().string(), s);
      } else throw fail("unknown family key '" + key + "'");
    } else if (sec == "sweep") {
      if (key == "constraint") {
        if (value == "area") spec.constraint = SweepConstraint::area;
        else if (value == "perimeter") spec.constraint = SweepConstraint::perimeter;
        else if (value == "elastic") spec.constraint = SweepConstraint::elastic;
        else if (value == "inclusion") spec.constraint = SweepConstraint::inclusion;
        else throw fail("unknown constraint '" + value + "'");
      } else if (key == "target_radius") spec.target_radius = std::stod(value);
      else if (key == "alphas") spec.alpha_grid = detail::parse_doubles(value, "alpha");
      else if (key == "solvers") {
        spec.use_exact = spec.use_trial = spec.use_fem = false;
        for (const std::string& s : detail::split(value, ',')) {
          if (s == "exact-disk") spec.use_exact = true;
          else if (s == "trial-bound") spec.use_trial = true;
          else if (s == "fem") spec.use_fem = true;
          else throw fail("unknown solver '" + s + "'");
        }
      } else if (key == "output_dir") spec.output_dir = value;
      else throw fail("unknown sweep key '" + key + "'");
    } else if (sec == "mesh") {
      if (key == "n_theta") spec.mesh.n_theta = std::stoi(value);
      else if (key == "n_t") spec.mesh.n_t = std::stoi(value);
      else if (key == "T") {
        if (value == "auto") spec.mesh_auto_T = true;
        else { spec.mesh_auto_T = false; spec.mesh.T = std::stod(value); }
      } else if (key == "grading") spec.mesh.grading = std::stod(value);
      else throw fail("unknown mesh key '" + key + "'");
    } else {
      throw fail("unknown section '" + sec + "'");
    }
  }

  if (spec.family == "cos2k-perturbation" && spec.eps_values.empty()) {
    if (!eps_min || !eps_max || !eps_step || !(*eps_step > 0))
      throw std::runtime_error("sweep spec: cos2k family needs eps_list or eps_min/max/step");
    for (double e = *eps_min; e <= *eps_max + 1e-12; e += *eps_step)
      spec.eps_values.push_back(e);
  }
  if (spec.family.empty()) throw std::runtime_error("sweep spec: missing family kind");
  if (spec.alpha_grid.empty()) throw std::runtime_error("sweep spec: alpha grid must be nonempty");
  for (double a : spec.alpha_grid)
    if (!(a < 0.0)) throw std::runtime_error("sweep spec: couplings must be negative");
  if (!spec.use_exact && !spec.use_trial && !spec.use_fem)
    throw std::runtime_error("sweep spec: at least one solver required");
  return spec;
}

// Builds the normalized shape list. Area/perimeter/elastic constraints
// rescale each shape so its matched disk has the target radius; the
// inclusion constraint leaves the shape alone and compares against the
// largest centered inscribed disk.
inline std::vector<SweepShape> sweep_shapes(const SweepSpec& spec) {
  std::vector<std::pair<std::string, DomainShape>> raw;
  std::vector<double> eps_of;
  if (spec.family == "cos2k-perturbation") {
    if (spec.cos_harmonic < 2 || spec.cos_harmonic % 2 != 0)
      throw std::runtime_error("sweep spec: cos2k harmonic must be an even integer >= 2");
    for (double e : spec.eps_values) {
      DomainShape s;
      s.a0 = 1.0;
      s.cos_coeffs.assign(spec.cos_harmonic, 0.0);
      s.sin_coeffs.assign(spec.cos_harmonic, 0.0);
      s.cos_coeffs.back() = e;
      char id[64];
      std::snprintf(id, sizeof id, "cos%d_eps%g", spec.cos_harmonic, e);
      raw.emplace_back(id, s);
      eps_of.push_back(e);
    }
  } else if (spec.family == "coefficient-list" || spec.family == "file") {
    raw = spec.listed_shapes;
    eps_of.assign(raw.size(), 0.0);
    if (raw.empty()) throw std::runtime_error("sweep spec: family lists no shapes");
  } else {
    throw std::runtime_error("sweep spec: unknown family kind '" + spec.family + "'");
  }

  std::vector<SweepShape> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    SweepShape item;
    item.id = raw[i].first;
    item.eps = eps_of[i];
    if (spec.constraint == SweepConstraint::inclusion) {
      item.shape = raw[i].second;
      item.matched_radius = min_rho(item.shape);
    } else {
      const MatchConstraint mc = spec.constraint == SweepConstraint::area ? MatchConstraint::area
                                 : spec.constraint == SweepConstraint::perimeter
                                     ? MatchConstraint::perimeter
                                     : MatchConstraint::elastic;
      item.shape = normalize(raw[i].second, mc, spec.target_radius);
      item.matched_radius = spec.target_radius;
    }
    if (!(min_rho(item.shape) > 0.0))
      throw std::runtime_error("sweep spec: shape '" + item.id +
                               "' loses positivity after normalization");
    out.push_back(std::move(item));
  }
  return out;
}

inline SweepRow compute_sweep_row(const SweepSpec& spec, const SweepShape& item, double alpha) {
  SweepRow row;
  row.shape_id = item.id;
  row.eps = item.eps;
  row.constraint = spec.constraint;
  row.matched_radius = item.matched_radius;
  row.alpha = alpha;

  const GeometrySummary g = summarize(item.shape);
  row.perimeter = g.perimeter;
  row.area = g.area;
  row.elastic = g.elastic_energy;
  row.flags = detail::shape_flags(item.shape, item.matched_radius);

  auto append_note = [&row](const std::string& s) {
    if (!row.note.empty()) row.note += "; ";
    row.note += s;
  };

  if (spec.use_exact || spec.use_trial || spec.use_fem) {
    const auto disk2 = lambda2_disk(item.matched_radius, alpha);
    if (disk2) row.lambda2_disk = disk2->lambda;
    else append_note("matched disk has no second level at this coupling");
  }

  if (spec.use_trial) {
    try {
      if (spec.constraint == SweepConstraint::elastic) {
        const IsoelasticReport rep = isoelastic_rayleigh(item.shape, alpha);
        row.lambda2_trial = std::max(rep.rayleigh_u, rep.rayleigh_v);
      } else {
        const TrialBoundReport rep =
            monotonicity_bound(item.shape, item.matched_radius, alpha, {}, false);
        row.lambda2_trial = rep.upper_bound;
      }
    } catch (const HypothesisError& e) {
      append_note(std::string("trial: ") + e.what());
    }
  }

  if (spec.use_fem) {
    try {
      MeshSpec mesh = spec.mesh;
      if (spec.mesh_auto_T) mesh.T = default_truncation(item.matched_radius, alpha);
      const EigenResult r = eig_exterior(item.shape, alpha, mesh, 3);
      if (r.eigenvalues.size() >= 2) row.lambda2_fem = r.eigenvalues[1];
      else append_note("fem: fewer than two negative levels");
      if (r.truncation_warning) append_note("fem: truncation shell carries visible mass");
    } catch (const std::exception& e) {
      append_note(std::string("fem: ") + e.what());
    }
  }

  const std::optional<double> designated = spec.use_fem ? row.lambda2_fem : row.lambda2_trial;
  if (designated && row.lambda2_disk) row.diff = *designated - *row.lambda2_disk;

  // Theorem gates: the inclusion constraint carries the superset-monotonicity
  // statement, the elastic constraint the isoelastic one. Area and perimeter
  // sweeps probe the open conjecture and never assert. Both statements are
  // strict for shapes other than the disk; a row whose shape is the matched
  // disk itself sits at equality and is recorded without assertion.
  const bool is_disk_row = g.max_rho - g.min_rho <= 1e-12 * item.matched_radius;
  if (spec.constraint == SweepConstraint::inclusion)
    row.theorem_applicable = !is_disk_row && row.flags.star_shaped &&
                             row.flags.centrally_symmetric && row.flags.contains_disk &&
                             row.lambda2_disk.has_value();
  else if (spec.constraint == SweepConstraint::elastic)
    row.theorem_applicable = !is_disk_row && row.flags.convex && row.flags.elastic_match &&
                             row.lambda2_disk.has_value();
  return row;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? detail::g17(*v) : std::string(); };
  out << "# schema=1\n";
  out << "shape_id,eps,L,A,E,constraint,R_matched,alpha,lambda2_trial,lambda2_fem,"
         "lambda2_disk,diff,flags\n";
  for (const SweepRow& r : rows) {
    out << r.shape_id << ',' << detail::g17(r.eps) << ',' << detail::g17(r.perimeter) << ','
        << detail::g17(r.area) << ',' << detail::g17(r.elastic) << ','
        << constraint_name(r.constraint) << ',' << detail::g17(r.matched_radius) << ','
        << detail::g17(r.alpha) << ',' << opt(r.lambda2_trial) << ',' << opt(r.lambda2_fem)
        << ',' << opt(r.lambda2_disk) << ',' << opt(r.diff) << ',' << encode_flags(r.flags)
        << '\n';
  }
}

// Minimal self-contained SVG line chart; series are (label, points) pairs.
inline void write_svg_chart(std::ostream& out, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel,
                            const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series) {
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [label, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x); xmax = std::max(xmax, x);
      ymin = std::min(ymin, y); ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const double px0 = 90, px1 = 720, py0 = 420, py1 = 50;
  auto X = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
  auto Y = [&](double y) { return py0 + (y - ymin) / (ymax - ymin) * (py1 - py0); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 760 480\" "
         "font-family=\"sans-serif\">\n";
  out << "<rect width=\"760\" height=\"480\" fill=\"white\"/>\n";
  out << "<text x=\"380\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << title
      << "</text>\n";
  char buf[256];
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n",
                  X(xv), py0, X(xv), py1);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ddd\"/>\n",
                  px0, Y(yv), px1, Y(yv));
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"440\" text-anchor=\"middle\" font-size=\"12\">%.4g</text>\n",
                  X(xv), xv);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"82\" y=\"%.2f\" text-anchor=\"end\" font-size=\"12\">%.4g</text>\n",
                  Y(yv) + 4, yv);
    out << buf;
  }
  if (ymin < 0.0 && ymax > 0.0) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888\" "
                  "stroke-dasharray=\"6 4\"/>\n",
                  px0, Y(0.0), px1, Y(0.0));
    out << buf;
  }
  out << "<rect x=\"90\" y=\"50\" width=\"630\" height=\"370\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"405\" y=\"468\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
      << "</text>\n";
  out << "<text x=\"24\" y=\"235\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 24 235)\">"
      << ylabel << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[s].second) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(x), Y(y));
      out << buf;
    }
    out << "\"/>\n";
    for (const auto& [x, y] : series[s].second) {
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n", X(x), Y(y), color);
      out << buf;
    }
    const double ly = 62.0 + 20.0 * s;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"600\" y=\"%.2f\" width=\"14\" height=\"4\" fill=\"%s\"/>\n",
                  ly - 4, color);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"620\" y=\"%.2f\" font-size=\"12\">", ly);
    out << buf << series[s].first << "</text>\n";
  }
  out << "</svg>\n";
}

inline int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ROBIN_EXT_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::string csv_path;
  std::string manifest_path;
  std::string svg_path;  // empty when the family has no eps axis
  int theorem_violations = 0;
  std::vector<std::string> violation_notes;
};

// A row fails the sweep only when a proved statement covers it: hypotheses
// hold, both levels were computed, and the difference still came out
// nonnegative. Conjecture rows merely record their sign.
inline int collect_theorem_violations(const std::vector<SweepRow>& rows,
                                      std::vector<std::string>* notes = nullptr) {
  int count = 0;
  for (const SweepRow& r : rows)
    if (r.theorem_applicable && r.diff && *r.diff >= 0.0) {
      ++count;
      if (notes)
        notes->push_back(r.shape_id + " alpha=" + detail::g17(r.alpha) +
                         " diff=" + detail::g17(*r.diff));
    }
  return count;
}

inline SweepOutcome run_sweep(const SweepSpec& spec, int jobs) {
  const std::vector<SweepShape> shapes = sweep_shapes(spec);
  std::vector<std::pair<std::size_t, std::size_t>> items;
  for (std::size_t s = 0; s < shapes.size(); ++s)
    for (std::size_t a = 0; a < spec.alpha_grid.size(); ++a) items.emplace_back(s, a);

  std::vector<SweepRow> rows(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      const auto [si, ai] = items[i];
      try {
        rows[i] = compute_sweep_row(spec, shapes[si], spec.alpha_grid[ai]);
      } catch (const std::exception& e) {
        rows[i].shape_id = shapes[si].id;
        rows[i].eps = shapes[si].eps;
        rows[i].constraint = spec.constraint;
        rows[i].matched_radius = shapes[si].matched_radius;
        rows[i].alpha = spec.alpha_grid[ai];
        rows[i].note = std::string("error: ") + e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.shape_id != b.shape_id) return a.shape_id < b.shape_id;
    return a.alpha < b.alpha;
  });

  SweepOutcome out;
  out.rows = std::move(rows);

  std::filesystem::create_directories(spec.output_dir);
  const std::filesystem::path dir(spec.output_dir);

  out.csv_path = (dir / "sweep.csv").string();
  {
    std::ofstream csv(out.csv_path);
    if (!csv) throw std::runtime_error("sweep: cannot write " + out.csv_path);
    write_sweep_csv(csv, out.rows);
  }

  out.manifest_path = (dir / "manifest.txt").string();
  {
    std::ofstream mf(out.manifest_path);
    if (!mf) throw std::runtime_error("sweep: cannot write " + out.manifest_path);
    char stamp[32] = "unknown";
    const std::time_t now = std::time(nullptr);
    if (std::tm* tm = std::gmtime(&now)) std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", tm);
    mf << "# sweep manifest schema=1\n";
    mf << "version = " << kVersion << "\n";
    mf << "spec_sha256 = " << detail::sha256_hex(spec.raw_text) << "\n";
    mf << "created_utc = " << stamp << "\n";
    mf << "rows = " << out.rows.size() << "\n";
    mf << "[spec]\n" << spec.raw_text;
    if (!spec.raw_text.empty() && spec.raw_text.back() != '\n') mf << '\n';
  }

  if (spec.family == "cos2k-perturbation") {
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
    for (double a : spec.alpha_grid) {
      std::vector<std::pair<double, double>> pts;
      for (const SweepRow& r : out.rows)
        if (r.alpha == a && r.diff) pts.emplace_back(r.eps, *r.diff);
      std::sort(pts.begin(), pts.end());
      if (!pts.empty()) series.emplace_back("alpha = " + detail::g17(a).substr(0, 8), pts);
    }
    if (!series.empty()) {
      out.svg_path = (dir / "diff_vs_eps.svg").string();
      std::ofstream svg(out.svg_path);
      write_svg_chart(svg, "second-level difference against the matched disk", "eps",
                      "lambda2 difference", series);
    }
  }

  out.theorem_violations = collect_theorem_violations(out.rows, &out.violation_notes);
  return out;
}

// Recovers the verbatim spec text embedded in a manifest, checking the
// recorded fingerprint, so a sweep re-runs from its manifest alone.
inline SweepSpec spec_from_manifest(const std::string& manifest_text) {
  const std::string marker = "[spec]\n";
  const std::size_t at = manifest_text.find(marker);
  if (at == std::string::npos)
    throw std::runtime_error("manifest: missing embedded [spec] section");
  const std::string body = manifest_text.substr(at + marker.size());

  std::string recorded;
  std::istringstream in(manifest_text.substr(0, at));
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq != std::string::npos && detail::trimmed(line.substr(0, eq)) == "spec_sha256")
      recorded = detail::trimmed(line.substr(eq + 1));
  }
  if (!recorded.empty() && recorded != detail::sha256_hex(body) &&
      recorded != detail::sha256_hex(body.substr(0, body.size() - 1)))
    throw std::runtime_error("manifest: embedded spec does not match its fingerprint");
  return parse_sweep_spec(body);
}

}  // namespace robinext
