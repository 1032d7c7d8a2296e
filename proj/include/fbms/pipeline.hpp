#pragma once

// Verification pipeline: aggregates every geometric check on one mesh into a
// deterministic JSON report with three-valued outcomes, plus refinement
// convergence tables for the analytic families.

#include "fbms/generators.hpp"
#include "fbms/radial_graph.hpp"
#include "fbms/solver.hpp"
#include "fbms/steklov.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fbms {

enum class Outcome { pass, fail, not_applicable, reported };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "not_applicable";
    case Outcome::reported: return "reported";
  }
  return "unknown";
}

struct Check {
  Outcome outcome = Outcome::not_applicable;
  double value = 0.0;
  double tolerance = 0.0;
  /// Signed distance to the threshold; positive means satisfied.
  double margin = 0.0;
  std::string note;
};

/// Exit codes of the verify pipeline and the CLI.
enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_not_applicable = 2, exit_input_error = 3 };

// Tolerances of the asserted checks.
inline constexpr double kGaussBonnetTolPerElement = 1e-10;
inline constexpr double kPositionIdentityTol = 5e-2;
inline constexpr double kFreeBoundaryTol = 5e-2;
inline constexpr double kTiltExcessTol = 5e-2;
inline constexpr double kSplitIdentityTol = 1e-12;
inline constexpr double kDiskAreaRelTol = 1e-2;
inline constexpr double kRoundoffRelTol = 1e-12;
inline constexpr double kPlanarTol = 1e-9;

struct VerifyOptions {
  bool steklov = true;
  int steklov_k = 4;
};

struct VerifyResult {
  GeometryReport report;
  std::map<std::string, Check> checks;
  nlohmann::json json;
  int exit_code = exit_pass;
};

namespace detail {

template <typename T>
inline nlohmann::json quantity(T v, T tol) {
  return {{"value", v}, {"tolerance", tol}};
}

inline nlohmann::json to_json(const Check& c) {
  nlohmann::json j{{"outcome", to_string(c.outcome)},
                   {"value", c.value},
                   {"tolerance", c.tolerance},
                   {"margin", c.margin}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

/// Threshold check value ≤ tol.
inline Check at_most(double value, double tol, std::string note = {}) {
  return {value <= tol ? Outcome::pass : Outcome::fail, value, tol, tol - value, std::move(note)};
}

/// Strict inequality lower < upper, reported through its margin.
inline Check strictly_less(double lower, double upper, std::string note = {}) {
  return {lower < upper ? Outcome::pass : Outcome::fail, lower, 0.0, upper - lower, std::move(note)};
}

inline Check not_applicable(std::string note) { return {Outcome::not_applicable, 0.0, 0.0, 0.0, std::move(note)}; }

inline Check reported(double value, std::string note = {}) {
  return {Outcome::reported, value, 0.0, 0.0, std::move(note)};
}

/// Unit normal of a planar mesh through the origin, if it is one.
inline std::optional<Vec3> planar_through_origin(const TriangleMesh& mesh) {
  Vec3 n = Vec3::Zero();
  for (const auto& f : mesh.faces()) n += face_area_normal(mesh, f);
  if (!(n.norm() > 0)) return std::nullopt;
  n.normalize();
  for (const auto& v : mesh.vertices()) {
    if (std::abs(v.dot(n)) > kPlanarTol) return std::nullopt;
  }
  return n;
}

struct Stats {
  double min = 0, max = 0, mean = 0;
};

inline Stats stats_over(const std::vector<double>& values, const std::vector<int>& idx) {
  Stats s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
  CompensatedSum sum;
  for (int i : idx) {
    const double x = values[static_cast<std::size_t>(i)];
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    sum += x;
  }
  s.mean = idx.empty() ? 0.0 : sum.value() / static_cast<double>(idx.size());
  return s;
}

}  // namespace detail

/// Lifts a planar disk through the origin with unit normal n to the spherical
/// cap it spans on the side of n: x ↦ x + √(1 − |x|²) n.
inline TriangleMesh spanning_cap(const TriangleMesh& disk, const Vec3& n) {
  std::vector<Vec3> p = disk.vertices();
  for (int v = 0; v < disk.num_vertices(); ++v) {
    auto& x = p[static_cast<std::size_t>(v)];
    if (disk.is_boundary_vertex(v)) x.normalize();
    else x = (x + std::sqrt(std::max(0.0, 1.0 - x.squaredNorm())) * n).normalized();
  }
  return disk.with_positions(std::move(p));
}

/// Runs every applicable check on `mesh`. The JSON output depends only on
/// the mesh and the options.
inline VerifyResult verify_mesh(const TriangleMesh& mesh, const VerifyOptions& opt = {}) {
  using detail::at_most;
  using detail::not_applicable;
  using detail::reported;
  using detail::strictly_less;
  constexpr double pi = std::numbers::pi;

  VerifyResult res;
  GeometryReport& rep = res.report;
  rep = geometry_report(mesh);
  auto& checks = res.checks;
  nlohmann::json stats = nlohmann::json::object();

  const int k = rep.num_boundary_loops;
  const int genus = rep.genus;
  const double area = rep.area_sigma;
  const double gb_tol = kGaussBonnetTolPerElement * (mesh.num_vertices() + mesh.num_faces());
  checks["gauss_bonnet"] = at_most(rep.residuals["gauss_bonnet"], gb_tol);

  bool hypotheses = k >= 1 && genus == 0;
  std::string gate_note;
  if (k == 0) gate_note = "surface has no boundary";
  else if (genus != 0) gate_note = "genus is not zero";

  if (k >= 1) {
    const double pos = std::abs(rep.boundary_length - 2.0 * area) / area;
    rep.residuals["position_identity"] = pos;
    checks["position_identity"] = at_most(pos, kPositionIdentityTol, "|boundary_length - 2 area| / area");
    const double fb = free_boundary_residual(mesh);
    rep.residuals["free_boundary"] = fb;
    checks["free_boundary_orthogonality"] = at_most(fb, kFreeBoundaryTol, "max |<nu, p>| on the boundary");

    const auto curv = discrete_curvatures(mesh);
    std::vector<int> bverts;
    for (const auto& loop : mesh.boundary_loops()) bverts.insert(bverts.end(), loop.begin(), loop.end());
    const auto kg = detail::stats_over(curv.geodesic_curvature, bverts);
    stats["sigma_boundary_geodesic_curvature"] = {{"min", kg.min}, {"max", kg.max}, {"mean", kg.mean}};
    checks["sigma_boundary_geodesic_curvature"] =
        reported(kg.mean, "mean discrete geodesic curvature of the boundary; smooth value is 1");

    const double fl_bound = std::min(2.0 * (genus + k) * pi, 8.0 * pi * std::floor((genus + 3) / 2.0));
    checks["fraser_li_bound"] = {area <= fl_bound ? Outcome::pass : Outcome::fail, area, 0.0, fl_bound - area,
                                 "area <= min{2(genus+k)pi, 8pi floor((genus+3)/2)}"};
  } else {
    checks["position_identity"] = not_applicable("no boundary");
    checks["free_boundary_orthogonality"] = not_applicable("no boundary");
    checks["fraser_li_bound"] = not_applicable("no boundary");
  }

  if (hypotheses) {
    checks["area_below_4pi"] = strictly_less(area, 4.0 * pi, "genus zero area bound");
  } else {
    checks["area_below_4pi"] = not_applicable(gate_note);
  }

  // Radial structure: the area sandwich needs k >= 2; a planar disk is
  // compared against the hemisphere it spans instead.
  std::optional<TriangleMesh> omega;
  std::vector<Vec3> transported_normals;
  if (hypotheses && k == 1) {
    checks["area_at_least_pi"] = {area >= pi * (1.0 - kDiskAreaRelTol) ? Outcome::pass : Outcome::fail, area,
                                  kDiskAreaRelTol, area - pi * (1.0 - kDiskAreaRelTol),
                                  "disk: area >= pi (relative discretization tolerance)"};
    checks["radial_injective"] = not_applicable("single boundary component");
    checks["sandwich_lower"] = not_applicable("requires at least two boundary components");
    checks["sandwich_upper"] = not_applicable("requires at least two boundary components");
    if (const auto n = detail::planar_through_origin(mesh)) {
      omega = spanning_cap(mesh, *n);
      transported_normals = vertex_normals(mesh);
    }
  } else if (hypotheses) {
    checks["area_at_least_pi"] = not_applicable("only asserted for disks");
    const auto proj = radial_project(mesh);
    checks["radial_injective"] = {proj.injective ? Outcome::pass : Outcome::not_applicable,
                                  proj.injective ? 1.0 : 0.0, 0.0, 0.0, "radial graph property"};
    if (proj.injective) {
      omega = proj.omega;
      transported_normals = vertex_normals(mesh);
    } else {
      hypotheses = false;
      gate_note = "radial projection is not injective";
      checks["sandwich_lower"] = not_applicable(gate_note);
      checks["sandwich_upper"] = not_applicable(gate_note);
    }
  } else {
    checks["area_at_least_pi"] = not_applicable(gate_note);
    bool injective = false;
    if (mesh.num_vertices() > 0) {
      try {
        injective = radial_project(mesh).injective;
      } catch (const MeshError&) {
      }
    }
    checks["radial_injective"] = {Outcome::not_applicable, injective ? 1.0 : 0.0, 0.0, 0.0, gate_note};
    checks["sandwich_lower"] = not_applicable(gate_note);
    checks["sandwich_upper"] = not_applicable(gate_note);
  }

  if (omega) {
    const double area_omega = spherical_area(*omega);
    rep.area_omega = area_omega;
    if (k >= 2) {
      checks["sandwich_lower"] = strictly_less(0.5 * area_omega, area, "area_omega / 2 < area");
      checks["sandwich_upper"] = strictly_less(area, area_omega, "area < area_omega");
    }
    const auto te = tilt_excess(*omega, transported_normals, area);
    rep.residuals["tilt_excess"] = te.residual;
    checks["tilt_excess"] = at_most(te.residual, kTiltExcessTol, "|(area_omega - area) - tilt integral|");
    stats["tilt_excess"] = {{"lhs", te.lhs}, {"rhs", te.rhs}, {"rhs_inner", te.rhs_inner}};
    checks["tilt_excess_split"] =
        at_most(te.max_pointwise_gap, kSplitIdentityTol, "1 - <a,b> = |a-b|^2/2 pointwise");
    const double div = divergence_identity(*omega, transported_normals, area);
    rep.residuals["divergence_identity"] = div;
    checks["divergence_identity"] = at_most(div, kTiltExcessTol, "|int <nu, nu_S2> - area|");
    const double convex = boundary_convexity(*omega);
    checks["omega_boundary_convexity"] =
        reported(convex, "minimum geodesic curvature of the shadow boundary toward the complement");
  } else {
    const std::string why = gate_note.empty() ? "no spherical domain for this surface" : gate_note;
    checks["tilt_excess"] = not_applicable(why);
    checks["tilt_excess_split"] = not_applicable(why);
    checks["divergence_identity"] = not_applicable(why);
    checks["omega_boundary_convexity"] = not_applicable(why);
  }

  if (opt.steklov && k >= 1) {
    const int kk = std::min<int>(opt.steklov_k, static_cast<int>(boundary_mass(mesh).size()));
    const auto spec = steklov_spectrum(mesh, kk);
    const auto cc = conjecture_checks(spec, rep);
    checks["kokarev_bound"] = {cc.at("kokarev_margin") > 0 ? Outcome::pass : Outcome::fail,
                               cc.at("sigma1_times_boundary_length"), 0.0, cc.at("kokarev_margin"),
                               "sigma_1 * boundary_length < 8 pi"};
    checks["sigma1_equals_one"] =
        reported(cc.at("sigma1"), cc.at("sigma1_minus_one") > 3e-2 ? "observation: sigma_1 deviates from 1"
                                                                     : "sigma_1 consistent with 1");
    Eigen::VectorXd coord(mesh.num_vertices());
    nlohmann::json rq = nlohmann::json::array();
    for (int d = 0; d < 3; ++d) {
      for (int v = 0; v < mesh.num_vertices(); ++v) coord[v] = vertex(mesh, v)[d];
      double q = 0.0;
      if (coord.norm() > 0) {
        bool nonzero = false;
        for (const auto& loop : mesh.boundary_loops()) {
          for (int v : loop) nonzero = nonzero || std::abs(coord[v]) > 1e-12;
        }
        q = nonzero ? steklov_rayleigh_quotient(mesh, coord) : 0.0;
      }
      rq.push_back(q);
    }
    nlohmann::json eigen = nlohmann::json::array();
    for (double s : spec.eigenvalues) eigen.push_back(s);
    stats["steklov"] = {{"eigenvalues", eigen},
                        {"coordinate_rayleigh_quotients", rq},
                        {"two_sigma1_area", cc.at("two_sigma1_area")}};
  } else {
    const std::string why = k == 0 ? "no boundary" : "disabled";
    checks["kokarev_bound"] = not_applicable(why);
    checks["sigma1_equals_one"] = not_applicable(why);
  }

  bool failed = false;
  for (const auto& [name, c] : checks) failed = failed || c.outcome == Outcome::fail;
  res.exit_code = failed ? exit_check_failure : (hypotheses ? exit_pass : exit_not_applicable);

  const double rel = kRoundoffRelTol;
  nlohmann::json j;
  j["geometry"] = {{"area_sigma", detail::quantity(area, rel * area)},
                   {"boundary_length", detail::quantity(rep.boundary_length, rel * rep.boundary_length)},
                   {"area_omega", detail::quantity(rep.area_omega, rel * rep.area_omega)},
                   {"euler_char", detail::quantity(rep.euler_char, 0)},
                   {"genus", detail::quantity(rep.genus, 0)},
                   {"num_boundary_loops", detail::quantity(rep.num_boundary_loops, 0)},
                   {"num_vertices", detail::quantity(mesh.num_vertices(), 0)},
                   {"num_faces", detail::quantity(mesh.num_faces(), 0)}};
  nlohmann::json jc = nlohmann::json::object();
  for (const auto& [name, c] : checks) jc[name] = detail::to_json(c);
  j["checks"] = jc;
  j["statistics"] = stats;
  j["hypotheses"] = {{"genus_zero_free_boundary", hypotheses}, {"note", gate_note}};
  j["exit_code"] = res.exit_code;
  res.json = std::move(j);
  return res;
}

struct PipelineConfig {
  std::string input;
  std::string json_out;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<int> levels;
  VerifyOptions verify;

  void validate() const {
    if (input.empty()) throw std::invalid_argument("pipeline: input path is empty");
    if (!std::is_sorted(levels.begin(), levels.end())) {
      throw std::invalid_argument("pipeline: refinement levels must be ascending");
    }
  }
};

inline std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Reads the input mesh, verifies it, and writes the JSON report when a
/// path is configured.
inline VerifyResult run_verify_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const TriangleMesh mesh = read_obj(cfg.input);
  VerifyResult res = verify_mesh(mesh, cfg.verify);
  res.json["input"] = cfg.input;
  if (!cfg.json_out.empty()) {
    std::ofstream out(cfg.json_out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + cfg.json_out + "' for writing");
    out << dump_report(res.json);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Refinement convergence on the analytic families

enum class Family { catenoid, disk };

inline Family parse_family(const std::string& s) {
  if (s == "catenoid") return Family::catenoid;
  if (s == "disk") return Family::disk;
  throw std::invalid_argument("unknown family '" + s + "' (expected catenoid or disk)");
}

/// Level l: catenoid at (16·2^l, 32·2^l); disk as a hexagon refined l+1 times.
inline TriangleMesh family_mesh(Family f, int level) {
  if (level < 0) throw std::invalid_argument("refinement level must be >= 0");
  if (f == Family::catenoid) return generate_catenoid(16 << level, 32 << level);
  return generate_disk(6, Vec3::UnitZ(), level + 1);
}

struct ConvergenceRow {
  int level = 0;
  int num_vertices = 0;
  double area = 0, area_error = 0;
  double boundary_length = 0, length_error = 0;
  double position_identity = 0;
  double free_boundary = 0;
  double tilt_excess = 0;
  double divergence = 0;
  double max_interior_mean_curvature = 0;
  double gauss_bonnet = 0;
};

inline ConvergenceRow convergence_row(Family f, int level) {
  const TriangleMesh mesh = family_mesh(f, level);
  ConvergenceRow r;
  r.level = level;
  r.num_vertices = mesh.num_vertices();
  r.area = surface_area(mesh);
  r.boundary_length = boundary_length(mesh);
  r.position_identity = std::abs(r.boundary_length - 2.0 * r.area) / r.area;
  r.free_boundary = free_boundary_residual(mesh);
  r.gauss_bonnet = gauss_bonnet_residual(mesh);
  const auto normals = vertex_normals(mesh);
  TriangleMesh omega;
  if (f == Family::catenoid) {
    const auto p = solve_catenoid_params();
    r.area_error = std::abs(r.area - p.area_sigma);
    r.length_error = std::abs(r.boundary_length - p.boundary_len);
    omega = radial_project(mesh).omega;
  } else {
    r.area_error = std::abs(r.area - std::numbers::pi);
    r.length_error = std::abs(r.boundary_length - 2.0 * std::numbers::pi);
    omega = spanning_cap(mesh, Vec3::UnitZ());
  }
  r.tilt_excess = tilt_excess(omega, normals, r.area).residual;
  r.divergence = divergence_identity(omega, normals, r.area);
  const auto curv = discrete_curvatures(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    bool near_boundary = false;
    for (int w : mesh.vertex_neighbors()[static_cast<std::size_t>(v)]) near_boundary = near_boundary || mesh.is_boundary_vertex(w);
    if (!near_boundary) {
      r.max_interior_mean_curvature =
          std::max(r.max_interior_mean_curvature, curv.mean_curvature[static_cast<std::size_t>(v)].norm());
    }
  }
  return r;
}

/// Rows in level order; levels may be computed on up to `threads` workers.
inline std::vector<ConvergenceRow> convergence_table(Family f, const std::vector<int>& levels, int threads = 1) {
  std::vector<ConvergenceRow> rows(levels.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < levels.size(); start += workers) {
    std::vector<std::thread> pool;
    for (std::size_t i = start; i < std::min(levels.size(), start + workers); ++i) {
      pool.emplace_back([&rows, &levels, f, i] { rows[i] = convergence_row(f, levels[i]); });
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "level,num_vertices,area,area_error,boundary_length,length_error,position_identity,"
        "free_boundary,tilt_excess,divergence,max_interior_mean_curvature,gauss_bonnet\n";
  for (const auto& r : rows) {
    os << r.level << ',' << r.num_vertices << ',' << r.area << ',' << r.area_error << ',' << r.boundary_length << ','
       << r.length_error << ',' << r.position_identity << ',' << r.free_boundary << ',' << r.tilt_excess << ','
       << r.divergence << ',' << r.max_interior_mean_curvature << ',' << r.gauss_bonnet << '\n';
  }
  return os.str();
}

inline std::string trace_csv(const SolveTrace& trace) {
  std::ostringstream os;
  os << std::setprecision(17) << "iter,area,grad_norm,min_quality\n";
  for (std::size_t i = 0; i < trace.area.size(); ++i) {
    os << i << ',' << trace.area[i] << ',' << trace.grad_norm[i] << ',' << trace.min_quality[i] << '\n';
  }
  return os.str();
}

inline std::string spectrum_csv(const SpectralResult& s) {
  std::ostringstream os;
  os << std::setprecision(17) << "index,sigma,sigma_times_boundary_length\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    os << i << ',' << s.eigenvalues[i] << ',' << s.eigenvalues[i] * s.boundary_length << '\n';
  }
  return os.str();
}

}  // namespace fbms
