// Command line front end: generate, solve, verify, steklov, convergence.

#include "fbms/fbms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace fbms;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string json_out;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void write_json(const Globals& g, const nlohmann::json& j) {
  if (!g.json_out.empty()) write_text(g.json_out, dump_report(j));
}

std::string summary_table(const VerifyResult& res) {
  std::ostringstream os;
  os << std::left << std::setw(36) << "check" << std::setw(16) << "outcome" << "value\n";
  for (const auto& [name, c] : res.checks) {
    os << std::setw(36) << name << std::setw(16) << to_string(c.outcome) << std::setprecision(10) << c.value << '\n';
  }
  os << "exit code " << res.exit_code << '\n';
  return os.str();
}

struct GenerateArgs {
  std::string kind = "catenoid";
  int nt = 64, ntheta = 128;
  int n = 6, levels = 4;
  int windows = 2;
  double window_radius = 0.5;
  int subdivisions = 3;
  double radius = 0.25;
  std::vector<double> center{0.0, 0.0, 0.5};
  double noise = 0.0;
  std::string output = "-";
};

int run_generate(const Globals& g, const GenerateArgs& a) {
  TriangleMesh mesh;
  if (a.kind == "catenoid") {
    mesh = generate_catenoid(a.nt, a.ntheta);
  } else if (a.kind == "disk") {
    mesh = generate_disk(a.n, Vec3::UnitZ(), a.levels);
  } else if (a.kind == "shell") {
    mesh = generate_near_sphere_shell(a.windows, a.window_radius, a.subdivisions);
  } else if (a.kind == "sphere") {
    mesh = generate_sphere(a.subdivisions, a.radius, Vec3(a.center[0], a.center[1], a.center[2]));
  } else {
    throw std::invalid_argument("unknown kind '" + a.kind + "'");
  }
  if (a.noise > 0) mesh = add_radial_noise(mesh, a.noise, g.seed);
  std::ostringstream os;
  write_obj(os, mesh);
  write_text(a.output, os.str());
  nlohmann::json j;
  j["kind"] = a.kind;
  j["num_vertices"] = mesh.num_vertices();
  j["num_faces"] = mesh.num_faces();
  j["noise"] = a.noise;
  j["seed"] = g.seed;
  j["fingerprint"] = mesh.fingerprint();
  write_json(g, j);
  return exit_pass;
}

struct SolveArgs {
  std::string input, output = "-", trace;
  double grad_tol = 1e-8;
  int max_iters = 5000;
  int remesh_every = 0;
};

int run_solve(const Globals& g, const SolveArgs& a) {
  const TriangleMesh mesh = read_obj(a.input);
  SolverConfig cfg;
  cfg.grad_tol = a.grad_tol;
  cfg.max_iters = a.max_iters;
  if (a.remesh_every > 0) cfg.remesh_every = a.remesh_every;
  const SolveResult r = solve(mesh, cfg);
  std::ostringstream os;
  write_obj(os, r.mesh);
  write_text(a.output, os.str());
  if (!a.trace.empty()) write_text(a.trace, trace_csv(r.trace));
  nlohmann::json j;
  j["termination"] = to_string(r.trace.reason);
  j["iterations"] = r.trace.iterations();
  j["area_initial"] = r.trace.area.front();
  j["area_final"] = r.trace.area.back();
  j["grad_norm_final"] = r.trace.grad_norm.back();
  j["min_quality_final"] = r.trace.min_quality.back();
  j["free_boundary_residual"] = free_boundary_residual(r.mesh);
  write_json(g, j);
  std::cerr << to_string(r.trace.reason) << " after " << r.trace.iterations() << " iterations, area "
            << std::setprecision(10) << r.trace.area.back() << '\n';
  return exit_pass;
}

struct VerifyArgs {
  std::string input, family;
  int level = 2;
  bool no_steklov = false;
  int steklov_k = 4;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
  VerifyOptions opt;
  opt.steklov = !a.no_steklov;
  opt.steklov_k = a.steklov_k;
  VerifyResult res;
  if (!a.family.empty()) {
    res = verify_mesh(family_mesh(parse_family(a.family), a.level), opt);
    res.json["input"] = a.family + ":" + std::to_string(a.level);
    write_json(g, res.json);
  } else {
    PipelineConfig cfg;
    cfg.input = a.input;
    cfg.json_out = g.json_out;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.verify = opt;
    res = run_verify_pipeline(cfg);
  }
  std::cout << summary_table(res);
  return res.exit_code;
}

struct SteklovArgs {
  std::string input, csv;
  int k = 8;
};

int run_steklov(const Globals& g, const SteklovArgs& a) {
  const TriangleMesh mesh = read_obj(a.input);
  const SpectralResult s = steklov_spectrum(mesh, a.k);
  const std::string table = spectrum_csv(s);
  if (!a.csv.empty()) write_text(a.csv, table);
  std::cout << table;
  nlohmann::json j;
  j["eigenvalues"] = s.eigenvalues;
  j["boundary_length"] = s.boundary_length;
  if (s.eigenvalues.size() >= 2 && s.sigma1() > 1e-8) {
    const auto cc = conjecture_checks(s, geometry_report(mesh));
    for (const auto& [name, v] : cc) j["checks"][name] = v;
  }
  write_json(g, j);
  return exit_pass;
}

struct ConvergenceArgs {
  std::string family = "catenoid", csv = "-";
  std::vector<int> levels{0, 1, 2};
};

int run_convergence(const Globals& g, const ConvergenceArgs& a) {
  PipelineConfig cfg;
  cfg.input = a.family;
  cfg.levels = a.levels;
  cfg.validate();
  const auto rows = convergence_table(parse_family(a.family), a.levels, g.threads);
  write_text(a.csv, convergence_csv(rows));
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    j.push_back({{"level", r.level},
                 {"num_vertices", r.num_vertices},
                 {"area", r.area},
                 {"position_identity", r.position_identity},
                 {"free_boundary", r.free_boundary},
                 {"tilt_excess", r.tilt_excess},
                 {"divergence", r.divergence}});
  }
  write_json(g, j);
  return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free boundary minimal surfaces in the unit ball: meshes, descent, verification, spectra"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for noise fixtures");
  app.add_option("--threads", g.threads, "Concurrent refinement levels")->check(CLI::PositiveNumber);
  app.add_option("--json-out", g.json_out, "Write a JSON report here");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a fixture mesh as OBJ");
  gen->add_option("--kind", ga.kind, "catenoid | disk | shell | sphere")
      ->check(CLI::IsMember({"catenoid", "disk", "shell", "sphere"}));
  gen->add_option("--nt", ga.nt, "Catenoid rows");
  gen->add_option("--ntheta", ga.ntheta, "Catenoid columns");
  gen->add_option("--n", ga.n, "Disk polygon sides");
  gen->add_option("--levels", ga.levels, "Disk refinement levels");
  gen->add_option("--windows", ga.windows, "Shell window count");
  gen->add_option("--window-radius", ga.window_radius, "Shell window geodesic radius");
  gen->add_option("--subdivisions", ga.subdivisions, "Icosphere subdivisions (shell, sphere)");
  gen->add_option("--radius", ga.radius, "Sphere radius");
  gen->add_option("--center", ga.center, "Sphere center")->expected(3);
  gen->add_option("--noise", ga.noise, "Relative radial noise on interior vertices");
  gen->add_option("-o,--output", ga.output, "Output OBJ ('-' for stdout)");

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "Constrained area descent");
  sol->add_option("-i,--input", sa.input, "Input OBJ")->required();
  sol->add_option("-o,--output", sa.output, "Output OBJ ('-' for stdout)");
  sol->add_option("--grad-tol", sa.grad_tol, "Stopping tolerance");
  sol->add_option("--max-iters", sa.max_iters, "Iteration cap");
  sol->add_option("--remesh-every", sa.remesh_every, "Tangential smoothing period (0 = off)");
  sol->add_option("--trace", sa.trace, "Write the iteration trace as CSV");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run all geometric checks and write a JSON report");
  auto* vin = ver->add_option("-i,--input", va.input, "Input OBJ");
  auto* vfam = ver->add_option("--family", va.family, "Analytic family instead of an input file")
                   ->check(CLI::IsMember({"catenoid", "disk"}));
  vin->excludes(vfam);
  ver->add_option("--level", va.level, "Refinement level of the family");
  ver->add_flag("--no-steklov", va.no_steklov, "Skip the spectral checks");
  ver->add_option("--steklov-k", va.steklov_k, "Number of Steklov eigenvalues");

  SteklovArgs ka;
  auto* stk = app.add_subcommand("steklov", "Lowest Steklov eigenvalues");
  stk->add_option("-i,--input", ka.input, "Input OBJ")->required();
  stk->add_option("-k", ka.k, "Number of eigenvalues");
  stk->add_option("--out,--csv", ka.csv, "Write the spectrum as CSV");

  ConvergenceArgs ca;
  auto* cvg = app.add_subcommand("convergence", "Refinement table for an analytic family");
  cvg->add_option("--family", ca.family)->check(CLI::IsMember({"catenoid", "disk"}));
  cvg->add_option("--levels", ca.levels, "Ascending refinement levels")->delimiter(',');
  cvg->add_option("--csv", ca.csv, "Output CSV ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input_error;
  }

  try {
    if (*gen) return run_generate(g, ga);
    if (*sol) return run_solve(g, sa);
    if (*ver) {
      if (va.input.empty() && va.family.empty()) throw std::invalid_argument("verify: give --input or --family");
      return run_verify(g, va);
    }
    if (*stk) return run_steklov(g, ka);
    if (*cvg) return run_convergence(g, ca);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  }
  return exit_input_error;
}
