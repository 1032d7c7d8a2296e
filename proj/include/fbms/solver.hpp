#pragma once

// Discrete free boundary minimal surfaces by constrained area descent:
// interior vertices follow the area gradient, boundary vertices its
// component tangent to the unit sphere, and are re-projected after each step.

#include "fbms/geometry.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fbms {

struct StepPolicy {
  double initial_step = 1e-3;
  double backtrack = 0.5;
  double sufficient_decrease = 1e-4;
  /// Accepted steps seed the next trial at step·growth.
  double growth = 2.0;
  double min_step = 1e-18;
  /// No vertex moves farther than this fraction of its shortest incident
  /// edge in one step.
  double max_displacement = 0.25;
};

struct SolverConfig {
  int max_iters = 5000;
  /// Threshold on the sup-norm of the vertex-area-normalized constrained
  /// gradient (a discrete mean curvature, so resolution independent).
  double grad_tol = 1e-8;
  StepPolicy step;
  std::optional<int> remesh_every;
  double quality_floor = 0.02;

  void validate() const {
    if (max_iters < 0) throw std::invalid_argument("SolverConfig: max_iters must be >= 0");
    if (!(grad_tol > 0)) throw std::invalid_argument("SolverConfig: grad_tol must be positive");
    if (!(step.initial_step > 0)) throw std::invalid_argument("SolverConfig: initial step must be positive");
    if (!(step.backtrack > 0 && step.backtrack < 1)) {
      throw std::invalid_argument("SolverConfig: backtracking factor must lie in (0,1)");
    }
    if (!(step.sufficient_decrease > 0 && step.sufficient_decrease < 1)) {
      throw std::invalid_argument("SolverConfig: sufficient-decrease constant must lie in (0,1)");
    }
    if (!(step.growth >= 1)) throw std::invalid_argument("SolverConfig: step growth must be >= 1");
    if (!(step.max_displacement > 0)) throw std::invalid_argument("SolverConfig: max displacement must be positive");
    if (!(quality_floor > 0 && quality_floor < 1)) {
      throw std::invalid_argument("SolverConfig: quality floor must lie in (0,1)");
    }
    if (remesh_every && *remesh_every <= 0) {
      throw std::invalid_argument("SolverConfig: remesh_every must be positive");
    }
  }
};

enum class Termination { converged, iteration_cap, line_search_stalled };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::iteration_cap: return "iteration_cap";
    case Termination::line_search_stalled: return "line_search_stalled";
  }
  return "unknown";
}

/// Entry 0 describes the input; entry i the state after accepted step i.
struct SolveTrace {
  std::vector<double> area;
  std::vector<double> grad_norm;
  std::vector<double> min_quality;
  Termination reason = Termination::iteration_cap;

  int iterations() const { return static_cast<int>(area.size()) - 1; }
  bool converged() const { return reason == Termination::converged; }
};

struct SolveResult {
  TriangleMesh mesh;
  SolveTrace trace;
};

/// Mesh quality dropped below the configured floor.
class DegenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Area functional on a fixed connectivity, evaluated on bare position
/// arrays so line-search trials do not copy mesh topology.
class AreaFunctional {
 public:
  explicit AreaFunctional(const TriangleMesh& mesh) : faces_(mesh.faces()) {
    const auto nv = static_cast<std::size_t>(mesh.num_vertices());
    prev_.assign(nv, -1);
    next_.assign(nv, -1);
    for (const auto& loop : mesh.boundary_loops()) {
      for (int v : loop) {
        const auto [a, b] = mesh.boundary_neighbors(v);
        prev_[static_cast<std::size_t>(v)] = a;
        next_[static_cast<std::size_t>(v)] = b;
        boundary_.push_back(v);
      }
    }
  }

  const std::vector<int>& boundary() const { return boundary_; }

  double area(const std::vector<Vec3>& x) const {
    CompensatedSum s;
    for (const auto& f : faces_) s += 0.5 * edge(x, f, 0, 1).cross(edge(x, f, 0, 2)).norm();
    return s.value();
  }

  std::vector<Vec3> gradient(const std::vector<Vec3>& x) const {
    std::vector<Vec3> g(x.size(), Vec3::Zero());
    for (const auto& f : faces_) {
      const Vec3 n = edge(x, f, 0, 1).cross(edge(x, f, 0, 2)).normalized();
      for (int k = 0; k < 3; ++k) {
        const Vec3& b = x[static_cast<std::size_t>(f[(k + 1) % 3])];
        const Vec3& c = x[static_cast<std::size_t>(f[(k + 2) % 3])];
        g[static_cast<std::size_t>(f[k])] += 0.5 * n.cross(c - b);
      }
    }
    return g;
  }

  /// Removes the radial and along-boundary components at boundary vertices.
  void constrain(const std::vector<Vec3>& x, std::vector<Vec3>& g) const {
    for (int v : boundary_) {
      const auto i = static_cast<std::size_t>(v);
      const Vec3 p = x[i].normalized();
      g[i] -= g[i].dot(p) * p;
      Vec3 t = x[static_cast<std::size_t>(next_[i])] - x[static_cast<std::size_t>(prev_[i])];
      t -= t.dot(p) * p;
      const double tn = t.norm();
      if (tn > 0) {
        t /= tn;
        g[i] -= g[i].dot(t) * t;
      }
    }
  }

  std::vector<double> lumped_mass(const std::vector<Vec3>& x) const {
    std::vector<CompensatedSum> acc(x.size());
    for (const auto& f : faces_) {
      const double a = 0.5 * edge(x, f, 0, 1).cross(edge(x, f, 0, 2)).norm() / 3.0;
      for (int v : f) acc[static_cast<std::size_t>(v)] += a;
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = acc[i].value();
    return out;
  }

  /// Largest step t with t·|dir_v| ≤ fraction · (shortest edge at v).
  double step_cap(const std::vector<Vec3>& x, const std::vector<Vec3>& dir, double fraction) const {
    std::vector<double> shortest(x.size(), std::numeric_limits<double>::infinity());
    for (const auto& f : faces_) {
      for (int k = 0; k < 3; ++k) {
        const auto a = static_cast<std::size_t>(f[k]);
        const auto b = static_cast<std::size_t>(f[(k + 1) % 3]);
        const double l = (x[b] - x[a]).norm();
        shortest[a] = std::min(shortest[a], l);
        shortest[b] = std::min(shortest[b], l);
      }
    }
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < x.size(); ++v) {
      const double d = dir[v].norm();
      if (d > 0) cap = std::min(cap, fraction * shortest[v] / d);
    }
    return cap;
  }

  double min_quality(const std::vector<Vec3>& x) const {
    double q = 1.0;
    for (const auto& f : faces_) {
      q = std::min(q, triangle_quality(x[static_cast<std::size_t>(f[0])], x[static_cast<std::size_t>(f[1])],
                                       x[static_cast<std::size_t>(f[2])]));
    }
    return q;
  }

 private:
  static Vec3 edge(const std::vector<Vec3>& x, const Face& f, int a, int b) {
    return x[static_cast<std::size_t>(f[b])] - x[static_cast<std::size_t>(f[a])];
  }

  std::vector<Face> faces_;
  std::vector<int> prev_, next_, boundary_;
};

}  // namespace detail

/// ∂Area/∂x_v for every vertex, accumulated in face order.
inline std::vector<Vec3> area_gradient(const TriangleMesh& mesh) {
  return detail::AreaFunctional(mesh).gradient(mesh.vertices());
}

/// Area gradient restricted to the constraint: at boundary vertices the
/// radial component is removed, and so is the component along the boundary
/// curve. The latter only reparametrizes the boundary polygon; left in, it
/// lets boundary vertices bunch up, since an unevenly spaced inscribed
/// polygon has less discrete area.
inline std::vector<Vec3> constrained_gradient(const TriangleMesh& mesh) {
  const detail::AreaFunctional fn(mesh);
  auto g = fn.gradient(mesh.vertices());
  fn.constrain(mesh.vertices(), g);
  return g;
}

/// Lumped (one third of incident face areas) vertex masses.
inline std::vector<double> barycentric_vertex_areas(const TriangleMesh& mesh) {
  return detail::AreaFunctional(mesh).lumped_mass(mesh.vertices());
}

/// max over boundary vertices of |⟨ν, p⟩|, with p the unit position.
inline double free_boundary_residual(const TriangleMesh& mesh) {
  if (!mesh.has_boundary()) throw std::invalid_argument("free_boundary_residual: mesh has no boundary");
  const auto normals = vertex_normals(mesh);
  double worst = 0.0;
  for (const auto& loop : mesh.boundary_loops()) {
    for (int v : loop) {
      worst = std::max(worst, std::abs(normals[static_cast<std::size_t>(v)].dot(vertex(mesh, v).normalized())));
    }
  }
  return worst;
}

namespace detail {

/// One pass of tangential umbrella smoothing on interior vertices.
inline std::vector<Vec3> tangential_smoothing(const TriangleMesh& mesh, const std::vector<Vec3>& x) {
  const auto normals = vertex_normals(mesh.with_positions(x, GeometryCheck::topology_only));
  std::vector<Vec3> p = x;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_boundary_vertex(v)) continue;
    const auto i = static_cast<std::size_t>(v);
    Vec3 avg = Vec3::Zero();
    const auto& nb = mesh.vertex_neighbors()[i];
    for (int w : nb) avg += x[static_cast<std::size_t>(w)];
    avg /= static_cast<double>(nb.size());
    Vec3 d = avg - x[i];
    d -= d.dot(normals[i]) * normals[i];
    p[i] += 0.5 * d;
  }
  return p;
}

}  // namespace detail

/// Relative area change below which the line search stops trusting area
/// values.
inline constexpr double kRoundoffArea = 1e-13;
inline constexpr double kApproxWolfeDelta = 0.1;

/// Projected gradient descent with Armijo backtracking. The descent
/// direction is the constrained gradient divided by lumped vertex area.
inline SolveResult solve(const TriangleMesh& initial, const SolverConfig& cfg) {
  cfg.validate();
  for (const auto& loop : initial.boundary_loops()) {
    for (int v : loop) {
      if (std::abs(vertex(initial, v).norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("solve: boundary vertex " + std::to_string(v) + " is not on the unit sphere");
      }
    }
  }
  const detail::AreaFunctional fn(initial);
  const std::size_t nv = initial.vertices().size();
  std::vector<Vec3> x = initial.vertices();
  for (int v : fn.boundary()) x[static_cast<std::size_t>(v)].normalize();

  auto check_quality = [&](int iter) {
    const double q = fn.min_quality(x);
    if (q < cfg.quality_floor) {
      throw DegenerationError("triangle quality " + std::to_string(q) + " fell below floor " +
                              std::to_string(cfg.quality_floor) + " at iteration " + std::to_string(iter) +
                              "; remesh the input or enable remesh_every");
    }
    return q;
  };

  std::vector<Vec3> dir(nv);
  double sup = 0.0, slope = 0.0;
  auto direction = [&] {
    auto g = fn.gradient(x);
    fn.constrain(x, g);
    const auto mass = fn.lumped_mass(x);
    sup = 0.0;
    CompensatedSum s;
    for (std::size_t v = 0; v < nv; ++v) {
      dir[v] = -g[v] / mass[v];
      sup = std::max(sup, dir[v].norm());
      s += g[v].dot(dir[v]);
    }
    slope = s.value();
  };

  SolveTrace trace;
  double area = fn.area(x);
  trace.area.push_back(area);
  trace.min_quality.push_back(check_quality(0));
  direction();
  trace.grad_norm.push_back(sup);

  double step = cfg.step.initial_step;
  trace.reason = Termination::iteration_cap;
  std::vector<Vec3> trial(nv);
  for (int iter = 1;; ++iter) {
    if (sup <= cfg.grad_tol) {
      trace.reason = Termination::converged;
      break;
    }
    if (iter > cfg.max_iters) break;

    step = std::min(step, fn.step_cap(x, dir, cfg.step.max_displacement));
    bool accepted = false;
    double trial_area = 0.0;
    while (step >= cfg.step.min_step) {
      for (std::size_t v = 0; v < nv; ++v) trial[v] = x[v] + step * dir[v];
      for (int v : fn.boundary()) trial[static_cast<std::size_t>(v)].normalize();
      trial_area = fn.area(trial);
      if (std::isfinite(trial_area) && trial_area <= area + cfg.step.sufficient_decrease * step * slope) {
        accepted = true;
        break;
      }
      // Area differences at round-off level carry no information; fall back
      // to the approximate Wolfe test on the directional derivative.
      if (std::abs(trial_area - area) <= kRoundoffArea * area) {
        auto gt = fn.gradient(trial);
        fn.constrain(trial, gt);
        CompensatedSum d;
        for (std::size_t v = 0; v < nv; ++v) d += gt[v].dot(dir[v]);
        if (d.value() <= (2.0 * kApproxWolfeDelta - 1.0) * slope) {
          accepted = true;
          break;
        }
      }
      step *= cfg.step.backtrack;
    }
    if (!accepted) {
      trace.reason = Termination::line_search_stalled;
      break;
    }
    std::swap(x, trial);
    area = trial_area;
    step *= cfg.step.growth;

    if (cfg.remesh_every && iter % *cfg.remesh_every == 0) {
      auto smoothed = detail::tangential_smoothing(initial, x);
      const double smoothed_area = fn.area(smoothed);
      if (smoothed_area <= area) {
        x = std::move(smoothed);
        area = smoothed_area;
      }
    }
    trace.area.push_back(area);
    trace.min_quality.push_back(check_quality(iter));
    direction();
    trace.grad_norm.push_back(sup);
  }
  return {initial.with_positions(std::move(x)), std::move(trace)};
}

}  // namespace fbms
