#pragma once

// Reference surfaces with closed-form ground truth (equatorial disk, critical
// catenoid) and seed meshes for the solver.

#include "fbms/geometry.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace fbms {

/// The critical catenoid X(t,θ) = c(cosh t cos θ, cosh t sin θ, t),
/// t ∈ [−t0, t0], meeting the unit sphere orthogonally.
struct CatenoidParams {
  double t0 = 0.0;
  double c = 0.0;
  double area_sigma = 0.0;    // 2πc²(t0 + sinh t0 cosh t0)
  double boundary_len = 0.0;  // 4πc cosh t0
  double area_omega = 0.0;    // 4πc t0
  double cap_cosine = 0.0;    // c t0, cosine of the polar angle of ∂Ω

  /// Polar angle of the upper boundary circle.
  double boundary_polar_angle() const { return std::acos(cap_cosine); }
};

/// Bisection root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (!(flo * fhi <= 0.0)) throw NumericalError("bisect: root not bracketed");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline CatenoidParams solve_catenoid_params() {
  CatenoidParams p;
  // Orthogonality at the sphere: ⟨X, ν⟩ ∝ cosh t − t sinh t = 0.
  p.t0 = bisect([](double t) { return t * std::tanh(t) - 1.0; }, 1.0, 1.5, 60);
  if (std::abs(p.t0 * std::tanh(p.t0) - 1.0) > 1e-12) {
    throw NumericalError("catenoid boundary parameter did not converge");
  }
  const double ch = std::cosh(p.t0);
  p.c = 1.0 / std::sqrt(ch * ch + p.t0 * p.t0);
  p.area_sigma = 2.0 * std::numbers::pi * p.c * p.c * (p.t0 + std::sinh(p.t0) * ch);
  p.boundary_len = 4.0 * std::numbers::pi * p.c * ch;
  p.area_omega = 4.0 * std::numbers::pi * p.c * p.t0;
  p.cap_cosine = p.c * p.t0;
  return p;
}

/// Uniform (t, θ) grid with alternating quad diagonals, outward oriented.
/// Rows t = ±t0 are the two boundary loops on the unit sphere.
inline TriangleMesh generate_catenoid(int n_t, int n_theta) {
  if (n_t < 2 || n_theta < 3) {
    throw std::invalid_argument("generate_catenoid: need n_t >= 2 and n_theta >= 3");
  }
  const CatenoidParams p = solve_catenoid_params();
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>((n_t + 1) * n_theta));
  for (int i = 0; i <= n_t; ++i) {
    const double t = -p.t0 + 2.0 * p.t0 * i / n_t;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n_theta;
      Vec3 x(p.c * std::cosh(t) * std::cos(th), p.c * std::cosh(t) * std::sin(th), p.c * t);
      if (i == 0 || i == n_t) x.normalize();
      verts.push_back(x);
    }
  }
  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(2 * n_t * n_theta));
  auto id = [n_theta](int i, int j) { return i * n_theta + (j % n_theta); };
  for (int i = 0; i < n_t; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = id(i, j), b = id(i, j + 1), c = id(i + 1, j + 1), d = id(i + 1, j);
      if ((i + j) % 2 == 0) {
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
      } else {
        faces.push_back({a, b, d});
        faces.push_back({b, c, d});
      }
    }
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

namespace detail {

/// Midpoint (1→4) subdivision. `snap` is applied to new vertices created on
/// boundary edges.
inline TriangleMesh midpoint_subdivide(const TriangleMesh& mesh,
                                       const std::function<Vec3(const Vec3&)>& snap_boundary) {
  std::vector<Vec3> verts = mesh.vertices();
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    Vec3 m = 0.5 * (verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]);
    if (mesh.edge_face_counts().at(key) == 1 && snap_boundary) m = snap_boundary(m);
    verts.push_back(m);
    const int idx = static_cast<int>(verts.size()) - 1;
    mid.emplace(key, idx);
    return idx;
  };
  std::vector<Face> faces;
  faces.reserve(mesh.faces().size() * 4);
  for (const auto& f : mesh.faces()) {
    const int ab = midpoint(f[0], f[1]);
    const int bc = midpoint(f[1], f[2]);
    const int ca = midpoint(f[2], f[0]);
    faces.push_back({f[0], ab, ca});
    faces.push_back({ab, f[1], bc});
    faces.push_back({ca, bc, f[2]});
    faces.push_back({ab, bc, ca});
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

/// Orthonormal (e1, e2) with e1 × e2 = n.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& n) {
  const Vec3 axis = std::abs(n.x()) <= std::abs(n.y()) && std::abs(n.x()) <= std::abs(n.z())
                        ? Vec3::UnitX()
                    : std::abs(n.y()) <= std::abs(n.z()) ? Vec3::UnitY()
                                                         : Vec3::UnitZ();
  const Vec3 e1 = axis.cross(n).normalized();
  const Vec3 e2 = n.cross(e1);
  return {e1, e2};
}

}  // namespace detail

/// Regular n-gon fan refined `levels` times, with every vertex pushed along
/// its ray so the polygon rings become circles; boundary on the unit circle.
/// Lies in the plane through 0 with unit normal `plane_normal`, oriented so
/// face normals equal it.
inline TriangleMesh generate_disk(int n, const Vec3& plane_normal = Vec3::UnitZ(), int levels = 0) {
  if (n < 3) throw std::invalid_argument("generate_disk: need n >= 3");
  if (levels < 0) throw std::invalid_argument("generate_disk: levels must be >= 0");
  if (!(plane_normal.norm() > 0)) throw std::invalid_argument("generate_disk: zero plane normal");
  std::vector<Vec3> verts{Vec3::Zero()};
  std::vector<Face> faces;
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * std::numbers::pi * j / n;
    verts.emplace_back(std::cos(a), std::sin(a), 0.0);
    faces.push_back({0, 1 + j, 1 + (j + 1) % n});
  }
  TriangleMesh planar(std::move(verts), std::move(faces));
  for (int l = 0; l < levels; ++l) planar = detail::midpoint_subdivide(planar, nullptr);

  const double apothem = std::cos(std::numbers::pi / n);
  const double sector = 2.0 * std::numbers::pi / n;
  const Vec3 normal = plane_normal.normalized();
  const auto [e1, e2] = detail::tangent_basis(normal);
  std::vector<Vec3> out;
  out.reserve(planar.vertices().size());
  for (const auto& v : planar.vertices()) {
    const double r = std::hypot(v.x(), v.y());
    double x = v.x(), y = v.y();
    if (r > 0) {
      double psi = std::atan2(y, x);
      if (psi < 0) psi += 2.0 * std::numbers::pi;
      const double k = std::floor(psi / sector);
      const double edge_radius = apothem / std::cos(psi - (k + 0.5) * sector);
      double scaled = r / edge_radius;
      if (std::abs(scaled - 1.0) < 1e-12) scaled = 1.0;
      x = scaled * std::cos(psi);
      y = scaled * std::sin(psi);
    }
    out.push_back(x * e1 + y * e2);
  }
  return planar.with_positions(std::move(out));
}

/// Icosphere of the given subdivision level, scaled and translated.
inline TriangleMesh generate_sphere(int subdivisions, double radius = 1.0,
                                    const Vec3& center = Vec3::Zero()) {
  if (subdivisions < 0) throw std::invalid_argument("generate_sphere: subdivisions must be >= 0");
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v{{-1, g, 0}, {1, g, 0},  {-1, -g, 0}, {1, -g, 0}, {0, -1, g},  {0, 1, g},
                      {0, -1, -g}, {0, 1, -g}, {g, 0, -1},  {g, 0, 1},  {-g, 0, -1}, {-g, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Face> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  TriangleMesh m(std::move(v), std::move(f));
  for (int s = 0; s < subdivisions; ++s) {
    m = detail::midpoint_subdivide(m, nullptr);
    std::vector<Vec3> p = m.vertices();
    for (auto& x : p) x.normalize();
    m = m.with_positions(std::move(p));
  }
  std::vector<Vec3> p = m.vertices();
  for (auto& x : p) x = center + radius * x;
  return m.with_positions(std::move(p));
}

/// Deterministic, well-spread window centers on S².
inline std::vector<Vec3> window_centers(int count) {
  std::vector<Vec3> c;
  switch (count) {
    case 1: c = {Vec3::UnitZ()}; break;
    case 2: c = {Vec3::UnitZ(), -Vec3::UnitZ()}; break;
    case 3:
      for (int j = 0; j < 3; ++j) {
        const double a = 2.0 * std::numbers::pi * j / 3.0;
        c.emplace_back(std::cos(a), std::sin(a), 0.0);
      }
      break;
    case 4: {
      const double s = 1.0 / std::sqrt(3.0);
      c = {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
      break;
    }
    case 6:
      c = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};
      break;
    default:
      // Fibonacci lattice.
      for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(1.0 - z * z);
        const double a = std::numbers::pi * (3.0 - std::sqrt(5.0)) * i;
        c.emplace_back(r * std::cos(a), r * std::sin(a), z);
      }
  }
  return c;
}

/// Subdivided unit sphere with `num_windows` spherical caps of geodesic
/// radius `window_radius` removed (faces whose centroid direction lies in a
/// cap). Genus zero with k = num_windows boundary loops on S².
inline TriangleMesh generate_near_sphere_shell(int num_windows, double window_radius, int subdivisions) {
  if (num_windows < 1) throw std::invalid_argument("near-sphere shell: need at least one window");
  if (!(window_radius > 0.0) || window_radius >= std::numbers::pi / 2) {
    throw std::invalid_argument("near-sphere shell: window radius must lie in (0, pi/2)");
  }
  const auto centers = window_centers(num_windows);
  for (int a = 0; a < num_windows; ++a) {
    for (int b = a + 1; b < num_windows; ++b) {
      const double sep = std::acos(std::clamp(centers[static_cast<std::size_t>(a)].dot(
                                                  centers[static_cast<std::size_t>(b)]),
                                              -1.0, 1.0));
      if (sep <= 2.0 * window_radius) {
        throw std::invalid_argument("near-sphere shell: windows overlap");
      }
    }
  }
  const TriangleMesh sphere = generate_sphere(subdivisions);
  const double cos_r = std::cos(window_radius);
  std::vector<char> keep(sphere.faces().size(), 1);
  for (std::size_t fi = 0; fi < sphere.faces().size(); ++fi) {
    const auto& f = sphere.faces()[fi];
    const Vec3 dir = (vertex(sphere, f[0]) + vertex(sphere, f[1]) + vertex(sphere, f[2])).normalized();
    for (const auto& c : centers) {
      if (dir.dot(c) > cos_r) keep[fi] = 0;
    }
  }
  // Drop the faces around pinch vertices until every star is a (half-)disk.
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::vector<int>> star(sphere.vertices().size());
    for (std::size_t fi = 0; fi < keep.size(); ++fi) {
      if (!keep[fi]) continue;
      for (int v : sphere.faces()[fi]) star[static_cast<std::size_t>(v)].push_back(static_cast<int>(fi));
    }
    for (std::size_t v = 0; v < star.size(); ++v) {
      if (star[v].empty()) continue;
      std::map<int, int> next;
      std::map<int, int> indeg;
      for (int fi : star[v]) {
        const auto& f = sphere.faces()[static_cast<std::size_t>(fi)];
        int k = 0;
        while (f[k] != static_cast<int>(v)) ++k;
        next[f[(k + 1) % 3]] = f[(k + 2) % 3];
        ++indeg[f[(k + 2) % 3]];
        indeg.try_emplace(f[(k + 1) % 3], 0);
      }
      int open = 0;
      for (const auto& [w, d] : indeg) open += d == 0;
      if (open > 1) {
        for (int fi : star[v]) keep[static_cast<std::size_t>(fi)] = 0;
        changed = true;
      }
    }
  }
  std::vector<int> remap(sphere.vertices().size(), -1);
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  for (std::size_t fi = 0; fi < keep.size(); ++fi) {
    if (!keep[fi]) continue;
    Face nf{};
    for (int k = 0; k < 3; ++k) {
      const int v = sphere.faces()[fi][k];
      if (remap[static_cast<std::size_t>(v)] < 0) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(verts.size());
        verts.push_back(vertex(sphere, v));
      }
      nf[k] = remap[static_cast<std::size_t>(v)];
    }
    faces.push_back(nf);
  }
  TriangleMesh shell(std::move(verts), std::move(faces));
  std::vector<Vec3> p = shell.vertices();
  for (const auto& loop : shell.boundary_loops()) {
    for (int v : loop) p[static_cast<std::size_t>(v)].normalize();
  }
  shell = shell.with_positions(std::move(p));
  if (static_cast<int>(shell.boundary_loops().size()) != num_windows) {
    throw std::invalid_argument("near-sphere shell: window radius too small for this subdivision level");
  }
  return shell;
}

/// Multiplies every interior vertex by (1 + amplitude·ξ), ξ ~ U[−1, 1].
inline TriangleMesh add_radial_noise(const TriangleMesh& mesh, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  std::vector<Vec3> p = mesh.vertices();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double s = 1.0 + amplitude * xi(rng);
    if (!mesh.is_boundary_vertex(v)) p[static_cast<std::size_t>(v)] *= s;
  }
  return mesh.with_positions(std::move(p));
}

}  // namespace fbms
