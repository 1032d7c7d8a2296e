#pragma once

// Test-only meshes and seeded random helpers.

#include "fbms/fbms.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fixtures {

using fbms::Face;
using fbms::TriangleMesh;
using fbms::Vec3;

/// Band on S² between two wavy curves φ = φ0 ∓ a·sin(mθ) around the
/// equator. With a·m² large compared to the band curvature, the boundary is
/// not convex.
inline TriangleMesh wavy_band(int n_rows, int n_theta, double phi0 = 0.7, double amp = 0.25, int m = 5) {
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (int i = 0; i <= n_rows; ++i) {
    const double s = static_cast<double>(i) / n_rows;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n_theta;
      const double top = phi0 + amp * std::sin(m * th);
      const double bottom = std::numbers::pi - phi0 - amp * std::sin(m * th);
      const double phi = top + s * (bottom - top);
      v.emplace_back(std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi));
    }
  }
  auto id = [n_theta](int i, int j) { return i * n_theta + (j % n_theta); };
  for (int i = 0; i < n_rows; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      f.push_back({a, b, c});
      f.push_back({a, c, d});
    }
  }
  TriangleMesh band(std::move(v), std::move(f));
  // Outward (radial) orientation.
  if (fbms::face_area_normal(band, band.faces()[0]).dot(band.vertices()[0]) < 0) {
    std::vector<Face> flipped = band.faces();
    for (auto& face : flipped) std::swap(face[1], face[2]);
    band = TriangleMesh(band.vertices(), std::move(flipped));
  }
  return band;
}

/// Upper hemisphere: the disk lifted vertically onto S².
inline TriangleMesh hemisphere(int levels) {
  return fbms::spanning_cap(fbms::generate_disk(6, Vec3::UnitZ(), levels), Vec3::UnitZ());
}

/// Small sphere off the origin: every ray that hits it crosses it twice.
inline TriangleMesh translated_sphere(int subdivisions = 2) {
  return fbms::generate_sphere(subdivisions, 0.25, Vec3(0.0, 0.0, 0.5));
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline TriangleMesh transformed(const TriangleMesh& m, const Eigen::Matrix3d& R, double scale = 1.0,
                                const Vec3& shift = Vec3::Zero()) {
  std::vector<Vec3> p = m.vertices();
  for (auto& x : p) x = scale * (R * x) + shift;
  return m.with_positions(std::move(p));
}

/// Equatorial disk with an out-of-plane bump that is odd under x ↦ −x.
/// The disk generator is centrally symmetric, so antipodal vertex pairs
/// exist; the perturbation keeps the configuration antipodally symmetric.
inline TriangleMesh odd_perturbed_disk(int levels, double amp, std::uint64_t seed) {
  const TriangleMesh d = fbms::generate_disk(6, Vec3::UnitZ(), levels);
  std::vector<Vec3> p = d.vertices();
  const int n = d.num_vertices();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    if (d.is_boundary_vertex(i)) continue;
    int partner = -1;
    for (int j = 0; j < n; ++j) {
      if ((vertex(d, i) + vertex(d, j)).norm() < 1e-12) partner = j;
    }
    if (partner <= i) continue;
    const double s = amp * xi(rng) * (1.0 - p[static_cast<std::size_t>(i)].squaredNorm());
    p[static_cast<std::size_t>(i)].z() += s;
    p[static_cast<std::size_t>(partner)].z() -= s;
  }
  return d.with_positions(std::move(p));
}

/// A randomly chosen valid mesh from the generator families, with optional
/// interior noise. Used by the property tests.
inline TriangleMesh random_mesh(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> noise(0.0, 0.02);
  std::uniform_int_distribution<int> small(0, 2);
  TriangleMesh m;
  switch (kind(rng)) {
    case 0: m = fbms::generate_catenoid(4 + 4 * small(rng), 8 + 8 * small(rng)); break;
    case 1: m = fbms::generate_disk(3 + small(rng) * 2, Vec3(0.3, -0.2, 1.0), 1 + small(rng)); break;
    case 2: m = fbms::generate_sphere(1 + small(rng)); break;
    default: m = fbms::generate_near_sphere_shell(2 + small(rng), 0.5, 2); break;
  }
  return fbms::add_radial_noise(m, noise(rng), rng());
}

}  // namespace fixtures
