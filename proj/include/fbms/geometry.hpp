#pragma once

// Intrinsic and extrinsic discrete quantities on a TriangleMesh: areas,
// lengths, Euler characteristic, vertex normals, and the discrete curvatures
// (angle defect, cotangent mean curvature, boundary turning angle).

#include "fbms/mesh.hpp"

#include <Eigen/Geometry>

#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace fbms {

struct Topology {
  int euler_char = 0;
  int genus = 0;
  int num_boundary_loops = 0;
};

/// Scalar diagnostics of a surface Σ (and of its radial shadow Ω once known).
struct GeometryReport {
  double area_sigma = 0.0;
  double boundary_length = 0.0;
  double area_omega = 0.0;
  int euler_char = 0;
  int genus = 0;
  int num_boundary_loops = 0;
  std::uint64_t mesh_fingerprint = 0;
  std::map<std::string, double> residuals;
};

inline double face_area(const TriangleMesh& m, const Face& f) {
  return 0.5 * (vertex(m, f[1]) - vertex(m, f[0])).cross(vertex(m, f[2]) - vertex(m, f[0])).norm();
}

/// Unnormalized face normal with length twice the face area.
inline Vec3 face_area_normal(const TriangleMesh& m, const Face& f) {
  return (vertex(m, f[1]) - vertex(m, f[0])).cross(vertex(m, f[2]) - vertex(m, f[0]));
}

/// Interior angle of the triangle (a, b, c) at a.
inline double corner_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = b - a;
  const Vec3 v = c - a;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

inline double surface_area(const TriangleMesh& mesh) {
  CompensatedSum s;
  for (const auto& f : mesh.faces()) s += face_area(mesh, f);
  return s.value();
}

inline double boundary_length(const TriangleMesh& mesh) {
  CompensatedSum s;
  for (const auto& loop : mesh.boundary_loops()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      s += (vertex(mesh, loop[(i + 1) % loop.size()]) - vertex(mesh, loop[i])).norm();
    }
  }
  return s.value();
}

/// χ = V − E + F with genus from χ = 2 − 2γ − k. Requires one component.
inline Topology euler_characteristic(const TriangleMesh& mesh) {
  if (mesh.num_components() != 1) {
    throw MeshError("mesh has " + std::to_string(mesh.num_components()) +
                    " connected components; expected exactly one surface");
  }
  Topology t;
  t.euler_char = mesh.num_vertices() - mesh.num_edges() + mesh.num_faces();
  t.num_boundary_loops = static_cast<int>(mesh.boundary_loops().size());
  const int twice_genus = 2 - t.num_boundary_loops - t.euler_char;
  if (twice_genus < 0 || twice_genus % 2 != 0) {
    throw MeshError("inconsistent topology: chi=" + std::to_string(t.euler_char) +
                    " with k=" + std::to_string(t.num_boundary_loops));
  }
  t.genus = twice_genus / 2;
  return t;
}

/// Area-weighted unit vertex normals. Face orientation decides the sign,
/// except that the whole field is flipped when its area-weighted radial
/// component is negative, so radial graphs get the outward convention.
inline std::vector<Vec3> vertex_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> acc(static_cast<std::size_t>(mesh.num_vertices()), Vec3::Zero());
  CompensatedSum radial;
  CompensatedSum total;
  for (const auto& f : mesh.faces()) {
    const Vec3 n = face_area_normal(mesh, f);
    for (int v : f) acc[static_cast<std::size_t>(v)] += n;
    const Vec3 centroid = (vertex(mesh, f[0]) + vertex(mesh, f[1]) + vertex(mesh, f[2])) / 3.0;
    radial += n.dot(centroid);
    total += n.norm();
  }
  const double sign = radial.value() < -1e-12 * total.value() ? -1.0 : 1.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double len = acc[static_cast<std::size_t>(v)].norm();
    if (!(len > 1e-300)) {
      throw NumericalError("degenerate vertex normal at vertex " + std::to_string(v));
    }
    acc[static_cast<std::size_t>(v)] *= sign / len;
  }
  return acc;
}

/// Per-face share of the mixed Voronoi area at each corner.
inline std::array<double, 3> mixed_area_shares(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const std::array<Vec3, 3> p{p0, p1, p2};
  const double area = 0.5 * (p1 - p0).cross(p2 - p0).norm();
  std::array<double, 3> share{};
  std::array<double, 3> angle{};
  for (int k = 0; k < 3; ++k) angle[k] = corner_angle(p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
  const int obtuse = angle[0] > std::numbers::pi / 2 ? 0
                     : angle[1] > std::numbers::pi / 2 ? 1
                     : angle[2] > std::numbers::pi / 2 ? 2
                                                       : -1;
  if (obtuse < 0) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& a = p[k];
      const Vec3& b = p[(k + 1) % 3];
      const Vec3& c = p[(k + 2) % 3];
      // Voronoi region of a: edges ab (opposite angle at c) and ac (at b).
      share[k] = ((b - a).squaredNorm() / std::tan(angle[(k + 2) % 3]) +
                  (c - a).squaredNorm() / std::tan(angle[(k + 1) % 3])) /
                 8.0;
    }
  } else {
    for (int k = 0; k < 3; ++k) share[k] = k == obtuse ? area / 2.0 : area / 4.0;
  }
  return share;
}

inline std::vector<double> mixed_vertex_areas(const TriangleMesh& mesh) {
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(mesh.num_vertices()));
  for (const auto& f : mesh.faces()) {
    const auto s = mixed_area_shares(vertex(mesh, f[0]), vertex(mesh, f[1]), vertex(mesh, f[2]));
    for (int k = 0; k < 3; ++k) acc[static_cast<std::size_t>(f[k])] += s[k];
  }
  std::vector<double> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
  return out;
}

struct DiscreteCurvatures {
  std::vector<double> mixed_area;
  /// 2π − Σθ at interior vertices, 0 on the boundary.
  std::vector<double> angle_defect;
  /// angle_defect / mixed_area.
  std::vector<double> gauss;
  /// Mean curvature vector ½·(cotangent Laplacian of position)/area, i.e.
  /// the average of the principal curvatures times the inward normal.
  std::vector<Vec3> mean_curvature;
  /// π − Σθ at boundary vertices, 0 in the interior.
  std::vector<double> turning_angle;
  /// turning_angle / (half the adjacent boundary edge lengths); 0 inside.
  std::vector<double> geodesic_curvature;
};

inline DiscreteCurvatures discrete_curvatures(const TriangleMesh& mesh) {
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  DiscreteCurvatures out;
  out.mixed_area = mixed_vertex_areas(mesh);
  std::vector<CompensatedSum> angle_sum(nv);
  std::vector<Vec3> lap(nv, Vec3::Zero());
  for (const auto& f : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      const int i = f[k];
      const int j = f[(k + 1) % 3];
      const int l = f[(k + 2) % 3];
      const Vec3& a = vertex(mesh, i);
      const Vec3& b = vertex(mesh, j);
      const Vec3& c = vertex(mesh, l);
      angle_sum[static_cast<std::size_t>(i)] += corner_angle(a, b, c);
      // cot of the angle at i weights the opposite edge (j, l).
      const Vec3 u = b - a;
      const Vec3 v = c - a;
      const double cot = u.dot(v) / u.cross(v).norm();
      lap[static_cast<std::size_t>(j)] += 0.5 * cot * (c - b);
      lap[static_cast<std::size_t>(l)] += 0.5 * cot * (b - c);
    }
  }
  out.angle_defect.assign(nv, 0.0);
  out.gauss.assign(nv, 0.0);
  out.mean_curvature.assign(nv, Vec3::Zero());
  out.turning_angle.assign(nv, 0.0);
  out.geodesic_curvature.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    const double theta = angle_sum[v].value();
    out.mean_curvature[v] = 0.5 * lap[v] / out.mixed_area[v];
    if (mesh.is_boundary_vertex(static_cast<int>(v))) {
      out.turning_angle[v] = std::numbers::pi - theta;
      const auto [prev, next] = mesh.boundary_neighbors(static_cast<int>(v));
      const Vec3& p = vertex(mesh, static_cast<int>(v));
      const double dual = 0.5 * ((p - vertex(mesh, prev)).norm() + (vertex(mesh, next) - p).norm());
      out.geodesic_curvature[v] = out.turning_angle[v] / dual;
    } else {
      out.angle_defect[v] = 2.0 * std::numbers::pi - theta;
      out.gauss[v] = out.angle_defect[v] / out.mixed_area[v];
    }
  }
  return out;
}

/// |Σ angle defects + Σ turning angles − 2πχ|.
inline double gauss_bonnet_residual(const TriangleMesh& mesh) {
  const auto curv = discrete_curvatures(mesh);
  CompensatedSum s;
  for (std::size_t v = 0; v < curv.angle_defect.size(); ++v) {
    s += curv.angle_defect[v];
    s += curv.turning_angle[v];
  }
  const int chi = mesh.num_vertices() - mesh.num_edges() + mesh.num_faces();
  return std::abs(s.value() - 2.0 * std::numbers::pi * chi);
}

/// 4√3·A / (l₀² + l₁² + l₂²); 1 for equilateral triangles.
inline double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double area = 0.5 * (b - a).cross(c - a).norm();
  const double denom = (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
  return denom > 0 ? 4.0 * std::sqrt(3.0) * area / denom : 0.0;
}

inline double min_triangle_quality(const TriangleMesh& mesh) {
  double q = 1.0;
  for (const auto& f : mesh.faces()) {
    q = std::min(q, triangle_quality(vertex(mesh, f[0]), vertex(mesh, f[1]), vertex(mesh, f[2])));
  }
  return q;
}

/// Mean edge length (used for exclusion bands and tolerances).
inline double mean_edge_length(const TriangleMesh& mesh) {
  CompensatedSum s;
  for (const auto& [e, count] : mesh.edge_face_counts()) {
    s += (vertex(mesh, e.second) - vertex(mesh, e.first)).norm();
  }
  return s.value() / static_cast<double>(mesh.num_edges());
}

/// Area, boundary length and topology of Σ. area_omega and the residual map
/// are filled in by the verification pipeline.
inline GeometryReport geometry_report(const TriangleMesh& mesh) {
  GeometryReport r;
  const Topology t = euler_characteristic(mesh);
  r.area_sigma = surface_area(mesh);
  r.boundary_length = boundary_length(mesh);
  r.euler_char = t.euler_char;
  r.genus = t.genus;
  r.num_boundary_loops = t.num_boundary_loops;
  r.mesh_fingerprint = mesh.fingerprint();
  r.residuals["gauss_bonnet"] = gauss_bonnet_residual(mesh);
  return r;
}

}  // namespace fbms
