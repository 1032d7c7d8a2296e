#pragma once

// Radial structure of a surface in the ball: projection to S², injectivity,
// spherical areas, the tilt-excess and divergence identities, the radial
// graph mean curvature formula, boundary convexity of the shadow, and the
// boundary flux blow-up on the critical catenoid.

#include "fbms/generators.hpp"
#include "fbms/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace fbms {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// u sampled on a spherical domain, surface point (1 − u)·p. Gradient and
/// Hessian are expressed in the per-vertex orthonormal frame (e1, e2).
struct RadialGraphField {
  TriangleMesh domain;
  std::vector<double> u;
  std::vector<Vec2> grad_u;
  std::vector<Mat2> hess_u;
  std::vector<std::array<Vec3, 2>> frame;
};

struct RadialProjection {
  TriangleMesh omega;
  bool injective = false;
  std::optional<RadialGraphField> u_field;
};

// ---------------------------------------------------------------------------
// Spherical primitives

inline double arc_length(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Area of the geodesic triangle with unit vertices, by L'Huilier's formula.
inline double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double la = arc_length(b, c);
  const double lb = arc_length(c, a);
  const double lc = arc_length(a, b);
  const double s = 0.5 * (la + lb + lc);
  const double prod = std::tan(0.5 * s) * std::tan(0.5 * (s - la)) * std::tan(0.5 * (s - lb)) *
                      std::tan(0.5 * (s - lc));
  return 4.0 * std::atan(std::sqrt(std::max(prod, 0.0)));
}

/// Angle at a between the great-circle arcs toward b and c.
inline double spherical_corner_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 tb = b - a.dot(b) * a;
  const Vec3 tc = c - a.dot(c) * a;
  return std::atan2(tb.cross(tc).norm(), tb.dot(tc));
}

inline double spherical_area(const TriangleMesh& omega) {
  CompensatedSum s;
  for (const auto& f : omega.faces()) {
    s += spherical_triangle_area(vertex(omega, f[0]), vertex(omega, f[1]), vertex(omega, f[2]));
  }
  return s.value();
}

/// Per-vertex quadrature weights on a spherical mesh: mixed Voronoi shares of
/// each flat face rescaled to that face's spherical area. They sum to
/// spherical_area(omega).
inline std::vector<double> spherical_vertex_weights(const TriangleMesh& omega) {
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(omega.num_vertices()));
  for (const auto& f : omega.faces()) {
    const Vec3& a = vertex(omega, f[0]);
    const Vec3& b = vertex(omega, f[1]);
    const Vec3& c = vertex(omega, f[2]);
    const double flat = 0.5 * (b - a).cross(c - a).norm();
    const double scale = spherical_triangle_area(a, b, c) / flat;
    const auto share = mixed_area_shares(a, b, c);
    for (int k = 0; k < 3; ++k) acc[static_cast<std::size_t>(f[k])] += scale * share[k];
  }
  std::vector<double> w(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) w[i] = acc[i].value();
  return w;
}

/// Tangent frame at a unit vector p, deterministic in p.
inline std::array<Vec3, 2> sphere_frame(const Vec3& p) {
  const auto [e1, e2] = detail::tangent_basis(p);
  return {e1, e2};
}

/// Exponential-map (normal) coordinates of q around p in the frame.
inline Vec2 normal_coordinates(const Vec3& p, const std::array<Vec3, 2>& frame, const Vec3& q) {
  const Vec3 t = q - p.dot(q) * p;
  const double tn = t.norm();
  if (tn == 0.0) return Vec2::Zero();
  const double angle = arc_length(p, q);
  return angle / tn * Vec2(t.dot(frame[0]), t.dot(frame[1]));
}

// ---------------------------------------------------------------------------
// Projection and injectivity

namespace detail {

/// Uniform grid over [-1,1]³ bucketing spherical faces by an inflated
/// bounding box of their vertices.
class FaceGrid {
 public:
  FaceGrid(const TriangleMesh& omega, double cell) {
    res_ = std::clamp(static_cast<int>(std::ceil(2.0 / cell)), 1, 96);
    cells_.assign(static_cast<std::size_t>(res_ * res_ * res_), {});
    for (int fi = 0; fi < omega.num_faces(); ++fi) {
      const auto& f = omega.faces()[static_cast<std::size_t>(fi)];
      Vec3 lo = vertex(omega, f[0]);
      Vec3 hi = lo;
      double edge = 0.0;
      for (int k = 0; k < 3; ++k) {
        lo = lo.cwiseMin(vertex(omega, f[k]));
        hi = hi.cwiseMax(vertex(omega, f[k]));
        edge = std::max(edge, (vertex(omega, f[(k + 1) % 3]) - vertex(omega, f[k])).norm());
      }
      lo.array() -= edge;
      hi.array() += edge;
      const auto a = index(lo);
      const auto b = index(hi);
      for (int i = a[0]; i <= b[0]; ++i) {
        for (int j = a[1]; j <= b[1]; ++j) {
          for (int k = a[2]; k <= b[2]; ++k) cells_[flat(i, j, k)].push_back(fi);
        }
      }
    }
  }

  const std::vector<int>& candidates(const Vec3& q) const {
    const auto c = index(q);
    return cells_[flat(c[0], c[1], c[2])];
  }

 private:
  std::array<int, 3> index(const Vec3& x) const {
    std::array<int, 3> out{};
    for (int d = 0; d < 3; ++d) {
      out[d] = std::clamp(static_cast<int>(std::floor((x[d] + 1.0) * 0.5 * res_)), 0, res_ - 1);
    }
    return out;
  }
  std::size_t flat(int i, int j, int k) const {
    return static_cast<std::size_t>((i * res_ + j) * res_ + k);
  }

  int res_ = 1;
  std::vector<std::vector<int>> cells_;
};

/// Strict containment of unit q in the spherical triangle (a, b, c) whose
/// orientation sign is `sign`.
inline bool strictly_inside(const Vec3& a, const Vec3& b, const Vec3& c, double sign, const Vec3& q) {
  constexpr double eps = 1e-13;
  if (q.dot(a + b + c) <= 0) return false;
  return sign * a.cross(b).dot(q) > eps && sign * b.cross(c).dot(q) > eps &&
         sign * c.cross(a).dot(q) > eps;
}

inline bool projection_is_injective(const TriangleMesh& omega) {
  // One orientation sign for every face, no degenerate face.
  std::vector<double> orient(omega.faces().size());
  int positive = 0;
  int negative = 0;
  for (std::size_t fi = 0; fi < omega.faces().size(); ++fi) {
    const auto& f = omega.faces()[fi];
    const Vec3& a = vertex(omega, f[0]);
    const Vec3& b = vertex(omega, f[1]);
    const Vec3& c = vertex(omega, f[2]);
    const double det = a.cross(b).dot(c);
    const double flat = 0.5 * (b - a).cross(c - a).norm();
    if (flat < kMinFaceArea || det == 0.0) return false;
    orient[fi] = det > 0 ? 1.0 : -1.0;
    (det > 0 ? positive : negative) += 1;
  }
  if (positive > 0 && negative > 0) return false;
  if (spherical_area(omega) > 4.0 * std::numbers::pi * (1.0 + 1e-9)) return false;

  // Coverage degree at face centroids and vertices must not exceed one.
  const FaceGrid grid(omega, 2.0 * mean_edge_length(omega));
  auto covered_elsewhere = [&](const Vec3& q, auto&& skip) {
    for (int g : grid.candidates(q)) {
      if (skip(g)) continue;
      const auto& f = omega.faces()[static_cast<std::size_t>(g)];
      if (strictly_inside(vertex(omega, f[0]), vertex(omega, f[1]), vertex(omega, f[2]),
                          orient[static_cast<std::size_t>(g)], q)) {
        return true;
      }
    }
    return false;
  };
  for (int fi = 0; fi < omega.num_faces(); ++fi) {
    const auto& f = omega.faces()[static_cast<std::size_t>(fi)];
    const Vec3 q = (vertex(omega, f[0]) + vertex(omega, f[1]) + vertex(omega, f[2])).normalized();
    if (covered_elsewhere(q, [fi](int g) { return g == fi; })) return false;
  }
  for (int v = 0; v < omega.num_vertices(); ++v) {
    const Vec3& q = vertex(omega, v);
    auto incident = [&omega, v](int g) {
      const auto& f = omega.faces()[static_cast<std::size_t>(g)];
      return f[0] == v || f[1] == v || f[2] == v;
    };
    if (covered_elsewhere(q, incident)) return false;
  }
  return true;
}

}  // namespace detail

/// Weighted least-squares quadric fit of u over the two-ring in normal
/// coordinates; returns u's gradient and Hessian at every domain vertex.
inline RadialGraphField fit_radial_field(const TriangleMesh& domain, std::vector<double> u) {
  const auto nv = static_cast<std::size_t>(domain.num_vertices());
  RadialGraphField field{domain, std::move(u), {}, {}, {}};
  field.grad_u.assign(nv, Vec2::Zero());
  field.hess_u.assign(nv, Mat2::Zero());
  field.frame.resize(nv);
  const auto& nbrs = domain.vertex_neighbors();
  for (std::size_t v = 0; v < nv; ++v) {
    const Vec3& p = domain.vertices()[v];
    field.frame[v] = sphere_frame(p);
    std::vector<int> ring;
    for (int w : nbrs[v]) {
      ring.push_back(w);
      for (int x : nbrs[static_cast<std::size_t>(w)]) ring.push_back(x);
    }
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    ring.erase(std::remove(ring.begin(), ring.end(), static_cast<int>(v)), ring.end());

    const int rows = static_cast<int>(ring.size());
    const bool quadric = rows >= 7;
    const int cols = quadric ? 5 : 2;
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (int r = 0; r < rows; ++r) {
      const auto w = static_cast<std::size_t>(ring[static_cast<std::size_t>(r)]);
      const Vec2 x = normal_coordinates(p, field.frame[v], domain.vertices()[w]);
      const double weight = 1.0 / x.norm();
      A(r, 0) = weight * x[0];
      A(r, 1) = weight * x[1];
      if (quadric) {
        A(r, 2) = weight * 0.5 * x[0] * x[0];
        A(r, 3) = weight * x[0] * x[1];
        A(r, 4) = weight * 0.5 * x[1] * x[1];
      }
      b[r] = weight * (field.u[w] - field.u[v]);
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
    field.grad_u[v] = Vec2(sol[0], sol[1]);
    if (quadric) field.hess_u[v] << sol[2], sol[3], sol[3], sol[4];
  }
  return field;
}

/// Projects x ↦ x/|x|. The projection is injective when the shadow faces
/// share one orientation, none is degenerate, and no face centroid or vertex
/// is strictly covered by a second face. When injective and 0 ≤ u < 1, the
/// radial field u = 1 − |x| with fitted derivatives is attached.
inline RadialProjection radial_project(const TriangleMesh& mesh) {
  std::vector<Vec3> p = mesh.vertices();
  std::vector<double> u(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double r = p[v].norm();
    if (r < 1e-9) {
      throw MeshError("radial projection is degenerate: vertex " + std::to_string(v) + " lies at the origin");
    }
    p[v] /= r;
    u[v] = 1.0 - r;
  }
  RadialProjection out;
  out.omega = mesh.with_positions(std::move(p), GeometryCheck::topology_only);
  out.injective = detail::projection_is_injective(out.omega);
  if (!out.injective) return out;
  out.omega = out.omega.with_positions(out.omega.vertices());
  for (auto& x : u) {
    if (std::abs(x) < 1e-12) x = 0.0;
    if (x < 0.0 || x >= 1.0) return out;
  }
  out.u_field = fit_radial_field(out.omega, std::move(u));
  return out;
}

// ---------------------------------------------------------------------------
// Integral identities on Ω

struct TiltExcess {
  double area_omega = 0.0;
  double area_sigma = 0.0;
  /// |Ω| − |Σ|
  double lhs = 0.0;
  /// ½ ∫_Ω |ν∘π⁻¹ − ν_S²|²
  double rhs = 0.0;
  /// ∫_Ω (1 − ⟨ν∘π⁻¹, ν_S²⟩), the same integral through the inner product
  double rhs_inner = 0.0;
  double residual = 0.0;
  /// max over vertices of |½|ν − p|² − (1 − ⟨ν, p⟩)|
  double max_pointwise_gap = 0.0;
};

/// `normals[i]` is the unit normal of Σ at the preimage of omega vertex i.
inline TiltExcess tilt_excess(const TriangleMesh& omega, std::span<const Vec3> normals, double area_sigma) {
  if (normals.size() != omega.vertices().size()) {
    throw std::invalid_argument("tilt_excess: one normal per domain vertex required");
  }
  const auto w = spherical_vertex_weights(omega);
  CompensatedSum half_sq;
  CompensatedSum inner;
  TiltExcess t;
  for (std::size_t v = 0; v < w.size(); ++v) {
    const Vec3& p = omega.vertices()[v];
    const double a = 0.5 * (normals[v] - p).squaredNorm();
    const double b = 1.0 - normals[v].dot(p);
    half_sq += w[v] * a;
    inner += w[v] * b;
    t.max_pointwise_gap = std::max(t.max_pointwise_gap, std::abs(a - b));
  }
  t.area_omega = spherical_area(omega);
  t.area_sigma = area_sigma;
  t.lhs = t.area_omega - area_sigma;
  t.rhs = half_sq.value();
  t.rhs_inner = inner.value();
  t.residual = std::abs(t.lhs - t.rhs);
  return t;
}

namespace detail {
inline void require_same_connectivity(const RadialGraphField& field, const TriangleMesh& sigma) {
  if (field.domain.faces() != sigma.faces() || field.domain.num_vertices() != sigma.num_vertices()) {
    throw std::invalid_argument("radial field and surface mesh have different connectivity");
  }
}
}  // namespace detail

inline TiltExcess tilt_excess(const RadialGraphField& field, const TriangleMesh& sigma) {
  detail::require_same_connectivity(field, sigma);
  const auto normals = vertex_normals(sigma);
  return tilt_excess(field.domain, normals, surface_area(sigma));
}

/// |∫_Ω ⟨ν∘π⁻¹, ν_S²⟩ − |Σ||.
inline double divergence_identity(const TriangleMesh& omega, std::span<const Vec3> normals, double area_sigma) {
  if (normals.size() != omega.vertices().size()) {
    throw std::invalid_argument("divergence_identity: one normal per domain vertex required");
  }
  const auto w = spherical_vertex_weights(omega);
  CompensatedSum flux;
  for (std::size_t v = 0; v < w.size(); ++v) flux += w[v] * normals[v].dot(omega.vertices()[v]);
  return std::abs(flux.value() - area_sigma);
}

inline double divergence_identity(const RadialGraphField& field, const TriangleMesh& sigma) {
  detail::require_same_connectivity(field, sigma);
  const auto normals = vertex_normals(sigma);
  return divergence_identity(field.domain, normals, surface_area(sigma));
}

// ---------------------------------------------------------------------------
// Mean curvature of X(p) = (1 − u(p)) p

struct RadialCurvatureForms {
  /// H from div(∇u/W) + 2(1−u)/W, divided by (1 − u); W² = (1−u)² + |∇u|².
  double divergence_form = 0.0;
  /// H = (EN − 2MF + GL)/(EG − F²) from the fundamental forms.
  double fundamental_form = 0.0;
};

/// Both algebraic routes at one point, derivatives in an orthonormal frame
/// (normal coordinates, so the covariant Hessian is the coordinate one).
inline RadialCurvatureForms mean_curvature_radial_forms(double u, const Vec2& grad, const Mat2& hess) {
  if (!(u < 1.0)) throw std::domain_error("mean_curvature_radial: requires u < 1");
  const double a = 1.0 - u;
  const double g2 = grad.squaredNorm();
  const double W2 = a * a + g2;
  const double W = std::sqrt(W2);

  RadialCurvatureForms out;
  // ∇W = (−a∇u + Hess(u)∇u)/W, then div(∇u/W) = Δu/W − ⟨∇u, ∇W⟩/W².
  const Vec2 gradW = (-a * grad + hess * grad) / W;
  const double divergence = hess.trace() / W - grad.dot(gradW) / W2;
  out.divergence_form = (divergence + 2.0 * a / W) / a;

  const double u1 = grad[0], u2 = grad[1];
  const double E = u1 * u1 + a * a;
  const double F = u1 * u2;
  const double G = u2 * u2 + a * a;
  const double L = ((a + hess(0, 0)) * a + 2.0 * u1 * u1) / W;
  const double M = (hess(0, 1) * a + 2.0 * u1 * u2) / W;
  const double N = ((a + hess(1, 1)) * a + 2.0 * u2 * u2) / W;
  out.fundamental_form = (E * N - 2.0 * M * F + G * L) / (E * G - F * F);
  return out;
}

/// Relative agreement demanded between the two routes.
inline constexpr double kRadialFormsTolerance = 1e-12;

inline double mean_curvature_radial(double u, const Vec2& grad, const Mat2& hess) {
  const auto f = mean_curvature_radial_forms(u, grad, hess);
  const double scale = std::max({1.0, std::abs(f.divergence_form), std::abs(f.fundamental_form)});
  if (std::abs(f.divergence_form - f.fundamental_form) > kRadialFormsTolerance * scale) {
    throw NumericalError("radial mean curvature: algebraic forms disagree");
  }
  return f.divergence_form;
}

/// H at every domain vertex farther than `band_edges` mean edge lengths from
/// ∂Ω (where |∇u| blows up); NaN inside the band.
inline std::vector<double> mean_curvature_field(const RadialGraphField& field, double band_edges = 2.0) {
  const TriangleMesh& dom = field.domain;
  const double band = band_edges * mean_edge_length(dom);
  std::vector<int> boundary;
  for (const auto& loop : dom.boundary_loops()) boundary.insert(boundary.end(), loop.begin(), loop.end());
  std::vector<double> H(field.u.size(), std::numeric_limits<double>::quiet_NaN());
  for (int v = 0; v < dom.num_vertices(); ++v) {
    double dist = std::numeric_limits<double>::infinity();
    for (int b : boundary) dist = std::min(dist, arc_length(vertex(dom, v), vertex(dom, b)));
    if (dist <= band) continue;
    const auto i = static_cast<std::size_t>(v);
    H[i] = mean_curvature_radial_forms(field.u[i], field.grad_u[i], field.hess_u[i]).divergence_form;
  }
  return H;
}

// ---------------------------------------------------------------------------
// Convexity of ∂Ω in S²

/// Geodesic curvature of ∂Ω per boundary vertex, positive when the boundary
/// turns toward the complementary disk: (θ_Ω − π)/(half the adjacent arc
/// lengths), θ_Ω the spherical angle sum on the Ω side. Interior vertices 0.
inline std::vector<double> boundary_geodesic_curvatures(const TriangleMesh& omega) {
  std::vector<CompensatedSum> angle(static_cast<std::size_t>(omega.num_vertices()));
  for (const auto& f : omega.faces()) {
    for (int k = 0; k < 3; ++k) {
      angle[static_cast<std::size_t>(f[k])] +=
          spherical_corner_angle(vertex(omega, f[k]), vertex(omega, f[(k + 1) % 3]), vertex(omega, f[(k + 2) % 3]));
    }
  }
  std::vector<double> kappa(angle.size(), 0.0);
  for (const auto& loop : omega.boundary_loops()) {
    for (int v : loop) {
      const auto [prev, next] = omega.boundary_neighbors(v);
      const double dual = 0.5 * (arc_length(vertex(omega, prev), vertex(omega, v)) +
                                 arc_length(vertex(omega, v), vertex(omega, next)));
      kappa[static_cast<std::size_t>(v)] = (angle[static_cast<std::size_t>(v)].value() - std::numbers::pi) / dual;
    }
  }
  return kappa;
}

/// Minimum boundary geodesic curvature of Ω; ≥ 0 means every boundary
/// component is convex.
inline double boundary_convexity(const TriangleMesh& omega) {
  if (!omega.has_boundary()) throw std::invalid_argument("boundary_convexity: domain has no boundary");
  const auto kappa = boundary_geodesic_curvatures(omega);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& loop : omega.boundary_loops()) {
    for (int v : loop) lo = std::min(lo, kappa[static_cast<std::size_t>(v)]);
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Critical catenoid as a radial graph u(φ), φ the polar angle

class CatenoidRadialProfile {
 public:
  explicit CatenoidRadialProfile(const CatenoidParams& p) : p_(p) {}

  const CatenoidParams& params() const { return p_; }
  double boundary_polar_angle() const { return p_.boundary_polar_angle(); }

  /// Catenoid parameter t hit by the ray at polar angle φ: cot φ = t / cosh t.
  double parameter_at(double phi) const {
    const double target = std::cos(phi) / std::sin(phi);
    return bisect([target](double t) { return t / std::cosh(t) - target; }, -p_.t0, p_.t0, 200);
  }

  double u(double phi) const {
    const double t = parameter_at(phi);
    return 1.0 - p_.c * std::hypot(std::cosh(t), t);
  }

  /// du/dφ.
  double du(double phi) const {
    const double t = parameter_at(phi);
    const double ch = std::cosh(t);
    const double sh = std::sinh(t);
    const double r = p_.c * std::hypot(ch, t);
    const double dr_dt = p_.c * p_.c * (ch * sh + t) / r;
    const double dg_dt = (ch - t * sh) / (ch * ch);
    const double s = std::sin(phi);
    const double dt_dphi = -1.0 / (s * s * dg_dt);
    return -dr_dt * dt_dphi;
  }

 private:
  CatenoidParams p_;
};

struct BlowupRow {
  double epsilon = 0.0;
  /// −∫_{∂Ω_ε} ⟨∇u, ν_ε⟩ / W
  double flux = 0.0;
  /// 2|Ω_ε|
  double twice_area = 0.0;
  /// max |∇u| over Ω_ε
  double max_grad = 0.0;
  /// |flux − 2|Σ||
  double gap = 0.0;
};

/// Flux of ∇u/W through ∂Ω_ε on the exact critical catenoid profile, with
/// Ω_ε = {dist(p, ∂Ω) > ε}. θ is integrated with the trapezoid rule.
inline std::vector<BlowupRow> boundary_blowup_diagnostic(const CatenoidParams& params,
                                                         std::span<const double> epsilons,
                                                         int n_theta = 64) {
  const CatenoidRadialProfile prof(params);
  const double phi_b = prof.boundary_polar_angle();
  const double half_width = std::numbers::pi / 2 - phi_b;
  std::vector<BlowupRow> rows;
  for (double eps : epsilons) {
    if (!(eps > 0.0) || eps >= half_width) {
      throw std::invalid_argument("boundary_blowup_diagnostic: epsilon must lie in (0, " +
                                  std::to_string(half_width) + ")");
    }
    const double phi_top = phi_b + eps;
    const double phi_bottom = std::numbers::pi - phi_b - eps;
    auto circle_flux = [&](double phi, double outward_sign) {
      const double a = 1.0 - prof.u(phi);
      const double d = prof.du(phi);
      const double W = std::hypot(a, d);
      // ∇u = u'(φ) e_φ, ν_ε = outward_sign · e_φ.
      CompensatedSum s;
      const double h = 2.0 * std::numbers::pi / n_theta;
      for (int j = 0; j < n_theta; ++j) s += -(d * outward_sign) / W * std::sin(phi) * h;
      return s.value();
    };
    BlowupRow row;
    row.epsilon = eps;
    row.flux = circle_flux(phi_top, -1.0) + circle_flux(phi_bottom, 1.0);
    row.twice_area = 2.0 * 2.0 * std::numbers::pi * (std::cos(phi_top) - std::cos(phi_bottom));
    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
      const double phi = phi_top + (std::numbers::pi / 2 - phi_top) * i / samples;
      row.max_grad = std::max(row.max_grad, std::abs(prof.du(phi)));
    }
    row.gap = std::abs(row.flux - params.boundary_len);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fbms
