#pragma once

// Reference values computed independently of the library: closed forms,
// a Newton root for the catenoid parameter, and finite differences on the
// exact catenoid viewed as a radial graph over S².

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

using V3 = Eigen::Vector3d;

/// Newton on t·tanh t − 1 from t = 1.2.
inline double critical_t0() {
  double t = 1.2;
  for (int i = 0; i < 50; ++i) {
    const double f = t * std::tanh(t) - 1.0;
    const double sech = 1.0 / std::cosh(t);
    const double df = std::tanh(t) + t * sech * sech;
    t -= f / df;
  }
  return t;
}

inline double critical_c() {
  const double t = critical_t0();
  return 1.0 / std::sqrt(std::cosh(t) * std::cosh(t) + t * t);
}

/// ∫_{−t0}^{t0} 2π c cosh t · c cosh t dt.
inline double catenoid_area() {
  const double t = critical_t0();
  const double c = critical_c();
  return 2.0 * std::numbers::pi * c * c * (t + std::sinh(t) * std::cosh(t));
}

inline double catenoid_boundary_length() { return 4.0 * std::numbers::pi * critical_c() * std::cosh(critical_t0()); }

/// S² minus two caps whose boundary circles sit at height ±c·t0.
inline double catenoid_shadow_area() { return 4.0 * std::numbers::pi * critical_c() * critical_t0(); }

/// Geodesic curvature in S² of a latitude circle at height h.
inline double latitude_geodesic_curvature(double h) { return h / std::sqrt(1.0 - h * h); }

inline double cap_area(double geodesic_radius) { return 2.0 * std::numbers::pi * (1.0 - std::cos(geodesic_radius)); }

/// σ_j of the unit disk in ascending order: 0, 1, 1, 2, 2, ...
inline double disk_steklov(int j) { return static_cast<double>((j + 1) / 2); }

/// Parameter t of the catenoid point seen along direction q (|q| = 1), from
/// t / cosh t = z / ρ, by bisection on (−t0, t0) where the map is monotone.
inline double catenoid_parameter_along(const V3& q) {
  const double t0 = critical_t0();
  const double target = q.z() / std::hypot(q.x(), q.y());
  double lo = -t0, hi = t0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid / std::cosh(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// u(q) = 1 − |X| for the catenoid point X on the ray through q.
inline double catenoid_u(const V3& q) {
  const double t = catenoid_parameter_along(q.normalized());
  return 1.0 - critical_c() * std::sqrt(std::cosh(t) * std::cosh(t) + t * t);
}

struct Jet {
  double value = 0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

/// Value, gradient and Hessian of f at p ∈ S² in geodesic normal
/// coordinates, by central differences of step h.
inline Jet normal_coordinate_jet(const std::function<double(const V3&)>& f, const V3& p, double h) {
  V3 a = std::abs(p.x()) < 0.9 ? V3::UnitX() : V3::UnitY();
  const V3 e1 = (a - a.dot(p) * p).normalized();
  const V3 e2 = p.cross(e1);
  auto at = [&](double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return f(p);
    const V3 dir = (x * e1 + y * e2) / r;
    return f(std::cos(r) * p + std::sin(r) * dir);
  };
  Jet j;
  j.value = at(0, 0);
  j.grad = {(at(h, 0) - at(-h, 0)) / (2 * h), (at(0, h) - at(0, -h)) / (2 * h)};
  j.hess(0, 0) = (at(h, 0) - 2 * j.value + at(-h, 0)) / (h * h);
  j.hess(1, 1) = (at(0, h) - 2 * j.value + at(0, -h)) / (h * h);
  j.hess(0, 1) = j.hess(1, 0) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
  return j;
}

}  // namespace oracle
