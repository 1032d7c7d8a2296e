#pragma once

// Discrete Steklov eigenproblem S φ = σ B φ with piecewise-linear cotangent
// stiffness S and lumped boundary mass B, reduced to the boundary by the
// Dirichlet-to-Neumann Schur complement.

#include "fbms/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace fbms {

struct SpectralResult {
  /// Ascending σ₀ ≤ σ₁ ≤ …
  std::vector<double> eigenvalues;
  int requested = 0;
  /// Boundary vertex order used for the traces.
  std::vector<int> boundary_vertices;
  /// Column j is the B-normalized boundary trace of eigenfunction j.
  Eigen::MatrixXd traces;
  double boundary_length = 0.0;
  std::uint64_t mesh_fingerprint = 0;

  double sigma1() const {
    if (eigenvalues.size() < 2) throw std::logic_error("spectrum has fewer than two eigenvalues");
    return eigenvalues[1];
  }
};

/// Cotangent stiffness (Dirichlet energy form), assembled in face order.
inline Eigen::SparseMatrix<double> cotangent_stiffness(const TriangleMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.faces().size() * 12);
  for (const auto& f : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      const int i = f[k];
      const int j = f[(k + 1) % 3];
      const int l = f[(k + 2) % 3];
      const Vec3 u = vertex(mesh, j) - vertex(mesh, i);
      const Vec3 v = vertex(mesh, l) - vertex(mesh, i);
      const double w = 0.5 * u.dot(v) / u.cross(v).norm();
      trip.emplace_back(j, l, -w);
      trip.emplace_back(l, j, -w);
      trip.emplace_back(j, j, w);
      trip.emplace_back(l, l, w);
    }
  }
  Eigen::SparseMatrix<double> S(mesh.num_vertices(), mesh.num_vertices());
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

/// Lumped boundary mass: half the adjacent boundary edge lengths.
inline std::vector<double> boundary_mass(const TriangleMesh& mesh) {
  std::vector<double> m(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (const auto& loop : mesh.boundary_loops()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const double half = 0.5 * (vertex(mesh, b) - vertex(mesh, a)).norm();
      m[static_cast<std::size_t>(a)] += half;
      m[static_cast<std::size_t>(b)] += half;
    }
  }
  return m;
}

/// Dense Dirichlet-to-Neumann matrix on the boundary vertices (in the given
/// order): S_bb − S_bi S_ii⁻¹ S_ib.
inline Eigen::MatrixXd dirichlet_to_neumann(const TriangleMesh& mesh, std::vector<int>& boundary_order) {
  const int n = mesh.num_vertices();
  boundary_order.clear();
  for (const auto& loop : mesh.boundary_loops()) boundary_order.insert(boundary_order.end(), loop.begin(), loop.end());
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<int> interior;
  for (std::size_t i = 0; i < boundary_order.size(); ++i) local[static_cast<std::size_t>(boundary_order[i])] = static_cast<int>(i);
  for (int v = 0; v < n; ++v) {
    if (local[static_cast<std::size_t>(v)] < 0) {
      local[static_cast<std::size_t>(v)] = static_cast<int>(interior.size());
      interior.push_back(v);
    }
  }
  const int nb = static_cast<int>(boundary_order.size());
  const int ni = static_cast<int>(interior.size());
  const Eigen::SparseMatrix<double> S = cotangent_stiffness(mesh);

  std::vector<Eigen::Triplet<double>> tii, tib;
  Eigen::MatrixXd Sbb = Eigen::MatrixXd::Zero(nb, nb);
  for (int col = 0; col < S.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      const bool rb = mesh.is_boundary_vertex(r);
      const bool cb = mesh.is_boundary_vertex(c);
      const int lr = local[static_cast<std::size_t>(r)];
      const int lc = local[static_cast<std::size_t>(c)];
      if (rb && cb) {
        Sbb(lr, lc) += it.value();
      } else if (!rb && !cb) {
        tii.emplace_back(lr, lc, it.value());
      } else if (!rb && cb) {
        tib.emplace_back(lr, lc, it.value());
      }
    }
  }
  if (ni == 0) return Sbb;
  Eigen::SparseMatrix<double> Sii(ni, ni), Sib(ni, nb);
  Sii.setFromTriplets(tii.begin(), tii.end());
  Sib.setFromTriplets(tib.begin(), tib.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Sii);
  if (ldlt.info() != Eigen::Success) throw NumericalError("steklov: interior stiffness factorization failed");
  const Eigen::MatrixXd X = ldlt.solve(Eigen::MatrixXd(Sib));
  if (ldlt.info() != Eigen::Success) throw NumericalError("steklov: interior solve failed");
  Eigen::MatrixXd dtn = Sbb - Eigen::MatrixXd(Sib.transpose()) * X;
  return 0.5 * (dtn + dtn.transpose());
}

/// The k smallest Steklov eigenvalues with their boundary traces.
inline SpectralResult steklov_spectrum(const TriangleMesh& mesh, int k) {
  if (!mesh.has_boundary()) throw std::invalid_argument("steklov_spectrum: mesh has no boundary");
  if (mesh.num_components() != 1) throw std::invalid_argument("steklov_spectrum: mesh must be connected");
  if (k < 1) throw std::invalid_argument("steklov_spectrum: k must be positive");

  SpectralResult res;
  const Eigen::MatrixXd dtn = dirichlet_to_neumann(mesh, res.boundary_vertices);
  const int nb = static_cast<int>(res.boundary_vertices.size());
  if (k > nb) throw std::invalid_argument("steklov_spectrum: k exceeds the number of boundary vertices");

  const auto mass = boundary_mass(mesh);
  Eigen::VectorXd inv_sqrt(nb);
  for (int i = 0; i < nb; ++i) inv_sqrt[i] = 1.0 / std::sqrt(mass[static_cast<std::size_t>(res.boundary_vertices[static_cast<std::size_t>(i)])]);
  const Eigen::MatrixXd C = inv_sqrt.asDiagonal() * dtn * inv_sqrt.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.info() != Eigen::Success) throw NumericalError("steklov: dense eigensolver failed");

  res.requested = k;
  for (int j = 0; j < k; ++j) res.eigenvalues.push_back(std::max(0.0, eig.eigenvalues()[j]));
  res.traces = inv_sqrt.asDiagonal() * eig.eigenvectors().leftCols(k);
  // Residual of the pencil, as a sanity report.
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd phi = res.traces.col(j);
    Eigen::VectorXd Bphi(nb);
    for (int i = 0; i < nb; ++i) Bphi[i] = phi[i] / (inv_sqrt[i] * inv_sqrt[i]);
    const double r = (dtn * phi - eig.eigenvalues()[j] * Bphi).norm();
    if (!(r <= 1e-6 * std::max(1.0, dtn.norm()) * phi.norm())) {
      throw NumericalError("steklov: eigenpair " + std::to_string(j) + " residual " + std::to_string(r));
    }
  }
  res.boundary_length = boundary_length(mesh);
  res.mesh_fingerprint = mesh.fingerprint();
  return res;
}

/// Rayleigh quotient xᵀSx / x_bᵀBx_b of a vertex function.
inline double steklov_rayleigh_quotient(const TriangleMesh& mesh, const Eigen::VectorXd& f) {
  const Eigen::SparseMatrix<double> S = cotangent_stiffness(mesh);
  const auto mass = boundary_mass(mesh);
  CompensatedSum denom;
  for (int v = 0; v < mesh.num_vertices(); ++v) denom += mass[static_cast<std::size_t>(v)] * f[v] * f[v];
  return f.dot(S * f) / denom.value();
}

/// Kokarev's bound and the σ₁ = 1 prediction, read off a spectrum and a
/// geometry report of the same mesh.
inline std::map<std::string, double> conjecture_checks(const SpectralResult& result, const GeometryReport& report) {
  if (result.mesh_fingerprint != report.mesh_fingerprint) {
    throw std::invalid_argument("conjecture_checks: spectrum and report come from different meshes");
  }
  const double s1 = result.sigma1();
  if (!(s1 > 1e-8)) throw std::invalid_argument("conjecture_checks: sigma_1 vanishes (disconnected boundary?)");
  std::map<std::string, double> out;
  const double bound = 8.0 * std::numbers::pi;
  out["sigma1"] = s1;
  out["sigma1_times_boundary_length"] = s1 * report.boundary_length;
  out["kokarev_margin"] = bound - s1 * report.boundary_length;
  out["sigma1_minus_one"] = std::abs(s1 - 1.0);
  out["two_sigma1_area"] = 2.0 * s1 * report.area_sigma;
  out["two_sigma1_area_margin"] = bound - 2.0 * s1 * report.area_sigma;
  return out;
}

}  // namespace fbms
