#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fbms;

TEST(Generators, CatenoidParametersMatchIndependentRoot) {
  const auto p = solve_catenoid_params();
  EXPECT_NEAR(p.t0, 1.19968, 1e-4);
  EXPECT_NEAR(p.c, 0.46048, 1e-4);
  EXPECT_NEAR(p.t0, oracle::critical_t0(), 1e-14);
  EXPECT_NEAR(p.c, oracle::critical_c(), 1e-14);
  EXPECT_NEAR(p.t0 * std::tanh(p.t0), 1.0, 1e-12);
  EXPECT_NEAR(p.c * p.c * (std::cosh(p.t0) * std::cosh(p.t0) + p.t0 * p.t0), 1.0, 1e-14);
}

TEST(Generators, CatenoidDerivedQuantities) {
  const auto p = solve_catenoid_params();
  EXPECT_NEAR(p.area_sigma, oracle::catenoid_area(), 1e-12);
  EXPECT_NEAR(p.boundary_len, oracle::catenoid_boundary_length(), 1e-12);
  EXPECT_NEAR(p.area_omega, oracle::catenoid_shadow_area(), 1e-12);
  EXPECT_NEAR(p.area_omega, 6.9422, 1e-3);
  EXPECT_NEAR(p.cap_cosine, p.c * p.t0, 1e-15);
  // The free boundary identity between area and length holds exactly.
  EXPECT_NEAR(p.boundary_len, 2.0 * p.area_sigma, 1e-12);
  EXPECT_LT(p.area_sigma, 4 * std::numbers::pi);
}

TEST(Generators, BisectionFindsBracketedRoots) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 80), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 10), NumericalError);
}

TEST(Generators, CatenoidMeshStructure) {
  const auto c = generate_catenoid(64, 128);
  EXPECT_EQ(c.boundary_loops().size(), 2u);
  EXPECT_EQ(euler_characteristic(c).euler_char, 0);
  for (const auto& loop : c.boundary_loops()) {
    for (int v : loop) EXPECT_NEAR(vertex(c, v).norm(), 1.0, 1e-12);
  }
  EXPECT_NEAR(surface_area(c), 5.23741, 5e-3 * 5.23741);
  EXPECT_NEAR(boundary_length(c), 10.4748, 5e-3 * 10.4748);
}

TEST(Generators, CatenoidRejectsBadResolution) {
  EXPECT_THROW(generate_catenoid(1, 16), std::invalid_argument);
  EXPECT_THROW(generate_catenoid(8, 2), std::invalid_argument);
}

TEST(Generators, CatenoidMeanCurvatureAndOrthogonalityImproveUnderRefinement) {
  double prev_h = 1e9, prev_fb = 1e9;
  for (int l = 0; l < 3; ++l) {
    const auto row = convergence_row(Family::catenoid, l);
    EXPECT_LT(row.max_interior_mean_curvature, prev_h);
    EXPECT_LT(row.free_boundary, prev_fb);
    prev_h = row.max_interior_mean_curvature;
    prev_fb = row.free_boundary;
  }
}

TEST(Generators, DiskAreaAndTopology) {
  const auto d = generate_disk(6, Vec3::UnitZ(), 4);
  EXPECT_NEAR(surface_area(d), std::numbers::pi, 5e-3 * std::numbers::pi);
  for (int n : {3, 5, 6, 9}) {
    const auto t = euler_characteristic(generate_disk(n, Vec3(1, 2, 3), 1));
    EXPECT_EQ(t.euler_char, 1);
    EXPECT_EQ(t.genus, 0);
    EXPECT_EQ(t.num_boundary_loops, 1);
  }
  EXPECT_THROW(generate_disk(2), std::invalid_argument);
}

TEST(Generators, DiskLengthToAreaRatioTendsToTwo) {
  for (int n : {4, 6, 7}) {
    double prev = 1e9;
    for (int l = 0; l < 4; ++l) {
      const auto d = generate_disk(n, Vec3::UnitZ(), l);
      const double gap = std::abs(boundary_length(d) / surface_area(d) - 2.0);
      EXPECT_LT(gap, prev) << "n=" << n << " level " << l;
      prev = gap;
    }
  }
}

TEST(Generators, DiskLiesInRequestedPlaneWithBoundaryOnSphere) {
  const Vec3 n = Vec3(1, -1, 2).normalized();
  const auto d = generate_disk(7, n, 2);
  for (const auto& p : d.vertices()) EXPECT_NEAR(p.dot(n), 0.0, 1e-14);
  for (const auto& loop : d.boundary_loops()) {
    for (int v : loop) EXPECT_NEAR(vertex(d, v).norm(), 1.0, 1e-12);
  }
  EXPECT_GT(face_area_normal(d, d.faces()[0]).dot(n), 0.0);
}

TEST(Generators, ShellTopology) {
  const auto two = generate_near_sphere_shell(2, 0.4, 3);
  const auto t2 = euler_characteristic(two);
  EXPECT_EQ(t2.euler_char, 0);
  EXPECT_EQ(t2.num_boundary_loops, 2);
  const auto four = generate_near_sphere_shell(4, 0.3, 3);
  const auto t4 = euler_characteristic(four);
  EXPECT_EQ(t4.euler_char, -2);
  EXPECT_EQ(t4.num_boundary_loops, 4);
  EXPECT_EQ(t4.genus, 0);
  for (const auto& loop : four.boundary_loops()) {
    for (int v : loop) EXPECT_NEAR(vertex(four, v).norm(), 1.0, 1e-12);
  }
}

TEST(Generators, ShellAreaIsSphereMinusCaps) {
  const double r = 0.2;
  const auto s = generate_near_sphere_shell(2, r, 4);
  const double expected = 4 * std::numbers::pi - 2 * oracle::cap_area(r);
  EXPECT_NEAR(surface_area(s), expected, 1e-2 * expected);
}

TEST(Generators, OverlappingWindowsAreRejected) {
  EXPECT_THROW(generate_near_sphere_shell(6, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(generate_near_sphere_shell(0, 0.3, 3), std::invalid_argument);
  EXPECT_THROW(generate_near_sphere_shell(2, 1.6, 3), std::invalid_argument);
}

TEST(Generators, SphereIsOnRequestedSphere) {
  const auto s = generate_sphere(2, 0.5, Vec3(1, 2, 3));
  for (const auto& p : s.vertices()) EXPECT_NEAR((p - Vec3(1, 2, 3)).norm(), 0.5, 1e-15);
  EXPECT_EQ(euler_characteristic(s).euler_char, 2);
}

TEST(Generators, RadialNoiseIsSeededAndSparesBoundary) {
  const auto c = generate_catenoid(16, 32);
  const auto a = add_radial_noise(c, 0.01, 42);
  const auto b = add_radial_noise(c, 0.01, 42);
  const auto other = add_radial_noise(c, 0.01, 43);
  EXPECT_EQ(a.vertices(), b.vertices());
  EXPECT_NE(a.vertices(), other.vertices());
  for (int v = 0; v < c.num_vertices(); ++v) {
    const double ratio = vertex(a, v).norm() / vertex(c, v).norm();
    if (c.is_boundary_vertex(v)) EXPECT_EQ(vertex(a, v), vertex(c, v));
    else EXPECT_LE(std::abs(ratio - 1.0), 0.01 + 1e-15);
  }
}
