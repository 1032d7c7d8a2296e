#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace fbms;

namespace {

TriangleMesh right_triangle() {
  return TriangleMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const MeshError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Mesh, RightTriangleArea) {
  const auto m = right_triangle();
  EXPECT_DOUBLE_EQ(surface_area(m), 0.5);
  EXPECT_EQ(m.boundary_loops().size(), 1u);
  EXPECT_NEAR(boundary_length(m), 2.0 + std::sqrt(2.0), 1e-15);
}

TEST(Mesh, EmptyFaceListHasZeroArea) {
  EXPECT_EQ(surface_area(TriangleMesh({}, {})), 0.0);
}

TEST(Mesh, DiskAreaAndCircumference) {
  const auto d = generate_disk(6, Vec3::UnitZ(), 4);
  EXPECT_NEAR(surface_area(d), std::numbers::pi, 5e-3 * std::numbers::pi);
  EXPECT_NEAR(boundary_length(d), 2 * std::numbers::pi, 5e-3 * 2 * std::numbers::pi);
}

TEST(Mesh, ClosedMeshHasNoBoundaryLength) {
  const auto s = generate_sphere(2);
  EXPECT_FALSE(s.has_boundary());
  EXPECT_EQ(boundary_length(s), 0.0);
}

TEST(Mesh, CatenoidAreaAndLengthMatchClosedForms) {
  const auto c = generate_catenoid(64, 128);
  EXPECT_NEAR(surface_area(c), oracle::catenoid_area(), 5e-3 * oracle::catenoid_area());
  EXPECT_NEAR(boundary_length(c), oracle::catenoid_boundary_length(), 5e-3 * oracle::catenoid_boundary_length());
}

TEST(Mesh, EulerCharacteristicOfReferenceSurfaces) {
  const auto disk = euler_characteristic(generate_disk(8, Vec3::UnitZ(), 2));
  EXPECT_EQ(disk.euler_char, 1);
  EXPECT_EQ(disk.genus, 0);
  EXPECT_EQ(disk.num_boundary_loops, 1);
  const auto annulus = euler_characteristic(generate_catenoid(16, 32));
  EXPECT_EQ(annulus.euler_char, 0);
  EXPECT_EQ(annulus.genus, 0);
  EXPECT_EQ(annulus.num_boundary_loops, 2);
  const auto sphere = euler_characteristic(generate_sphere(2));
  EXPECT_EQ(sphere.euler_char, 2);
  EXPECT_EQ(sphere.genus, 0);
  EXPECT_EQ(sphere.num_boundary_loops, 0);
}

TEST(Mesh, DisconnectedMeshIsRejectedForTopology) {
  const TriangleMesh two({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}}, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_EQ(two.num_components(), 2);
  EXPECT_THROW(euler_characteristic(two), MeshError);
  EXPECT_THROW(geometry_report(two), MeshError);
}

TEST(Mesh, FlatDiskNormalsPointUp) {
  const auto d = generate_disk(6, Vec3::UnitZ(), 3);
  const auto n = vertex_normals(d);
  for (int v = 0; v < d.num_vertices(); ++v) {
    EXPECT_NEAR((n[static_cast<std::size_t>(v)] - Vec3::UnitZ()).norm(), 0.0, 1e-14);
  }
}

TEST(Mesh, SphereNormalsAreRadial) {
  const auto s = generate_sphere(4);
  const auto n = vertex_normals(s);
  for (int v = 0; v < s.num_vertices(); ++v) {
    EXPECT_LT((n[static_cast<std::size_t>(v)] - vertex(s, v)).norm(), 1e-2);
  }
}

TEST(Mesh, InwardOrientedSphereStillGetsOutwardNormals) {
  const auto s = generate_sphere(2);
  std::vector<Face> flipped = s.faces();
  for (auto& f : flipped) std::swap(f[1], f[2]);
  const auto n = vertex_normals(TriangleMesh(s.vertices(), flipped));
  for (int v = 0; v < s.num_vertices(); ++v) EXPECT_GT(n[static_cast<std::size_t>(v)].dot(vertex(s, v)), 0.99);
}

TEST(Mesh, CatenoidBoundaryNormalsBecomeTangentToSphere) {
  double previous = 1.0;
  for (int l = 0; l < 3; ++l) {
    const auto c = generate_catenoid(16 << l, 32 << l);
    const auto n = vertex_normals(c);
    double worst = 0.0;
    for (const auto& loop : c.boundary_loops()) {
      for (int v : loop) worst = std::max(worst, std::abs(n[static_cast<std::size_t>(v)].dot(vertex(c, v))));
    }
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LT(previous, 2e-2);
}

TEST(Mesh, FoldedStarHasDegenerateNormal) {
  // Two faces folded onto each other: their normals cancel at the shared edge.
  const TriangleMesh fold({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}}, {{0, 1, 2}, {0, 2, 3}});
  try {
    vertex_normals(fold);
    FAIL() << "expected a degenerate-normal error";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("vertex 0"), std::string::npos) << e.what();
  }
}

TEST(Mesh, FlatDiskCurvatures) {
  const auto d = generate_disk(6, Vec3::UnitZ(), 3);
  const auto curv = discrete_curvatures(d);
  double turning = 0.0;
  for (int v = 0; v < d.num_vertices(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (d.is_boundary_vertex(v)) turning += curv.turning_angle[i];
    else {
      EXPECT_NEAR(curv.gauss[i], 0.0, 1e-12);
      EXPECT_NEAR(curv.mean_curvature[i].norm(), 0.0, 1e-12);
    }
  }
  EXPECT_NEAR(turning, 2 * std::numbers::pi, 1e-12);
}

TEST(Mesh, SphereAngleDefectsSumToFourPi) {
  const auto s = generate_sphere(3);
  const auto curv = discrete_curvatures(s);
  CompensatedSum sum;
  for (double d : curv.angle_defect) sum += d;
  EXPECT_NEAR(sum.value(), 4 * std::numbers::pi, 1e-11);
}

TEST(Mesh, CatenoidGaussCurvatureIsNegativeInside) {
  const auto c = generate_catenoid(32, 64);
  const auto curv = discrete_curvatures(c);
  for (int v = 0; v < c.num_vertices(); ++v) {
    if (c.is_boundary_vertex(v)) continue;
    bool next_to_boundary = false;
    for (int w : c.vertex_neighbors()[static_cast<std::size_t>(v)]) next_to_boundary |= c.is_boundary_vertex(w);
    if (!next_to_boundary) EXPECT_LT(curv.gauss[static_cast<std::size_t>(v)], 0.0) << "vertex " << v;
  }
}

TEST(Mesh, CatenoidGaussCurvatureMatchesAnalyticValueAtWaist) {
  // Row index n_t/2 is the waist t = 0 where K = −1/c².
  const int nt = 64, nth = 128;
  const auto c = generate_catenoid(nt, nth);
  const auto curv = discrete_curvatures(c);
  const double expected = -1.0 / (oracle::critical_c() * oracle::critical_c());
  const int v = (nt / 2) * nth;
  EXPECT_NEAR(std::abs(vertex(c, v).z()), 0.0, 1e-12);
  EXPECT_NEAR(curv.gauss[static_cast<std::size_t>(v)], expected, 2e-2 * std::abs(expected));
}

TEST(Mesh, GaussBonnetIsExactOnReferenceMeshes) {
  for (const auto& m : {generate_disk(6, Vec3::UnitZ(), 3), generate_catenoid(32, 64), generate_sphere(3),
                        generate_near_sphere_shell(4, 0.3, 3)}) {
    EXPECT_LE(gauss_bonnet_residual(m), 1e-10 * (m.num_vertices() + m.num_faces()));
  }
}

TEST(Mesh, InvalidMeshesNameTheOffendingElement) {
  const std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  EXPECT_NE(error_of([&] { TriangleMesh(p, {{0, 1, 7}}); }).find("face 0"), std::string::npos);
  EXPECT_NE(error_of([&] { TriangleMesh(p, {{0, 1, 2}, {1, 1, 3}}); }).find("face 1 repeats"), std::string::npos);
  EXPECT_NE(error_of([&] { TriangleMesh(p, {{0, 1, 2}, {1, 2, 3}}); }).find("edge (1,2)"), std::string::npos);
  EXPECT_NE(error_of([&] { TriangleMesh(p, {{0, 1, 2}}); }).find("vertex 3"), std::string::npos);
  EXPECT_NE(error_of([&] { TriangleMesh({{0, 0, 0}, {1, 0, 0}, {2, 1e-20, 0}}, {{0, 1, 2}}); }).find("degenerate"),
            std::string::npos);
  EXPECT_NE(error_of([&] { TriangleMesh({{0, 0, 0}, {1, 0, 0}, {0.5, 1e-7, 0}}, {{0, 1, 2}}); }).find("aspect ratio"),
            std::string::npos);
}

TEST(Mesh, BowtieVertexIsNotAManifoldStar) {
  // Two triangles touching only at vertex 0.
  const std::string msg = error_of([] {
    TriangleMesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {-1, 0, 0}, {-1, -1, 0}}, {{0, 1, 2}, {0, 3, 4}});
  });
  EXPECT_NE(msg.find("vertex 0 star"), std::string::npos) << msg;
}

TEST(Mesh, BoundaryLoopsCoverSingleFaceEdges) {
  const auto c = generate_catenoid(8, 16);
  std::size_t boundary_edges = 0;
  for (const auto& [e, count] : c.edge_face_counts()) boundary_edges += count == 1;
  std::size_t loop_edges = 0;
  for (const auto& loop : c.boundary_loops()) loop_edges += loop.size();
  EXPECT_EQ(boundary_edges, loop_edges);
  for (const auto& loop : c.boundary_loops()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i], b = loop[(i + 1) % loop.size()];
      EXPECT_EQ(c.edge_face_counts().at({std::min(a, b), std::max(a, b)}), 1);
    }
  }
}

TEST(Mesh, ObjRoundTripIsExact) {
  const auto m = add_radial_noise(generate_catenoid(8, 16), 0.05, 3);
  std::stringstream ss;
  write_obj(ss, m);
  const auto back = read_obj(ss);
  EXPECT_EQ(back.faces(), m.faces());
  ASSERT_EQ(back.num_vertices(), m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(vertex(back, v), vertex(m, v));
  EXPECT_EQ(back.fingerprint(), m.fingerprint());
}

TEST(Mesh, ObjReaderAcceptsSlashesAndRelativeIndices) {
  std::istringstream in(
      "# triangle\n"
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\n"
      "f -3/1/1 -2//1 -1\n");
  const auto m = read_obj(in);
  EXPECT_EQ(m.num_faces(), 1);
  EXPECT_DOUBLE_EQ(surface_area(m), 0.5);
}

TEST(Mesh, ObjReaderRejectsQuadsAndBadIndices) {
  std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  EXPECT_THROW(read_obj(quad), MeshError);
  std::istringstream zero("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
  EXPECT_THROW(read_obj(zero), MeshError);
  EXPECT_THROW(read_obj(std::string("/nonexistent/mesh.obj")), std::runtime_error);
}
