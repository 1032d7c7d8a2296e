#pragma once

// Indexed triangle surfaces with derived boundary loops and structural
// validation, plus ASCII OBJ import/export.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fbms {

using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Structural or geometric violation of the TriangleMesh invariants.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (non-convergence, breakdown) inside an algorithm.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier-compensated accumulator. Callers add terms in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Faces with smaller area, or with longest-edge^2 / (2 area) above the aspect
// limit, are rejected: cotangent weights are unusable there.
inline constexpr double kMinFaceArea = 1e-14;
inline constexpr double kMaxAspectRatio = 1e6;

enum class GeometryCheck { full, topology_only };

/// Oriented, manifold triangle mesh. Connectivity is immutable after
/// construction; every instance satisfies the structural invariants.
class TriangleMesh {
 public:
  TriangleMesh() = default;

  TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces,
               GeometryCheck check = GeometryCheck::full)
      : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    build_topology();
    if (check == GeometryCheck::full) validate_geometry();
  }

  /// Same connectivity, new positions. Re-runs the geometric checks only.
  TriangleMesh with_positions(std::vector<Vec3> positions,
                              GeometryCheck check = GeometryCheck::full) const {
    if (positions.size() != vertices_.size()) {
      throw MeshError("with_positions: expected " + std::to_string(vertices_.size()) +
                      " positions, got " + std::to_string(positions.size()));
    }
    TriangleMesh out = *this;
    out.vertices_ = std::move(positions);
    if (check == GeometryCheck::full) out.validate_geometry();
    return out;
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<std::vector<int>>& boundary_loops() const { return loops_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_edges() const { return static_cast<int>(edge_faces_.size()); }
  bool has_boundary() const { return !loops_.empty(); }
  bool is_boundary_vertex(int v) const { return boundary_flag_[static_cast<std::size_t>(v)] != 0; }

  /// Undirected edges (a < b) with their incident face count.
  const std::map<std::pair<int, int>, int>& edge_face_counts() const { return edge_faces_; }

  /// Faces incident to each vertex, in face index order.
  const std::vector<std::vector<int>>& vertex_faces() const { return vertex_faces_; }

  /// Sorted vertex neighbours.
  const std::vector<std::vector<int>>& vertex_neighbors() const { return neighbors_; }

  /// Number of connected components of the face graph.
  int num_components() const { return components_; }

  /// For a boundary vertex: previous and next vertex along its loop.
  std::pair<int, int> boundary_neighbors(int v) const {
    const auto& [loop, pos] = boundary_position_[static_cast<std::size_t>(v)];
    if (loop < 0) throw MeshError("vertex " + std::to_string(v) + " is not on the boundary");
    const auto& l = loops_[static_cast<std::size_t>(loop)];
    const int n = static_cast<int>(l.size());
    return {l[static_cast<std::size_t>((pos + n - 1) % n)], l[static_cast<std::size_t>((pos + 1) % n)]};
  }

  /// Cheap identity tag used to pair results computed on the same mesh.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    mix(vertices_.size());
    mix(faces_.size());
    for (const auto& f : faces_) {
      for (int i : f) mix(static_cast<std::uint64_t>(i));
    }
    for (const auto& p : vertices_) {
      for (int d = 0; d < 3; ++d) mix(std::bit_cast<std::uint64_t>(p[d]));
    }
    return h;
  }

 private:
  void build_topology() {
    const int nv = num_vertices();
    vertex_faces_.assign(vertices_.size(), {});
    std::map<std::pair<int, int>, int> half_edges;  // directed edge -> face
    for (int fi = 0; fi < num_faces(); ++fi) {
      const Face& f = faces_[static_cast<std::size_t>(fi)];
      for (int k = 0; k < 3; ++k) {
        if (f[k] < 0 || f[k] >= nv) {
          throw MeshError("face " + std::to_string(fi) + " has out-of-range vertex index " +
                          std::to_string(f[k]));
        }
      }
      if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0]) {
        throw MeshError("face " + std::to_string(fi) + " repeats a vertex index");
      }
      for (int k = 0; k < 3; ++k) {
        const int a = f[k];
        const int b = f[(k + 1) % 3];
        if (!half_edges.emplace(std::make_pair(a, b), fi).second) {
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") appears twice with the same direction (faces " +
                          std::to_string(half_edges[{a, b}]) + " and " + std::to_string(fi) +
                          "): orientation inconsistent or non-manifold");
        }
        ++edge_faces_[{std::min(a, b), std::max(a, b)}];
        vertex_faces_[static_cast<std::size_t>(a)].push_back(fi);
      }
    }
    for (const auto& [e, count] : edge_faces_) {
      if (count > 2) {
        throw MeshError("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                        ") borders " + std::to_string(count) + " faces");
      }
    }
    for (int v = 0; v < nv; ++v) {
      if (vertex_faces_[static_cast<std::size_t>(v)].empty()) {
        throw MeshError("vertex " + std::to_string(v) + " is not referenced by any face");
      }
    }

    // Vertex stars: the wedges a->b of faces (v, a, b) must chain into one
    // fan (closed for interior vertices, open for boundary vertices).
    neighbors_.assign(vertices_.size(), {});
    boundary_flag_.assign(vertices_.size(), 0);
    for (int v = 0; v < nv; ++v) {
      std::map<int, int> next;
      std::map<int, int> indegree;
      for (int fi : vertex_faces_[static_cast<std::size_t>(v)]) {
        const Face& f = faces_[static_cast<std::size_t>(fi)];
        int k = 0;
        while (f[k] != v) ++k;
        const int a = f[(k + 1) % 3];
        const int b = f[(k + 2) % 3];
        next[a] = b;
        ++indegree[b];
        indegree.try_emplace(a, 0);
      }
      int start = next.begin()->first;
      int open_ends = 0;
      for (const auto& [w, deg] : indegree) {
        if (deg == 0) {
          start = w;
          ++open_ends;
        }
      }
      if (open_ends > 1) {
        throw MeshError("vertex " + std::to_string(v) + " star is not a disk or half-disk");
      }
      std::size_t visited = 0;
      int cur = start;
      while (true) {
        auto it = next.find(cur);
        if (it == next.end()) break;
        ++visited;
        cur = it->second;
        if (cur == start) break;
        if (visited > next.size()) break;
      }
      if (visited != next.size()) {
        throw MeshError("vertex " + std::to_string(v) + " star is not a disk or half-disk");
      }
      boundary_flag_[static_cast<std::size_t>(v)] = open_ends == 1 ? 1 : 0;
      auto& nb = neighbors_[static_cast<std::size_t>(v)];
      for (const auto& [w, deg] : indegree) nb.push_back(w);
    }

    // Boundary loops from half-edges without a twin; each loop runs with the
    // surface on its left and starts at its smallest vertex index.
    std::map<int, int> boundary_next;
    for (const auto& [he, fi] : half_edges) {
      if (!half_edges.count({he.second, he.first})) boundary_next[he.first] = he.second;
    }
    boundary_position_.assign(vertices_.size(), {-1, -1});
    for (const auto& [start, unused] : boundary_next) {
      if (boundary_position_[static_cast<std::size_t>(start)].first >= 0) continue;
      std::vector<int> loop;
      int cur = start;
      do {
        boundary_position_[static_cast<std::size_t>(cur)] = {static_cast<int>(loops_.size()),
                                                             static_cast<int>(loop.size())};
        loop.push_back(cur);
        cur = boundary_next.at(cur);
      } while (cur != start);
      loops_.push_back(std::move(loop));
    }

    // Face-graph components (faces joined through shared vertices).
    std::vector<int> parent(vertices_.size());
    for (int v = 0; v < nv; ++v) parent[static_cast<std::size_t>(v)] = v;
    auto find = [&parent](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (const auto& f : faces_) {
      for (int k = 1; k < 3; ++k) {
        const int ra = find(f[0]);
        const int rb = find(f[k]);
        if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
    }
    components_ = 0;
    for (int v = 0; v < nv; ++v) {
      if (find(v) == v) ++components_;
    }
  }

  void validate_geometry() const {
    for (int fi = 0; fi < num_faces(); ++fi) {
      const Face& f = faces_[static_cast<std::size_t>(fi)];
      const Vec3& a = vertices_[static_cast<std::size_t>(f[0])];
      const Vec3& b = vertices_[static_cast<std::size_t>(f[1])];
      const Vec3& c = vertices_[static_cast<std::size_t>(f[2])];
      if (!a.allFinite() || !b.allFinite() || !c.allFinite()) {
        throw MeshError("face " + std::to_string(fi) + " has a non-finite vertex");
      }
      const double area = 0.5 * (b - a).cross(c - a).norm();
      const double longest =
          std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
      if (area < kMinFaceArea) {
        throw MeshError("face " + std::to_string(fi) + " is degenerate (area " +
                        std::to_string(area) + ")");
      }
      if (longest / (2.0 * area) > kMaxAspectRatio) {
        throw MeshError("face " + std::to_string(fi) + " is degenerate (aspect ratio " +
                        std::to_string(longest / (2.0 * area)) + ")");
      }
    }
  }

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<std::vector<int>> loops_;
  std::map<std::pair<int, int>, int> edge_faces_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<char> boundary_flag_;
  std::vector<std::pair<int, int>> boundary_position_;
  int components_ = 0;
};

inline const Vec3& vertex(const TriangleMesh& m, int i) {
  return m.vertices()[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------
// OBJ

/// Parses `v x y z` and `f i j k` records (1-based, `i/t/n` and negative
/// indices accepted). Other records are ignored; polygons are rejected.
inline TriangleMesh read_obj(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x = 0, y = 0, z = 0;
      if (!(ls >> x >> y >> z)) throw MeshError("OBJ line " + std::to_string(line_no) + ": bad vertex");
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        int i = 0;
        try {
          i = std::stoi(head);
        } catch (const std::exception&) {
          throw MeshError("OBJ line " + std::to_string(line_no) + ": bad face index '" + tok + "'");
        }
        if (i < 0) i = static_cast<int>(verts.size()) + i + 1;
        if (i <= 0) throw MeshError("OBJ line " + std::to_string(line_no) + ": bad face index '" + tok + "'");
        idx.push_back(i - 1);
      }
      if (idx.size() != 3) {
        throw MeshError("OBJ line " + std::to_string(line_no) + ": only triangles are supported");
      }
      faces.push_back({idx[0], idx[1], idx[2]});
    }
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

inline TriangleMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_obj(in);
}

inline void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

inline void write_obj(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_obj(out, mesh);
}

}  // namespace fbms
