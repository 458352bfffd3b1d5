#include "sigopt/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "sigopt/error.hpp"
#include "sigopt/fem.hpp"

namespace sigopt {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

Mesh2D make_mesh(std::vector<Vec2> vertices,
                 std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges) {
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int k : triangles[t]) {
      if (k < 0 || k >= nv)
        throw Error(ErrorCode::InvalidMesh,
                    "triangle " + std::to_string(t) + " has vertex index out of range");
    }
    const auto& tri = triangles[t];
    if (signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) <= 0.0)
      throw Error(ErrorCode::InvalidMesh,
                  "triangle " + std::to_string(t) + " has non-positive signed area");
  }

  // Edges used by exactly one triangle form the topological boundary.
  std::map<EdgeKey, int> edge_count;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      EdgeKey k = edge_key(tri[e], tri[(e + 1) % 3]);
      int c = ++edge_count[k];
      if (c > 2)
        throw Error(ErrorCode::InvalidMesh, "edge shared by more than two triangles");
    }
  }

  std::map<EdgeKey, int> labeled;
  for (std::size_t e = 0; e < boundary_edges.size(); ++e) {
    const auto& be = boundary_edges[e];
    if (be.a < 0 || be.a >= nv || be.b < 0 || be.b >= nv || be.a == be.b)
      throw Error(ErrorCode::InvalidMesh,
                  "boundary edge " + std::to_string(e) + " has bad vertex indices");
    if (!labeled.emplace(edge_key(be.a, be.b), static_cast<int>(e)).second)
      throw Error(ErrorCode::InvalidMesh,
                  "boundary edge " + std::to_string(e) + " listed twice");
    auto it = edge_count.find(edge_key(be.a, be.b));
    if (it == edge_count.end() || it->second != 1)
      throw Error(ErrorCode::InvalidMesh,
                  "boundary edge " + std::to_string(e) +
                      " does not lie on the topological boundary");
  }
  for (const auto& [key, count] : edge_count) {
    if (count == 1 && !labeled.contains(key))
      throw Error(ErrorCode::InvalidMesh, "topological boundary edge is unlabeled");
  }

  bool has_dirichlet = false;
  for (const auto& be : boundary_edges)
    if (be.label == BoundaryLabel::Dirichlet) has_dirichlet = true;
  if (!has_dirichlet)
    throw Error(ErrorCode::InvalidMesh, "Dirichlet boundary part is empty");

  Mesh2D mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.boundary_edges = std::move(boundary_edges);
  mesh.id = next_mesh_id();
  mesh.dirichlet_vertex.assign(nv, 0);
  for (const auto& be : mesh.boundary_edges) {
    if (be.label == BoundaryLabel::Dirichlet) {
      mesh.dirichlet_vertex[be.a] = 1;
      mesh.dirichlet_vertex[be.b] = 1;
    }
  }
  return mesh;
}

double triangle_area(const Mesh2D& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  return signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
}

double volume(const Mesh2D& mesh) {
  double v = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) v += triangle_area(mesh, t);
  return v;
}

BoundaryNormals compute_normals(const Mesh2D& mesh) {
  // Adjacent-triangle lookup gives the orientation of each boundary edge.
  std::map<EdgeKey, std::pair<int, int>> directed;  // key -> (from, to) in CCW order
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      directed[edge_key(a, b)] = {a, b};
    }
  }

  BoundaryNormals result;
  result.edge_normals.resize(mesh.boundary_edges.size());
  std::vector<Vec2> accum(mesh.vertices.size());
  std::vector<char> touched(mesh.vertices.size(), 0);

  const Vec2 centroid = [&] {
    Vec2 c;
    for (const auto& v : mesh.vertices) c += v;
    return (1.0 / mesh.num_vertices()) * c;
  }();

  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    auto [a, b] = directed.at(edge_key(be.a, be.b));
    Vec2 n = normalized(perp_cw(mesh.vertices[b] - mesh.vertices[a]));
    const Vec2 mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    if (dot(n, mid - centroid) < 0.0)
      throw Error(ErrorCode::InvalidMesh, "boundary edge normal points inward");
    result.edge_normals[e] = n;
    if (be.label == BoundaryLabel::Signorini) {
      accum[be.a] += n;
      accum[be.b] += n;
      touched[be.a] = 1;
      touched[be.b] = 1;
    }
  }

  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!touched[v] || mesh.dirichlet_vertex[v]) continue;
    result.contact_vertices.push_back(v);
    result.vertex_normals.push_back(normalized(accum[v]));
  }
  return result;
}

Mesh2D deform_mesh(const Mesh2D& mesh, const VectorFieldP1& theta, double t) {
  if (theta.values.size() != mesh.vertices.size())
    throw Error(ErrorCode::DimensionMismatch, "theta size does not match mesh");
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.dirichlet_vertex[v] && norm(theta.values[v]) > 1e-14)
      throw Error(ErrorCode::FixedBoundaryViolation,
                  "theta nonzero on Dirichlet vertex " + std::to_string(v));
  }
  std::vector<Vec2> moved(mesh.vertices.size());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    moved[v] = mesh.vertices[v] + t * theta.values[v];
  for (std::size_t tr = 0; tr < mesh.triangles.size(); ++tr) {
    const auto& tri = mesh.triangles[tr];
    if (signed_area(moved[tri[0]], moved[tri[1]], moved[tri[2]]) <= 0.0)
      throw Error(ErrorCode::TangledMesh,
                  "triangle " + std::to_string(tr) + " inverted by deformation");
  }
  return make_mesh(std::move(moved), mesh.triangles, mesh.boundary_edges);
}

MeshQuality mesh_quality(const Mesh2D& mesh) {
  MeshQuality q;
  q.min_angle_deg = 180.0;
  q.min_signed_area = std::numeric_limits<double>::max();
  q.max_aspect_ratio = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                       mesh.vertices[tri[2]]};
    const double area = signed_area(p[0], p[1], p[2]);
    q.min_signed_area = std::min(q.min_signed_area, area);
    double lmax = 0.0, per = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = p[(i + 1) % 3] - p[i];
      const Vec2 v = p[(i + 2) % 3] - p[i];
      const double ang = std::atan2(std::abs(cross(u, v)), dot(u, v));
      q.min_angle_deg = std::min(q.min_angle_deg, ang * 180.0 / kPi);
      const double len = norm(u);
      lmax = std::max(lmax, len);
      per += len;
    }
    // longest edge over inradius diameter; 1.732 for an equilateral triangle
    const double inradius = area / (0.5 * per);
    q.max_aspect_ratio = std::max(q.max_aspect_ratio, lmax / (2.0 * inradius));
  }
  return q;
}

namespace {

struct RawMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> bedges;

  int add_vertex(Vec2 p) {
    vertices.push_back(p);
    return static_cast<int>(vertices.size()) - 1;
  }
  void add_tri(int a, int b, int c) {
    if (signed_area(vertices[a], vertices[b], vertices[c]) < 0.0) std::swap(b, c);
    triangles.push_back({a, b, c});
  }
};

// One red-refinement sweep; boundary-edge midpoints may be snapped back onto
// the unit circle.
void uniform_refine(RawMesh& m, bool snap_to_circle) {
  std::map<EdgeKey, int> midpoint;
  std::map<EdgeKey, bool> on_boundary;
  for (const auto& be : m.bedges) on_boundary[edge_key(be.a, be.b)] = true;

  auto mid_index = [&](int a, int b) {
    const EdgeKey k = edge_key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (m.vertices[a] + m.vertices[b]);
    if (snap_to_circle && on_boundary.contains(k)) p = normalized(p);
    const int idx = m.add_vertex(p);
    midpoint.emplace(k, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> old_tris;
  old_tris.swap(m.triangles);
  for (const auto& tri : old_tris) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid_index(a, b), bc = mid_index(b, c), ca = mid_index(c, a);
    m.add_tri(a, ab, ca);
    m.add_tri(ab, b, bc);
    m.add_tri(ca, bc, c);
    m.add_tri(ab, bc, ca);
  }

  std::vector<BoundaryEdge> old_edges;
  old_edges.swap(m.bedges);
  for (const auto& be : old_edges) {
    const int mid = midpoint.at(edge_key(be.a, be.b));
    m.bedges.push_back({be.a, mid, be.label});
    m.bedges.push_back({mid, be.b, be.label});
  }
}

}  // namespace

Mesh2D generate_disk_mesh(int n_boundary, int n_refine) {
  if (n_boundary < 16)
    throw Error(ErrorCode::InvalidArgument, "n_boundary must be at least 16");
  if (n_refine < 0)
    throw Error(ErrorCode::InvalidArgument, "n_refine must be non-negative");
  const int scale = 1 << n_refine;
  if (n_boundary % scale != 0 || (n_boundary / scale) % 12 != 0)
    throw Error(ErrorCode::InvalidArgument,
                "n_boundary / 2^n_refine must be divisible by 12 so the arc "
                "junctions at multiples of pi/6 fall on vertices");
  const int nb = n_boundary / scale;

  RawMesh m;
  auto add_ring = [&](int count, double radius) {
    const int first = static_cast<int>(m.vertices.size());
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * kPi * k / count;
      m.add_vertex({radius * std::cos(a), radius * std::sin(a)});
    }
    return first;
  };

  // March rings inward, halving the vertex count each time the radius roughly
  // halves, then fan the last ring to the center.
  int c = nb;
  double r = 1.0;
  int ring = add_ring(c, r);
  auto add_uniform_annulus = [&](double r_in) {
    const int inner = add_ring(c, r_in);
    for (int k = 0; k < c; ++k) {
      const int a0 = ring + k, a1 = ring + (k + 1) % c;
      const int b0 = inner + k, b1 = inner + (k + 1) % c;
      m.add_tri(a0, a1, b0);
      m.add_tri(a1, b1, b0);
    }
    r = r_in;
    ring = inner;
  };
  while (c > 12 && c % 2 == 0) {
    const double r_top = r;
    while (true) {
      const double r_in = r - 2.0 * kPi * r / c;
      if (r_in <= 0.5 * r_top + 1e-12) break;
      add_uniform_annulus(r_in);
    }
    const double r_in = r - 2.0 * kPi * r / (0.75 * c);
    if (r_in <= 0.05) break;
    const int coarse = add_ring(c / 2, r_in);
    for (int j = 0; j < c / 2; ++j) {
      const int f0 = ring + 2 * j;
      const int f1 = ring + (2 * j + 1) % c;
      const int f2 = ring + (2 * j + 2) % c;
      const int g0 = coarse + j;
      const int g1 = coarse + (j + 1) % (c / 2);
      m.add_tri(f0, f1, g0);
      m.add_tri(f1, g1, g0);
      m.add_tri(f1, f2, g1);
    }
    c /= 2;
    r = r_in;
    ring = coarse;
  }
  const int center = m.add_vertex({0.0, 0.0});
  for (int k = 0; k < c; ++k)
    m.add_tri(ring + k, ring + (k + 1) % c, center);

  auto in_dirichlet_arc = [](double a) {
    a = std::fmod(a + 2.0 * kPi, 2.0 * kPi);
    return (a >= kPi / 6.0 && a <= 5.0 * kPi / 6.0) ||
           (a >= 7.0 * kPi / 6.0 && a <= 11.0 * kPi / 6.0);
  };
  for (int k = 0; k < nb; ++k) {
    const double mid = 2.0 * kPi * (k + 0.5) / nb;
    m.bedges.push_back({k, (k + 1) % nb,
                        in_dirichlet_arc(mid) ? BoundaryLabel::Dirichlet
                                              : BoundaryLabel::Signorini});
  }

  for (int i = 0; i < n_refine; ++i) uniform_refine(m, true);
  return make_mesh(std::move(m.vertices), std::move(m.triangles),
                   std::move(m.bedges));
}

Mesh2D generate_square_mesh(int nx, int ny,
                            const std::array<BoundaryLabel, 4>& side_labels) {
  if (nx < 1 || ny < 1)
    throw Error(ErrorCode::InvalidArgument, "square mesh needs nx, ny >= 1");
  RawMesh m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.add_vertex({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
  auto idx = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.add_tri(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1));
      m.add_tri(idx(i, j), idx(i + 1, j + 1), idx(i, j + 1));
    }
  }
  for (int i = 0; i < nx; ++i) {
    m.bedges.push_back({idx(i, 0), idx(i + 1, 0), side_labels[0]});
    m.bedges.push_back({idx(i, ny), idx(i + 1, ny), side_labels[2]});
  }
  for (int j = 0; j < ny; ++j) {
    m.bedges.push_back({idx(nx, j), idx(nx, j + 1), side_labels[1]});
    m.bedges.push_back({idx(0, j), idx(0, j + 1), side_labels[3]});
  }
  return make_mesh(std::move(m.vertices), std::move(m.triangles),
                   std::move(m.bedges));
}

}  // namespace sigopt
