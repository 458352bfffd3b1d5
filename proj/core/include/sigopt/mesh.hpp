#ifndef SIGOPT_MESH_HPP
#define SIGOPT_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "sigopt/vec2.hpp"

namespace sigopt {

enum class BoundaryLabel { Dirichlet, Signorini };

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  BoundaryLabel label = BoundaryLabel::Signorini;
};

struct VectorFieldP1;

/// Conforming triangulation with labeled boundary parts. Triangles are
/// counter-clockwise; boundary edges tile the topological boundary exactly.
/// Treated as immutable after construction (all operations return new meshes).
struct Mesh2D {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::uint64_t id = 0;

  // True for vertices touching any Dirichlet edge. Junction vertices between
  // the Dirichlet and Signorini parts count as Dirichlet.
  std::vector<char> dirichlet_vertex;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

struct BoundaryNormals {
  // Outward unit normal per boundary edge, aligned with mesh.boundary_edges.
  std::vector<Vec2> edge_normals;
  // Contact vertices (on a Signorini edge, not Dirichlet) and their unit
  // normals (normalized average of adjacent Signorini edge normals).
  std::vector<int> contact_vertices;
  std::vector<Vec2> vertex_normals;
};

struct MeshQuality {
  double min_angle_deg = 0.0;
  double min_signed_area = 0.0;
  double max_aspect_ratio = 0.0;
};

/// Validates all Mesh2D invariants, assigns a fresh identity token and the
/// Dirichlet vertex mask. Throws Error(InvalidMesh) on violation.
Mesh2D make_mesh(std::vector<Vec2> vertices,
                 std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges);

/// Structured polar triangulation of the unit disk with n_boundary boundary
/// vertices after n_refine uniform refinements (the coarse layout carries
/// n_boundary / 2^n_refine boundary vertices, which must be divisible by 12 so
/// the Dirichlet arc endpoints at multiples of pi/6 fall on vertices).
/// Boundary edges whose midpoint angle lies in [pi/6, 5pi/6] or
/// [7pi/6, 11pi/6] are Dirichlet, the rest Signorini.
Mesh2D generate_disk_mesh(int n_boundary, int n_refine);

/// Structured nx-by-ny triangulation of [0,1]^2; side labels are given in the
/// order bottom, right, top, left.
Mesh2D generate_square_mesh(int nx, int ny,
                            const std::array<BoundaryLabel, 4>& side_labels);

double volume(const Mesh2D& mesh);

BoundaryNormals compute_normals(const Mesh2D& mesh);

/// Moves every vertex by t * theta(vertex). Connectivity and labels are kept.
/// Throws TangledMesh if any triangle area becomes non-positive and
/// FixedBoundaryViolation if theta exceeds 1e-14 on a Dirichlet vertex.
Mesh2D deform_mesh(const Mesh2D& mesh, const VectorFieldP1& theta, double t);

MeshQuality mesh_quality(const Mesh2D& mesh);

double triangle_area(const Mesh2D& mesh, int tri);

}  // namespace sigopt

#endif
