#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sigopt/error.hpp"
#include "sigopt/fem.hpp"
#include "sigopt/mesh.hpp"

using namespace sigopt;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh2D single_triangle(Vec2 a, Vec2 b, Vec2 c) {
  return make_mesh({a, b, c}, {{0, 1, 2}},
                   {{0, 1, BoundaryLabel::Dirichlet},
                    {1, 2, BoundaryLabel::Signorini},
                    {2, 0, BoundaryLabel::Signorini}});
}

}  // namespace

TEST_CASE("make_mesh validation") {
  SUBCASE("clockwise triangle rejected") {
    CHECK_THROWS_WITH_AS(
        make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}},
                  {{0, 1, BoundaryLabel::Dirichlet},
                   {1, 2, BoundaryLabel::Signorini},
                   {2, 0, BoundaryLabel::Signorini}}),
        doctest::Contains("non-positive"), Error);
  }
  SUBCASE("unlabeled boundary edge rejected") {
    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}},
                              {{0, 1, BoundaryLabel::Dirichlet},
                               {1, 2, BoundaryLabel::Signorini}}),
                    Error);
  }
  SUBCASE("empty Dirichlet part rejected") {
    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}},
                              {{0, 1, BoundaryLabel::Signorini},
                               {1, 2, BoundaryLabel::Signorini},
                               {2, 0, BoundaryLabel::Signorini}}),
                    Error);
  }
  SUBCASE("out of range index rejected") {
    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 7}}, {}), Error);
  }
  SUBCASE("interior edge labeled as boundary rejected") {
    CHECK_THROWS_AS(
        make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
                  {{0, 1, BoundaryLabel::Dirichlet},
                   {1, 2, BoundaryLabel::Signorini},
                   {2, 3, BoundaryLabel::Signorini},
                   {3, 0, BoundaryLabel::Signorini},
                   {0, 2, BoundaryLabel::Signorini}}),
        Error);
  }
  SUBCASE("junction vertices are marked Dirichlet") {
    const Mesh2D m = single_triangle({0, 0}, {1, 0}, {0, 1});
    CHECK(m.dirichlet_vertex[0] == 1);
    CHECK(m.dirichlet_vertex[1] == 1);
    CHECK(m.dirichlet_vertex[2] == 0);
  }
}

TEST_CASE("volume") {
  const Mesh2D square = generate_square_mesh(
      1, 1,
      {BoundaryLabel::Signorini, BoundaryLabel::Signorini,
       BoundaryLabel::Dirichlet, BoundaryLabel::Signorini});
  CHECK(volume(square) == doctest::Approx(1.0).epsilon(1e-15));

  SUBCASE("affine scaling scales area by the squared factor") {
    const double t = 0.37;
    std::vector<Vec2> scaled = square.vertices;
    for (Vec2& v : scaled) v *= (1.0 + t);
    const Mesh2D m2 =
        make_mesh(scaled, square.triangles, square.boundary_edges);
    CHECK(volume(m2) ==
          doctest::Approx((1.0 + t) * (1.0 + t) * volume(square)).epsilon(1e-13));
  }
  SUBCASE("rigid motion invariance") {
    const double a = 0.7;
    std::vector<Vec2> moved = square.vertices;
    for (Vec2& v : moved)
      v = {std::cos(a) * v.x - std::sin(a) * v.y + 3.0,
           std::sin(a) * v.x + std::cos(a) * v.y - 2.0};
    const Mesh2D m2 = make_mesh(moved, square.triangles, square.boundary_edges);
    CHECK(volume(m2) == doctest::Approx(volume(square)).epsilon(1e-12));
  }
}

TEST_CASE("disk mesh generator") {
  const Mesh2D disk = generate_disk_mesh(96, 2);

  SUBCASE("volume matches the unit disk within half a percent") {
    CHECK(volume(disk) == doctest::Approx(kPi).epsilon(0.005));
  }
  SUBCASE("boundary vertex and edge counts") {
    int on_circle = 0;
    for (const Vec2& v : disk.vertices)
      if (std::abs(norm(v) - 1.0) < 1e-12) ++on_circle;
    CHECK(on_circle == 96);
    CHECK(disk.boundary_edges.size() == 96);
    int dirichlet = 0;
    for (const auto& e : disk.boundary_edges)
      if (e.label == BoundaryLabel::Dirichlet) ++dirichlet;
    CHECK(dirichlet == 64);  // two arcs of total angle 4 pi / 3
  }
  SUBCASE("labels by angle") {
    // Vertex near the top lies inside the fixed arc, vertex at (1,0) on the
    // contact arc.
    for (const auto& e : disk.boundary_edges) {
      const Vec2 mid = 0.5 * (disk.vertices[e.a] + disk.vertices[e.b]);
      const double ang = std::atan2(mid.y, mid.x);
      if (std::abs(ang - kPi / 2.0) < 0.2)
        CHECK(e.label == BoundaryLabel::Dirichlet);
      if (std::abs(ang) < 0.2) CHECK(e.label == BoundaryLabel::Signorini);
    }
  }
  SUBCASE("quality floor") {
    const MeshQuality q = mesh_quality(disk);
    CHECK(q.min_signed_area > 0.0);
    CHECK(q.min_angle_deg > 20.0);
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(generate_disk_mesh(96, 4), Error);   // 6 per level, not 12
    CHECK_THROWS_AS(generate_disk_mesh(50, 0), Error);
    CHECK_THROWS_AS(generate_disk_mesh(8, 0), Error);
  }
}

TEST_CASE("compute_normals") {
  SUBCASE("square edge and corner normals") {
    const Mesh2D sq = generate_square_mesh(
        2, 2,
        {BoundaryLabel::Signorini, BoundaryLabel::Signorini,
         BoundaryLabel::Dirichlet, BoundaryLabel::Signorini});
    const BoundaryNormals n = compute_normals(sq);
    for (std::size_t e = 0; e < sq.boundary_edges.size(); ++e) {
      CHECK(norm(n.edge_normals[e]) == doctest::Approx(1.0).epsilon(1e-12));
      const auto& be = sq.boundary_edges[e];
      const Vec2 mid = 0.5 * (sq.vertices[be.a] + sq.vertices[be.b]);
      if (mid.y == 0.0) {
        CHECK(n.edge_normals[e].x == doctest::Approx(0.0));
        CHECK(n.edge_normals[e].y == doctest::Approx(-1.0));
      }
    }
    // Corner (0,0) joins the bottom and left Signorini sides.
    bool corner_found = false;
    for (std::size_t i = 0; i < n.contact_vertices.size(); ++i) {
      const Vec2 p = sq.vertices[n.contact_vertices[i]];
      if (p.x == 0.0 && p.y == 0.0) {
        corner_found = true;
        const double s = std::sqrt(0.5);
        CHECK(n.vertex_normals[i].x == doctest::Approx(-s).epsilon(1e-12));
        CHECK(n.vertex_normals[i].y == doctest::Approx(-s).epsilon(1e-12));
      }
    }
    CHECK(corner_found);
  }
  SUBCASE("disk vertex normal at (1,0) is radial") {
    const Mesh2D disk = generate_disk_mesh(48, 1);
    const BoundaryNormals n = compute_normals(disk);
    bool found = false;
    for (std::size_t i = 0; i < n.contact_vertices.size(); ++i) {
      const Vec2 p = disk.vertices[n.contact_vertices[i]];
      if (norm(p - Vec2{1.0, 0.0}) < 1e-12) {
        found = true;
        CHECK(n.vertex_normals[i].x == doctest::Approx(1.0).epsilon(1e-2));
        CHECK(std::abs(n.vertex_normals[i].y) < 1e-2);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("deform_mesh") {
  const Mesh2D disk = generate_disk_mesh(24, 0);

  SUBCASE("t = 0 is the identity") {
    VectorFieldP1 theta = VectorFieldP1::zero(disk);
    for (int v = 0; v < disk.num_vertices(); ++v)
      if (!disk.dirichlet_vertex[v]) theta.values[v] = {0.3, -0.1};
    const Mesh2D same = deform_mesh(disk, theta, 0.0);
    for (int v = 0; v < disk.num_vertices(); ++v)
      CHECK(norm(same.vertices[v] - disk.vertices[v]) == 0.0);
    CHECK(same.id != disk.id);
  }
  SUBCASE("nonzero theta on the fixed boundary rejected") {
    VectorFieldP1 theta = VectorFieldP1::zero(disk);
    for (int v = 0; v < disk.num_vertices(); ++v) theta.values[v] = {1.0, 0.0};
    CHECK_THROWS_AS(deform_mesh(disk, theta, 0.1), Error);
    try {
      deform_mesh(disk, theta, 0.1);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FixedBoundaryViolation);
    }
  }
  SUBCASE("tangling detected") {
    const Mesh2D sq = generate_square_mesh(
        2, 2,
        {BoundaryLabel::Dirichlet, BoundaryLabel::Signorini,
         BoundaryLabel::Signorini, BoundaryLabel::Signorini});
    VectorFieldP1 theta = VectorFieldP1::zero(sq);
    for (int v = 0; v < sq.num_vertices(); ++v) {
      const Vec2 p = sq.vertices[v];
      if (!sq.dirichlet_vertex[v] && p.x == 0.5 && p.y == 0.5)
        theta.values[v] = {10.0, 10.0};
    }
    try {
      deform_mesh(sq, theta, 1.0);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TangledMesh);
    }
  }
  SUBCASE("composition of translations on an interior vertex") {
    const Mesh2D sq = generate_square_mesh(
        2, 2,
        {BoundaryLabel::Dirichlet, BoundaryLabel::Signorini,
         BoundaryLabel::Signorini, BoundaryLabel::Signorini});
    VectorFieldP1 theta = VectorFieldP1::zero(sq);
    for (int v = 0; v < sq.num_vertices(); ++v)
      if (!sq.dirichlet_vertex[v] && sq.vertices[v].x == 0.5 &&
          sq.vertices[v].y == 0.5)
        theta.values[v] = {0.05, 0.02};
    const Mesh2D once = deform_mesh(deform_mesh(sq, theta, 0.1), theta, 0.2);
    const Mesh2D direct = deform_mesh(sq, theta, 0.3);
    for (int v = 0; v < sq.num_vertices(); ++v)
      CHECK(norm(once.vertices[v] - direct.vertices[v]) < 1e-15);
  }
}

TEST_CASE("mesh_quality") {
  SUBCASE("equilateral") {
    const Mesh2D m =
        single_triangle({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0});
    const MeshQuality q = mesh_quality(m);
    CHECK(q.min_angle_deg == doctest::Approx(60.0).epsilon(1e-12));
    CHECK(q.max_aspect_ratio == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("right isoceles") {
    const Mesh2D m = single_triangle({0, 0}, {1, 0}, {0, 1});
    CHECK(mesh_quality(m).min_angle_deg == doctest::Approx(45.0).epsilon(1e-12));
  }
}
