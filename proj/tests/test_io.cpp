#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "sigopt/error.hpp"
#include "sigopt/io.hpp"
#include "sigopt/mesh.hpp"

using namespace sigopt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("mesh file round-trip is exact") {
  const Mesh2D disk = generate_disk_mesh(24, 0);
  write_mesh(disk, "io_mesh.txt");
  const Mesh2D back = read_mesh("io_mesh.txt");
  REQUIRE(back.num_vertices() == disk.num_vertices());
  REQUIRE(back.num_triangles() == disk.num_triangles());
  REQUIRE(back.boundary_edges.size() == disk.boundary_edges.size());
  for (int v = 0; v < disk.num_vertices(); ++v) {
    CHECK(back.vertices[v].x == disk.vertices[v].x);
    CHECK(back.vertices[v].y == disk.vertices[v].y);
  }
  for (int t = 0; t < disk.num_triangles(); ++t)
    CHECK(back.triangles[t] == disk.triangles[t]);
  for (std::size_t e = 0; e < disk.boundary_edges.size(); ++e) {
    CHECK(back.boundary_edges[e].a == disk.boundary_edges[e].a);
    CHECK(back.boundary_edges[e].b == disk.boundary_edges[e].b);
    CHECK(back.boundary_edges[e].label == disk.boundary_edges[e].label);
  }
}

TEST_CASE("read_mesh rejects malformed input") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_mesh("io_no_such_file.txt"), Error);
  }
  SUBCASE("wrong magic") {
    spit("io_bad_magic.txt", "something else 1\n");
    CHECK_THROWS_AS(read_mesh("io_bad_magic.txt"), Error);
  }
  SUBCASE("degenerate triangle") {
    spit("io_degenerate.txt",
         "sigopt mesh 1\n"
         "vertices 3\n0 0\n1 0\n2 0\n"
         "triangles 1\n0 1 2\n"
         "boundary_edges 0\n");
    CHECK_THROWS_AS(read_mesh("io_degenerate.txt"), Error);
  }
  SUBCASE("unknown boundary label") {
    spit("io_bad_label.txt",
         "sigopt mesh 1\n"
         "vertices 3\n0 0\n1 0\n0 1\n"
         "triangles 1\n0 1 2\n"
         "boundary_edges 3\n0 1 signorini\n1 2 robin\n2 0 dirichlet\n");
    const std::string msg =
        error_message([] { read_mesh("io_bad_label.txt"); });
    CHECK(msg.find("robin") != std::string::npos);
  }
}

TEST_CASE("write_vtk") {
  const Mesh2D disk = generate_disk_mesh(24, 0);
  std::vector<VtkField> fields(3);
  fields[0].name = "u";
  fields[0].is_vector = true;
  fields[0].vectors.assign(disk.num_vertices(), Vec2{1.0, -2.0});
  fields[1].name = "pressure";
  fields[1].scalars.assign(disk.num_vertices(), 0.5);
  fields[2].name = "label";
  fields[2].is_cell_data = true;
  fields[2].scalars.assign(disk.num_triangles(), 3.0);

  SUBCASE("structure contains the expected sections") {
    write_vtk(disk, fields, "io_out.vtk");
    const std::string text = slurp("io_out.vtk");
    CHECK(text.find("# vtk DataFile Version 3.0") == 0);
    CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("POINTS " + std::to_string(disk.num_vertices()) +
                    " double") != std::string::npos);
    CHECK(text.find("CELL_TYPES " + std::to_string(disk.num_triangles())) !=
          std::string::npos);
    CHECK(text.find("POINT_DATA") != std::string::npos);
    CHECK(text.find("VECTORS u double") != std::string::npos);
    CHECK(text.find("SCALARS pressure double 1") != std::string::npos);
    CHECK(text.find("CELL_DATA") != std::string::npos);
    CHECK(text.find("SCALARS label double 1") != std::string::npos);
  }
  SUBCASE("output is byte-deterministic") {
    write_vtk(disk, fields, "io_out_a.vtk");
    write_vtk(disk, fields, "io_out_b.vtk");
    CHECK(slurp("io_out_a.vtk") == slurp("io_out_b.vtk"));
  }
  SUBCASE("rejects a field of the wrong size") {
    fields[1].scalars.pop_back();
    CHECK_THROWS_AS(write_vtk(disk, fields, "io_out_bad.vtk"), Error);
  }
}

TEST_CASE("history csv round-trip") {
  OptimHistory h;
  h.records.push_back({0, -1.25, 3.14159, 0.0, 0.0, 32.5, 4});
  h.records.push_back({1, -1.5e-7, 3.1, -0.25, 0.05, 28.125, 6});
  write_history_csv(h, "io_history.csv");
  const std::string text = slurp("io_history.csv");
  CHECK(text.rfind("iter,J,volume,ell,step,min_angle,active_count\n", 0) == 0);
  const OptimHistory back = read_history_csv("io_history.csv");
  REQUIRE(back.records.size() == h.records.size());
  for (std::size_t i = 0; i < h.records.size(); ++i) {
    CHECK(back.records[i].iter == h.records[i].iter);
    CHECK(back.records[i].energy == h.records[i].energy);
    CHECK(back.records[i].volume == h.records[i].volume);
    CHECK(back.records[i].ell == h.records[i].ell);
    CHECK(back.records[i].step == h.records[i].step);
    CHECK(back.records[i].min_angle_deg == h.records[i].min_angle_deg);
    CHECK(back.records[i].active_count == h.records[i].active_count);
  }
  spit("io_history_bad.csv", "iter,J\n0,1\n");
  CHECK_THROWS_AS(read_history_csv("io_history_bad.csv"), Error);
}

TEST_CASE("parse_config_text") {
  SUBCASE("empty text yields the documented defaults") {
    const RunConfig c = parse_config_text("");
    CHECK(c.mesh_source == MeshSource::Generator);
    CHECK(c.n_boundary == 96);
    CHECK(c.n_refine == 2);
    CHECK(c.elasticity.mu == 0.3846);
    CHECK(c.elasticity.lambda == 0.5769);
    CHECK(c.load_name == "disk");
    CHECK(c.output_dir == "out");
    CHECK(c.snapshot_period == 20);
    CHECK(c.optim.step_size == 0.05);
    CHECK(c.optim.max_iters == 400);
    CHECK(c.optim.check_period == 20);
    CHECK(c.optim.stop_tol == 1e-4);
    CHECK(c.optim.solver_choice == ContactSolverChoice::Nitsche);
  }
  SUBCASE("values are applied with comments and spacing ignored") {
    const RunConfig c = parse_config_text(
        "[mesh]\n"
        "n_boundary = 48   # coarse\n"
        "n_refine=1\n"
        "[material]\n"
        "mu = 1.0\n"
        "[optim]\n"
        "solver = qp\n"
        "max_iters = 10\n"
        "[output]\n"
        "dir = results\n");
    CHECK(c.n_boundary == 48);
    CHECK(c.n_refine == 1);
    CHECK(c.elasticity.mu == 1.0);
    CHECK(c.optim.solver_choice == ContactSolverChoice::Qp);
    CHECK(c.optim.max_iters == 10);
    CHECK(c.output_dir == "results");
  }
  SUBCASE("unknown keys are rejected with origin and line number") {
    const std::string msg = error_message([] {
      parse_config_text("[mesh]\nn_boundary = 48\nwavelength = 3\n", "cfg");
    });
    CHECK(msg.find("cfg:3") != std::string::npos);
    CHECK(msg.find("wavelength") != std::string::npos);
  }
  SUBCASE("unknown sections are rejected") {
    CHECK_THROWS_AS(parse_config_text("[solvers]\nname = qp\n"), Error);
  }
  SUBCASE("keys outside any section are rejected") {
    CHECK_THROWS_AS(parse_config_text("n_boundary = 48\n"), Error);
  }
  SUBCASE("non-integer counts are rejected") {
    CHECK_THROWS_AS(parse_config_text("[mesh]\nn_refine = 1.5\n"), Error);
  }
  SUBCASE("negative lambda is rejected") {
    CHECK_THROWS_AS(parse_config_text("[material]\nlambda = -1\n"), Error);
  }
  SUBCASE("non-positive step size is rejected") {
    CHECK_THROWS_AS(parse_config_text("[optim]\nstep_size = 0\n"), Error);
  }
}

TEST_CASE("mesh_from_config") {
  RunConfig c;
  c.n_boundary = 24;
  c.n_refine = 0;
  const Mesh2D gen = mesh_from_config(c);
  CHECK(gen.num_vertices() > 24);

  write_mesh(gen, "io_cfg_mesh.txt");
  c.mesh_source = MeshSource::File;
  c.mesh_path = "io_cfg_mesh.txt";
  const Mesh2D loaded = mesh_from_config(c);
  CHECK(loaded.num_vertices() == gen.num_vertices());

  c.mesh_path.clear();
  CHECK_THROWS_AS(mesh_from_config(c), Error);
}
