#include "sigopt/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "sigopt/error.hpp"

namespace sigopt {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return in;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

void write_mesh(const Mesh2D& mesh, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "sigopt mesh 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  for (const Vec2& v : mesh.vertices) out << fmt(v.x) << " " << fmt(v.y) << "\n";
  out << "triangles " << mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "boundary_edges " << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    out << e.a << " " << e.b << " "
        << (e.label == BoundaryLabel::Dirichlet ? "dirichlet" : "signorini")
        << "\n";
}

Mesh2D read_mesh(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string word;
  int version = 0;
  std::string magic1, magic2;
  if (!(in >> magic1 >> magic2 >> version) || magic1 != "sigopt" ||
      magic2 != "mesh" || version != 1)
    throw Error(ErrorCode::ParseError, path + ": not a sigopt mesh file");

  auto expect = [&](const std::string& key) {
    int n = -1;
    if (!(in >> word >> n) || word != key || n < 0)
      throw Error(ErrorCode::ParseError, path + ": expected \"" + key + " <count>\"");
    return n;
  };
  const int nv = expect("vertices");
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x >> vertices[i].y))
      throw Error(ErrorCode::ParseError, path + ": bad vertex " + std::to_string(i));
  const int nt = expect("triangles");
  std::vector<std::array<int, 3>> triangles(nt);
  for (int i = 0; i < nt; ++i)
    if (!(in >> triangles[i][0] >> triangles[i][1] >> triangles[i][2]))
      throw Error(ErrorCode::ParseError, path + ": bad triangle " + std::to_string(i));
  const int ne = expect("boundary_edges");
  std::vector<BoundaryEdge> edges(ne);
  for (int i = 0; i < ne; ++i) {
    std::string label;
    if (!(in >> edges[i].a >> edges[i].b >> label))
      throw Error(ErrorCode::ParseError, path + ": bad edge " + std::to_string(i));
    if (label == "dirichlet")
      edges[i].label = BoundaryLabel::Dirichlet;
    else if (label == "signorini")
      edges[i].label = BoundaryLabel::Signorini;
    else
      throw Error(ErrorCode::UnknownLabel, path + ": boundary label \"" + label + "\"");
  }
  return make_mesh(std::move(vertices), std::move(triangles), std::move(edges));
}

void write_vtk(const Mesh2D& mesh, const std::vector<VtkField>& fields,
               const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "sigopt\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec2& v : mesh.vertices)
    out << fmt(v.x) << " " << fmt(v.y) << " 0\n";
  out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles()
      << "\n";
  for (const auto& t : mesh.triangles)
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.num_triangles() << "\n";
  for (int i = 0; i < mesh.num_triangles(); ++i) out << "5\n";

  auto emit = [&](bool cell_data) {
    bool header_done = false;
    for (const VtkField& f : fields) {
      if (f.is_cell_data != cell_data) continue;
      const int n = cell_data ? mesh.num_triangles() : mesh.num_vertices();
      if (!header_done) {
        out << (cell_data ? "CELL_DATA " : "POINT_DATA ") << n << "\n";
        header_done = true;
      }
      if (f.is_vector) {
        if (f.vectors.size() != static_cast<std::size_t>(n))
          throw Error(ErrorCode::DimensionMismatch, "vtk field " + f.name);
        out << "VECTORS " << f.name << " double\n";
        for (const Vec2& v : f.vectors)
          out << fmt(v.x) << " " << fmt(v.y) << " 0\n";
      } else {
        if (f.scalars.size() != static_cast<std::size_t>(n))
          throw Error(ErrorCode::DimensionMismatch, "vtk field " + f.name);
        out << "SCALARS " << f.name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (double s : f.scalars) out << fmt(s) << "\n";
      }
    }
  };
  emit(false);
  emit(true);
}

void write_history_csv(const OptimHistory& history, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iter,J,volume,ell,step,min_angle,active_count\n";
  for (const OptimRecord& r : history.records)
    out << r.iter << "," << fmt(r.energy) << "," << fmt(r.volume) << ","
        << fmt(r.ell) << "," << fmt(r.step) << "," << fmt(r.min_angle_deg) << ","
        << r.active_count << "\n";
}

OptimHistory read_history_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "iter,J,volume,ell,step,min_angle,active_count")
    throw Error(ErrorCode::ParseError, path + ": bad history header");
  OptimHistory h;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    OptimRecord r;
    char comma;
    std::istringstream row(line);
    if (!(row >> r.iter >> comma >> r.energy >> comma >> r.volume >> comma >>
          r.ell >> comma >> r.step >> comma >> r.min_angle_deg >> comma >>
          r.active_count))
      throw Error(ErrorCode::ParseError, path + ": bad history row \"" + line + "\"");
    h.records.push_back(r);
  }
  return h;
}

void write_material_report_csv(const VerifyMaterialReport& report,
                               const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t,h1_error_material,h1_error_energy_identity,inactive,strong,weak\n";
  for (const VerifyMaterialRow& r : report.rows)
    out << fmt(r.t) << "," << fmt(r.h1_error_material) << ","
        << fmt(r.h1_error_energy_identity) << "," << r.count_inactive << ","
        << r.count_strong << "," << r.count_weak << "\n";
}

namespace {

struct ConfigParser {
  RunConfig config;
  std::string origin;
  int lineno = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError,
                origin + ":" + std::to_string(lineno) + ": " + msg);
  }

  double number(const std::string& v) const {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      fail("expected a number, got \"" + v + "\"");
    }
    if (used != v.size()) fail("trailing characters in number \"" + v + "\"");
    return x;
  }

  int integer(const std::string& v) const {
    const double x = number(v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) fail("expected an integer, got \"" + v + "\"");
    return i;
  }

  void apply(const std::string& section, const std::string& key,
             const std::string& value) {
    OptimConfig& o = config.optim;
    if (section == "mesh") {
      if (key == "source") {
        if (value == "generator")
          config.mesh_source = MeshSource::Generator;
        else if (value == "file")
          config.mesh_source = MeshSource::File;
        else
          fail("mesh source must be generator or file");
      } else if (key == "n_boundary")
        config.n_boundary = integer(value);
      else if (key == "n_refine")
        config.n_refine = integer(value);
      else if (key == "path")
        config.mesh_path = value;
      else
        fail("unknown key \"" + key + "\" in [mesh]");
    } else if (section == "material") {
      if (key == "mu")
        config.elasticity.mu = number(value);
      else if (key == "lambda")
        config.elasticity.lambda = number(value);
      else
        fail("unknown key \"" + key + "\" in [material]");
    } else if (section == "load") {
      if (key == "name")
        config.load_name = value;
      else
        fail("unknown key \"" + key + "\" in [load]");
    } else if (section == "optim") {
      if (key == "step_size")
        o.step_size = number(value);
      else if (key == "rho_uzawa")
        o.rho_uzawa = number(value);
      else if (key == "target_volume")
        o.target_volume = number(value);
      else if (key == "max_iters")
        o.max_iters = integer(value);
      else if (key == "check_period")
        o.check_period = integer(value);
      else if (key == "stop_tol")
        o.stop_tol = number(value);
      else if (key == "solver_tol")
        o.solver_tol = number(value);
      else if (key == "nitsche_gamma0")
        o.nitsche_gamma0 = number(value);
      else if (key == "qp_rho")
        o.qp_rho = number(value);
      else if (key == "min_angle_floor_deg")
        o.min_angle_floor_deg = number(value);
      else if (key == "solver") {
        if (value == "nitsche")
          o.solver_choice = ContactSolverChoice::Nitsche;
        else if (value == "qp")
          o.solver_choice = ContactSolverChoice::Qp;
        else
          fail("solver must be nitsche or qp");
      } else
        fail("unknown key \"" + key + "\" in [optim]");
    } else if (section == "output") {
      if (key == "dir")
        config.output_dir = value;
      else if (key == "snapshot_period")
        config.snapshot_period = integer(value);
      else
        fail("unknown key \"" + key + "\" in [output]");
    } else {
      fail("unknown section [" + section + "]");
    }
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  ConfigParser parser;
  parser.origin = origin;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    ++parser.lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parser.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) parser.fail("empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) parser.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) parser.fail("expected key = value");
    if (section.empty()) parser.fail("key \"" + key + "\" outside any section");
    parser.apply(section, key, value);
  }
  const RunConfig& c = parser.config;
  auto reject = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, origin + ": " + msg);
  };
  if (!(c.elasticity.mu > 0.0)) reject("material mu must be positive");
  if (c.elasticity.lambda < 0.0) reject("material lambda must be nonnegative");
  if (!(c.optim.step_size > 0.0)) reject("optim step_size must be positive");
  if (c.optim.max_iters < 1) reject("optim max_iters must be at least 1");
  if (c.optim.check_period < 1) reject("optim check_period must be at least 1");
  if (!(c.optim.stop_tol > 0.0)) reject("optim stop_tol must be positive");
  if (!(c.optim.solver_tol > 0.0)) reject("optim solver_tol must be positive");
  if (c.snapshot_period < 1) reject("output snapshot_period must be at least 1");
  return parser.config;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

Mesh2D mesh_from_config(const RunConfig& config) {
  if (config.mesh_source == MeshSource::File) {
    if (config.mesh_path.empty())
      throw Error(ErrorCode::InvalidArgument, "mesh source is file but path is empty");
    return read_mesh(config.mesh_path);
  }
  return generate_disk_mesh(config.n_boundary, config.n_refine);
}

}  // namespace sigopt
