#ifndef SIGOPT_IO_HPP
#define SIGOPT_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "sigopt/fem.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"
#include "sigopt/optim.hpp"
#include "sigopt/sensitivity.hpp"

namespace sigopt {

enum class MeshSource { Generator, File };

struct RunConfig {
  MeshSource mesh_source = MeshSource::Generator;
  int n_boundary = 96;
  int n_refine = 2;
  std::string mesh_path;

  ElasticityParams elasticity{0.3846, 0.5769};
  std::string load_name = "disk";

  OptimConfig optim;
  std::string output_dir = "out";
  int snapshot_period = 20;
};

Mesh2D read_mesh(const std::string& path);
void write_mesh(const Mesh2D& mesh, const std::string& path);

struct VtkField {
  std::string name;
  bool is_cell_data = false;
  bool is_vector = false;
  std::vector<double> scalars;   // per point or per cell
  std::vector<Vec2> vectors;     // per point
};

/// Legacy ASCII unstructured-grid writer; byte-deterministic.
void write_vtk(const Mesh2D& mesh, const std::vector<VtkField>& fields,
               const std::string& path);

void write_history_csv(const OptimHistory& history, const std::string& path);
OptimHistory read_history_csv(const std::string& path);

void write_material_report_csv(const VerifyMaterialReport& report,
                               const std::string& path);

/// Line-based key = value file with [section] headers; unknown keys rejected.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

Mesh2D mesh_from_config(const RunConfig& config);

}  // namespace sigopt

#endif
