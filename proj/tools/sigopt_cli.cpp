// Command-line surface: thin wrappers over the library operations. Every
// subcommand exits nonzero on failure with a machine-readable error line as
// its last output.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sigopt/contact.hpp"
#include "sigopt/error.hpp"
#include "sigopt/fem.hpp"
#include "sigopt/io.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"
#include "sigopt/optim.hpp"
#include "sigopt/sensitivity.hpp"
#include "sigopt/shape.hpp"

using namespace sigopt;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string solver;
  std::string seed_mesh;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--out", opts.out_dir, "output directory override");
  cmd->add_option("--solver", opts.solver, "contact solver")
      ->check(CLI::IsMember({"nitsche", "qp"}));
  cmd->add_option("--seed-mesh", opts.seed_mesh, "mesh file overriding the generator");
}

RunConfig resolve(const CommonOpts& opts) {
  RunConfig config =
      opts.config_path.empty() ? RunConfig{} : parse_config(opts.config_path);
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  if (!opts.seed_mesh.empty()) {
    config.mesh_source = MeshSource::File;
    config.mesh_path = opts.seed_mesh;
  }
  if (opts.solver == "nitsche")
    config.optim.solver_choice = ContactSolverChoice::Nitsche;
  else if (opts.solver == "qp")
    config.optim.solver_choice = ContactSolverChoice::Qp;
  return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  return config.output_dir + "/" + name;
}

ContactSolution solve_state(const Mesh2D& mesh, const RunConfig& config,
                            const LoadFunction& f) {
  const OptimConfig& o = config.optim;
  if (o.solver_choice == ContactSolverChoice::Nitsche)
    return solve_signorini_nitsche(mesh, config.elasticity, f, o.nitsche_gamma0,
                                   o.solver_tol);
  return solve_signorini_uzawa(mesh, config.elasticity, f, o.qp_rho, o.solver_tol);
}

// Smooth boundary-supported direction used by the verification commands;
// vanishes on the Dirichlet part of the disk example by construction and is
// explicitly zeroed there for general meshes.
VectorFieldP1 default_direction(const Mesh2D& mesh) {
  VectorFieldP1 th = VectorFieldP1::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 p = mesh.vertices[v];
    const double c = std::max(0.0, 0.25 - p.y * p.y);
    th.values[v] = {c * c * c, 0.0};
    if (mesh.dirichlet_vertex[v]) th.values[v] = {0.0, 0.0};
  }
  return th;
}

std::vector<VtkField> solution_fields(const Mesh2D& mesh,
                                      const RunConfig& config,
                                      const LoadFunction& f,
                                      const ContactSolution& sol) {
  VtkField u;
  u.name = "u";
  u.is_vector = true;
  u.vectors = sol.u.values;

  // Integrand of J: 1/2 Ae(u):e(u) - f.u per element.
  VtkField integrand;
  integrand.name = "j_integrand";
  integrand.is_cell_data = true;
  integrand.scalars.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Mat2 grad_u = p1_gradient(mesh, sol.u, t);
    const Mat2 stress = apply_stiffness_tensor(config.elasticity, grad_u);
    double fu = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = mesh.vertices[tri[i]];
      fu += dot(f.value(p), sol.u.values[tri[i]]) / 3.0;
    }
    integrand.scalars[t] = 0.5 * ddot(stress, sym(grad_u)) - fu;
  }
  return {u, integrand};
}

int cmd_mesh_gen(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  const Mesh2D mesh = mesh_from_config(config);
  const MeshQuality q = mesh_quality(mesh);
  const std::string path = out_path(config, "mesh.txt");
  write_mesh(mesh, path);
  write_vtk(mesh, {}, out_path(config, "mesh.vtk"));
  std::printf("mesh: %d vertices, %d triangles, volume %.6f, min angle %.2f deg\n",
              mesh.num_vertices(), mesh.num_triangles(), volume(mesh),
              q.min_angle_deg);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_solve(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  const Mesh2D mesh = mesh_from_config(config);
  const LoadFunction f = load_by_name(config.load_name);
  const ContactSolution sol = solve_state(mesh, config, f);
  const EnergyValue e = energy_value(mesh, config.elasticity, f, sol.u);
  const ComplementarityReport rep =
      complementarity_report(mesh, config.elasticity, sol);
  const std::string path = out_path(config, "solution.vtk");
  write_vtk(mesh, solution_fields(mesh, config, f, sol), path);
  std::printf("J = %.10f (identity gap %.2e), iterations %d\n", e.quadratic,
              e.gap, sol.stats.iterations);
  std::printf("complementarity: penetration %.3e, tension %.3e, product %.3e\n",
              rep.max_penetration, rep.max_tension, rep.max_comp_product);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_optimize(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  const Mesh2D mesh = mesh_from_config(config);
  const LoadFunction f = load_by_name(config.load_name);
  auto snapshot = [&](int iter, const Mesh2D& m, const ContactSolution& sol) {
    if (iter % config.snapshot_period != 0) return;
    char name[64];
    std::snprintf(name, sizeof(name), "shape_%04d.vtk", iter);
    write_vtk(m, solution_fields(m, config, f, sol), out_path(config, name));
  };
  const OptimResult res =
      optimize(mesh, config.elasticity, f, config.optim, snapshot);
  write_history_csv(res.history, out_path(config, "history.csv"));
  write_mesh(res.mesh, out_path(config, "final_mesh.txt"));
  const OptimRecord& last = res.history.records.back();
  std::printf("finished at iteration %d: J %.6f -> %.6f, volume %.6f, ell %.4f\n",
              last.iter, res.history.records.front().energy, last.energy,
              last.volume, last.ell);
  std::printf("wrote %s\n", out_path(config, "history.csv").c_str());
  return 0;
}

int cmd_verify_shape_gradient(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  const Mesh2D mesh = mesh_from_config(config);
  const LoadFunction f = load_by_name(config.load_name);
  const VectorFieldP1 u0 = solve_state(mesh, config, f).u;
  const ShapeGradientForm g =
      shape_gradient_boundary(mesh, config.elasticity, f, u0);
  const VectorFieldP1 th = default_direction(mesh);
  const double analytic = g(th);
  const double vol_form =
      shape_gradient_volume_form(mesh, config.elasticity, f, u0, th);
  std::printf("boundary form %.8e, volume form %.8e, relative gap %.3e\n",
              analytic, vol_form,
              std::abs(vol_form - analytic) / std::abs(analytic));
  std::printf("%12s %16s %12s\n", "t", "central FD", "rel error");
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double fd =
        (energy_at_deformed(mesh, config.elasticity, f, th, t) -
         energy_at_deformed(mesh, config.elasticity, f, th, -t)) /
        (2.0 * t);
    std::printf("%12.1e %16.8e %12.3e\n", t, fd,
                std::abs(fd - analytic) / std::abs(analytic));
  }
  return 0;
}

int cmd_verify_material(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  const Mesh2D mesh = mesh_from_config(config);
  const LoadFunction f = load_by_name(config.load_name);
  const VerifyMaterialReport rep =
      verify_material_theorem(mesh, config.elasticity, f,
                              default_direction(mesh), {1e-2, 1e-3, 1e-4});
  const std::string path = out_path(config, "material_report.csv");
  write_material_report_csv(rep, path);
  std::printf("%12s %16s %16s %9s %7s %5s\n", "t", "material err",
              "identity gap", "inactive", "strong", "weak");
  for (const VerifyMaterialRow& r : rep.rows)
    std::printf("%12.1e %16.6e %16.6e %9d %7d %5d\n", r.t, r.h1_error_material,
                r.h1_error_energy_identity, r.count_inactive, r.count_strong,
                r.count_weak);
  if (rep.weakly_active_present)
    std::printf("weakly active vertices present: one-sided derivative regime\n");
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_oracle_check(const CommonOpts& opts) {
  const RunConfig config = resolve(opts);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979324);
  double worst_energy = 0.0, worst_h1 = 0.0;
  std::uniform_real_distribution<double> jitter(-0.0625, 0.0625);
  for (int trial = 0; trial < 5; ++trial) {
    Mesh2D base = generate_square_mesh(
        4, 2,
        {BoundaryLabel::Signorini, BoundaryLabel::Signorini,
         BoundaryLabel::Dirichlet, BoundaryLabel::Signorini});
    std::vector<char> on_boundary(base.num_vertices(), 0);
    for (const auto& e : base.boundary_edges) {
      on_boundary[e.a] = 1;
      on_boundary[e.b] = 1;
    }
    std::vector<Vec2> moved = base.vertices;
    for (int v = 0; v < base.num_vertices(); ++v)
      if (!on_boundary[v]) moved[v] += Vec2{jitter(rng), jitter(rng)};
    base = make_mesh(moved, base.triangles, base.boundary_edges);
    const LoadFunction f = constant_load(
        0.5 * Vec2{std::cos(angle(rng)), std::sin(angle(rng))});
    const ContactDofs dofs = build_contact_dofs(base);
    if (dofs.num_constraints() > 12)
      throw Error(ErrorCode::TooManyConstraints, "mesh exceeds the oracle limit");
    SparseSymMatrix k = assemble_stiffness(base, config.elasticity);
    LinearForm b = assemble_load(base, f.value);
    apply_dirichlet(base, k, b);
    const QpResult oracle = active_set_oracle(k, b.values, dofs);
    const ContactSolution uz =
        solve_signorini_uzawa(base, config.elasticity, f, 0.0, 1e-11);
    std::vector<double> kx;
    k.apply(oracle.x, kx);
    double je_o = 0.0;
    for (std::size_t i = 0; i < kx.size(); ++i)
      je_o += (0.5 * kx[i] - b.values[i]) * oracle.x[i];
    const double je_u =
        energy_value(base, config.elasticity, f, uz.u).quadratic;
    VectorFieldP1 diff = from_dofs(base, oracle.x);
    for (int v = 0; v < base.num_vertices(); ++v)
      diff.values[v] -= uz.u.values[v];
    worst_energy = std::max(worst_energy, std::abs(je_o - je_u));
    worst_h1 = std::max(worst_h1, h1d_norm(k, diff));
  }
  std::printf("oracle vs uzawa over 5 meshes: max energy gap %.3e, max H1 gap %.3e\n",
              worst_energy, worst_h1);
  if (worst_energy > 1e-8 || worst_h1 > 1e-6)
    throw Error(ErrorCode::NoConvergence, "uzawa disagrees with the oracle");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D Signorini contact and shape optimization toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  int (*run)(const CommonOpts&) = nullptr;
  auto sub = [&](const char* name, const char* desc,
                 int (*fn)(const CommonOpts&)) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd, opts);
    cmd->callback([&run, fn] { run = fn; });
  };
  sub("mesh-gen", "generate the configured mesh and write it out", cmd_mesh_gen);
  sub("solve", "one Signorini solve with VTK output and complementarity report",
      cmd_solve);
  sub("optimize", "full volume-constrained shape-optimization loop", cmd_optimize);
  sub("verify-shape-gradient", "finite-difference sweep against the boundary form",
      cmd_verify_shape_gradient);
  sub("verify-material", "material-derivative verification harness",
      cmd_verify_material);
  sub("oracle-check", "Uzawa QP against active-set enumeration on tiny meshes",
      cmd_oracle_check);

  CLI11_PARSE(app, argc, argv);
  try {
    return run(opts);
  } catch (const Error& e) {
    std::printf("error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::printf("error: INTERNAL: %s\n", e.what());
    return 1;
  }
}
