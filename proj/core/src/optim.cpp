#include "sigopt/optim.hpp"

#include <cmath>
#include <string>

#include "sigopt/error.hpp"

namespace sigopt {

double uzawa_update(double ell, double vol, double target, double rho) {
  return ell + rho * (vol - target);
}

ShapeGradientForm lagrangian_gradient_form(const Mesh2D& mesh,
                                           const ElasticityParams& params,
                                           const LoadFunction& f,
                                           const VectorFieldP1& u0, double ell) {
  ShapeGradientForm grad = shape_gradient_boundary(mesh, params, f, u0);
  const LinearForm vol = volume_gradient_form(mesh);
  for (std::size_t i = 0; i < grad.form.values.size(); ++i)
    grad.form.values[i] += ell * vol.values[i];
  return grad;
}

namespace {

ContactSolution solve_state(const Mesh2D& mesh, const ElasticityParams& params,
                            const LoadFunction& f, const OptimConfig& config) {
  if (config.solver_choice == ContactSolverChoice::Nitsche)
    return solve_signorini_nitsche(mesh, params, f, config.nitsche_gamma0,
                                   config.solver_tol);
  return solve_signorini_uzawa(mesh, params, f, config.qp_rho, config.solver_tol);
}

int active_count(const ContactSolution& sol) {
  int c = 0;
  for (char a : sol.active_set) c += a != 0;
  return c;
}

}  // namespace

OptimResult optimize(
    const Mesh2D& mesh0, const ElasticityParams& params, const LoadFunction& f,
    const OptimConfig& config,
    const std::function<void(int, const Mesh2D&, const ContactSolution&)>&
        on_iterate) {
  OptimResult result;
  result.mesh = mesh0;

  const double target =
      config.target_volume > 0.0 ? config.target_volume : volume(mesh0);
  ContactSolution sol = solve_state(result.mesh, params, f, config);
  double energy = energy_value(result.mesh, params, f, sol.u).quadratic;
  const double rho = config.rho_uzawa > 0.0
                         ? config.rho_uzawa
                         : 0.5 * std::abs(energy) / target;
  double ell = 0.0;

  auto record = [&](int iter, double step) {
    const MeshQuality q = mesh_quality(result.mesh);
    result.history.records.push_back({iter, energy, volume(result.mesh), ell,
                                      step, q.min_angle_deg, active_count(sol)});
    if (on_iterate) on_iterate(iter, result.mesh, sol);
  };
  record(0, 0.0);

  double last_checked_energy = energy;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const ShapeGradientForm grad =
        lagrangian_gradient_form(result.mesh, params, f, sol.u, ell);
    const DescentDirection dir =
        descent_direction(result.mesh, params, grad, 0.0, config.solver_tol);

    // Step safeguarding: halve on inverted elements or a quality breach.
    double step = config.step_size;
    Mesh2D trial = result.mesh;
    bool accepted = false;
    for (int attempt = 0; attempt < 10; ++attempt) {
      try {
        trial = deform_mesh(result.mesh, dir.theta0, step);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TangledMesh) throw;
        step *= 0.5;
        continue;
      }
      if (mesh_quality(trial).min_angle_deg < config.min_angle_floor_deg) {
        step *= 0.5;
        continue;
      }
      accepted = true;
      break;
    }
    if (!accepted)
      throw Error(ErrorCode::StepCollapse,
                  "no acceptable step after 10 halvings at iteration " +
                      std::to_string(iter));

    result.mesh = trial;
    sol = solve_state(result.mesh, params, f, config);
    energy = energy_value(result.mesh, params, f, sol.u).quadratic;
    ell = uzawa_update(ell, volume(result.mesh), target, rho);
    record(iter, step);

    if (iter % config.check_period == 0) {
      const double change = std::abs(energy - last_checked_energy);
      if (change <= config.stop_tol * std::abs(last_checked_energy)) break;
      last_checked_energy = energy;
    }
  }
  result.final_solution = sol;
  return result;
}

}  // namespace sigopt
