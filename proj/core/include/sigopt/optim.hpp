#ifndef SIGOPT_OPTIM_HPP
#define SIGOPT_OPTIM_HPP

#include <functional>
#include <vector>

#include "sigopt/contact.hpp"
#include "sigopt/shape.hpp"

namespace sigopt {

enum class ContactSolverChoice { Nitsche, Qp };

struct OptimConfig {
  double step_size = 0.05;
  double rho_uzawa = 0.0;      // <= 0: 0.5 |J0| / target_volume
  double target_volume = 0.0;  // <= 0: volume of the initial mesh
  int max_iters = 400;
  int check_period = 20;
  double stop_tol = 1e-4;      // relative J-change over one check period
  double solver_tol = 1e-8;
  double nitsche_gamma0 = 0.0; // <= 0: solver default
  double qp_rho = 0.0;         // <= 0: solver default
  double min_angle_floor_deg = 5.0;
  ContactSolverChoice solver_choice = ContactSolverChoice::Nitsche;
};

struct OptimRecord {
  int iter = 0;
  double energy = 0.0;
  double volume = 0.0;
  double ell = 0.0;
  double step = 0.0;
  double min_angle_deg = 0.0;
  int active_count = 0;
};

struct OptimHistory {
  std::vector<OptimRecord> records;
};

struct OptimResult {
  Mesh2D mesh;
  OptimHistory history;
  ContactSolution final_solution;
};

/// Equality-constraint multiplier step ell <- ell + rho (vol - target).
double uzawa_update(double ell, double vol, double target, double rho);

/// Energy gradient plus ell times the volume gradient, as one assembled form.
ShapeGradientForm lagrangian_gradient_form(const Mesh2D& mesh,
                                           const ElasticityParams& params,
                                           const LoadFunction& f,
                                           const VectorFieldP1& u0, double ell);

/// Gradient descent with mesh-quality safeguarding (step halving, up to 10
/// times) and the periodic relative-energy-change stopping rule. The optional
/// callback sees every accepted iterate.
OptimResult optimize(
    const Mesh2D& mesh0, const ElasticityParams& params, const LoadFunction& f,
    const OptimConfig& config,
    const std::function<void(int, const Mesh2D&, const ContactSolution&)>&
        on_iterate = nullptr);

}  // namespace sigopt

#endif
