#ifndef SIGOPT_SENSITIVITY_HPP
#define SIGOPT_SENSITIVITY_HPP

#include <vector>

#include "sigopt/contact.hpp"
#include "sigopt/fem.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"

namespace sigopt {

/// Three-way split of the contact vertices by the signs of u_n and sigma_n:
/// inactive (u_n < 0), strongly active (u_n = 0, sigma_n < 0) and weakly
/// active (both vanish), up to the classification thresholds.
struct ActiveSetPartition {
  std::vector<int> gamma_n;  // inactive
  std::vector<int> gamma_d;  // strongly active
  std::vector<int> gamma_s;  // weakly active
  double eps_u = 0.0;
  double eps_sigma = 0.0;
};

struct DerivativeProblemData {
  VectorFieldP1 e0;         // Dirichlet-Neumann solution on the base mesh
  VectorFieldP1 u0;         // Signorini solution, enters the convection shift
  LinearForm eprime0_rhs;   // right-hand side of the derivative problem
  ActiveSetPartition partition;
  VectorFieldP1 theta;
};

/// Right-hand side of the variational problem for the derivative of the
/// transported unconstrained solution, assembled as the exact derivative of
/// the pulled-back discrete forms: load and stiffness sensitivities against
/// u0, minus the stiffness pairing with the convection field grad(theta) u0,
/// plus the grad(theta)^T transport of the discrete contact reactions.
LinearForm assemble_eprime0(const Mesh2D& mesh, const ElasticityParams& params,
                            const LoadFunction& f, const VectorFieldP1& u0,
                            const VectorFieldP1& theta);

/// eps_u <= 0 defaults to 1e-8 * diam(Omega); eps_sigma <= 0 defaults to
/// 1e-8 * (2 mu + lambda).
ActiveSetPartition classify_active_set(const Mesh2D& mesh,
                                       const ElasticityParams& params,
                                       const ContactSolution& sol,
                                       double eps_u = 0.0,
                                       double eps_sigma = 0.0);

/// Material derivative: H^1_D projection of the derivative data onto the cone
/// {w_n = 0 on the strongly active set, w_n <= 0 on the weakly active set},
/// then shifted by the nodal convection field grad(theta) u0.
VectorFieldP1 solve_material_derivative(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const DerivativeProblemData& data,
                                        double tol = 1e-10);

/// Central difference of transported Signorini solutions: solve on the meshes
/// moved by +-t theta, difference nodal vectors under the shared numbering.
VectorFieldP1 fd_material_derivative(const Mesh2D& mesh,
                                     const ElasticityParams& params,
                                     const LoadFunction& f,
                                     const VectorFieldP1& theta, double t,
                                     double solver_tol = 1e-12);

/// u'_0 = ubar'_0 - grad(u0) theta with vertex-averaged gradients.
VectorFieldP1 shape_derivative_field(const Mesh2D& mesh,
                                     const VectorFieldP1& u_bar_prime,
                                     const VectorFieldP1& u0,
                                     const VectorFieldP1& theta);

struct VerifyMaterialRow {
  double t = 0.0;
  double h1_error_material = 0.0;        // |ubar'0 - FD(t)| / |ubar'0|
  double h1_error_energy_identity = 0.0; // relative gap of the J'(theta) routes
  int count_inactive = 0;
  int count_strong = 0;
  int count_weak = 0;
};

struct VerifyMaterialReport {
  std::vector<VerifyMaterialRow> rows;
  bool weakly_active_present = false;  // one-sided-derivative regime flag
};

VerifyMaterialReport verify_material_theorem(const Mesh2D& mesh,
                                             const ElasticityParams& params,
                                             const LoadFunction& f,
                                             const VectorFieldP1& theta,
                                             const std::vector<double>& t_list);

}  // namespace sigopt

#endif
