#ifndef SIGOPT_SHAPE_HPP
#define SIGOPT_SHAPE_HPP

#include "sigopt/contact.hpp"
#include "sigopt/fem.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"

namespace sigopt {

/// Assembled coefficients of the linear functional theta -> J'(Omega)(theta)
/// on the current mesh; coefficients vanish on Dirichlet-vertex dofs.
struct ShapeGradientForm {
  LinearForm form;

  double operator()(const VectorFieldP1& theta) const { return form(theta); }
};

struct DescentDirection {
  VectorFieldP1 theta0;
  double gradient_value = 0.0;  // form(theta0) = -|theta0|^2 in H^1_D
};

/// Boundary-form shape gradient of the Signorini energy: contact-boundary
/// integral of theta.n (strain energy density - f.u) plus the traction term
/// against grad(theta) u - grad(u) theta.
ShapeGradientForm shape_gradient_boundary(const Mesh2D& mesh,
                                          const ElasticityParams& params,
                                          const LoadFunction& f,
                                          const VectorFieldP1& u0);

/// Volume-form shape gradient evaluated for one direction; cross-check for the
/// boundary form. The stress-divergence term is assembled distributionally
/// (integration by parts against a recovered continuous convection field)
/// since the element-wise divergence of the constant P1 stress is zero.
double shape_gradient_volume_form(const Mesh2D& mesh,
                                  const ElasticityParams& params,
                                  const LoadFunction& f,
                                  const VectorFieldP1& u0,
                                  const VectorFieldP1& theta);

/// Hadamard derivative of |Omega|: boundary integral of theta.n, edge-midpoint
/// quadrature.
double volume_gradient(const Mesh2D& mesh, const VectorFieldP1& theta);

/// Same functional assembled as a linear form (for the Lagrangian gradient).
LinearForm volume_gradient_form(const Mesh2D& mesh);

/// Riesz representative of minus the gradient form in the H^1_D scalar
/// product: solves <theta0, theta> = -(grad_form(theta) + ell vol'(theta)).
DescentDirection descent_direction(const Mesh2D& mesh,
                                   const ElasticityParams& params,
                                   const ShapeGradientForm& grad_form,
                                   double ell, double tol = 1e-10);

/// Energy of the Signorini state on a deformed mesh; re-solves from scratch.
/// Used by the finite-difference verification of the shape gradient.
double energy_at_deformed(const Mesh2D& mesh, const ElasticityParams& params,
                          const LoadFunction& f, const VectorFieldP1& theta,
                          double t, double solver_tol = 1e-12);

}  // namespace sigopt

#endif
