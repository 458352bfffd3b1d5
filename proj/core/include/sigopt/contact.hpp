#ifndef SIGOPT_CONTACT_HPP
#define SIGOPT_CONTACT_HPP

#include <vector>

#include "sigopt/fem.hpp"
#include "sigopt/loads.hpp"
#include "sigopt/mesh.hpp"

namespace sigopt {

/// Nodal normal-trace constraints u_n <= 0 at contact vertices (Signorini
/// vertices not on the Dirichlet part). Row i of the constraint operator picks
/// the two dofs of contact vertex i with its unit normal as coefficients.
struct ContactDofs {
  std::vector<int> contact_vertices;
  std::vector<Vec2> normals;

  int num_constraints() const { return static_cast<int>(contact_vertices.size()); }
  // (N u)_i = normal displacement at contact vertex i.
  std::vector<double> apply(const std::vector<double>& dofs) const;
};

struct SolverStats {
  int iterations = 0;
  double residual = 0.0;           // |K u + N^T lambda - b| / |b|
  double max_constraint = 0.0;     // max (N u)_i
  double comp_product = 0.0;       // |lambda . N u|
  int active_set_flips = 0;        // Nitsche only
};

struct ContactSolution {
  VectorFieldP1 u;
  std::vector<char> active_set;       // per contact vertex, u_n binding
  std::vector<double> sigma_n;        // discrete normal stress per contact vertex
  std::vector<double> multipliers;    // QP multipliers (empty for Nitsche)
  SolverStats stats;
};

struct ComplementarityReport {
  double max_penetration = 0.0;  // max (u_n)^+
  double max_tension = 0.0;      // max (sigma_n)^+
  double max_comp_product = 0.0; // max |u_n sigma_n| (multiplier sense for QP)
};

/// One constraint row of a quadratic program: sum_j coeff_j * dof_j (<=|=) rhs.
struct QpConstraint {
  std::vector<int> dofs;
  std::vector<double> coeffs;
  double rhs = 0.0;
  bool equality = false;
};

struct QpResult {
  std::vector<double> x;
  std::vector<double> multipliers;
  SolverStats stats;
};

/// Uzawa dual ascent for min 1/2 x'Kx - b'x subject to the given rows.
/// Multiplier update lambda <- lambda + rho (Nx - g), clamped at zero for
/// inequality rows. rho <= 0 picks the mean diagonal of K over constrained
/// dofs. Throws NoConvergence when the KKT residuals do not reach tol.
QpResult solve_qp_uzawa(const SparseSymMatrix& k, const std::vector<double>& b,
                        const std::vector<QpConstraint>& constraints,
                        double rho, double tol, int max_outer = 20000);

/// Unconstrained linear elasticity (traction-free Signorini part).
VectorFieldP1 solve_dirichlet_neumann(const Mesh2D& mesh,
                                      const ElasticityParams& params,
                                      const LoadFunction& f,
                                      double tol = 1e-10);

ContactDofs build_contact_dofs(const Mesh2D& mesh);

ContactSolution solve_signorini_uzawa(const Mesh2D& mesh,
                                      const ElasticityParams& params,
                                      const LoadFunction& f, double rho,
                                      double tol);

/// Exhaustive enumeration of active sets for the same QP; exact up to dense
/// solver roundoff. Limited to 12 constraint rows.
QpResult active_set_oracle(const SparseSymMatrix& k,
                           const std::vector<double>& b, const ContactDofs& n);

/// Semismooth Newton on the symmetric Nitsche formulation with edge-wise
/// parameter gamma_E = h_E / gamma0. gamma0 <= 0 picks 100 (2 mu + lambda).
ContactSolution solve_signorini_nitsche(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const LoadFunction& f, double gamma0,
                                        double tol);

ComplementarityReport complementarity_report(const Mesh2D& mesh,
                                             const ElasticityParams& params,
                                             const ContactSolution& sol);

struct EnergyValue {
  double quadratic = 0.0;  // 1/2 u'Ku - b'u
  double identity = 0.0;   // -1/2 u'Ku, valid at Signorini solutions
  double gap = 0.0;        // |quadratic - identity|
};

EnergyValue energy_value(const Mesh2D& mesh, const ElasticityParams& params,
                         const LoadFunction& f, const VectorFieldP1& u);

}  // namespace sigopt

#endif
