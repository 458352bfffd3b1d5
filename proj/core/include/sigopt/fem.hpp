#ifndef SIGOPT_FEM_HPP
#define SIGOPT_FEM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sigopt/mesh.hpp"
#include "sigopt/vec2.hpp"

namespace sigopt {

/// Plane-strain isotropic law sigma(v) = 2 mu e(v) + lambda tr(e(v)) I.
struct ElasticityParams {
  double mu = 0.0;
  double lambda = 0.0;
};

/// Nodal vector field (displacement, direction, derivative field), bound to a
/// mesh through its identity token.
struct VectorFieldP1 {
  std::vector<Vec2> values;
  std::uint64_t mesh_id = 0;

  static VectorFieldP1 zero(const Mesh2D& mesh) {
    return {std::vector<Vec2>(mesh.vertices.size()), mesh.id};
  }
};

/// Coefficients of a linear functional on nodal vector fields; length is
/// 2 * vertex count, dof 2i is the x-component at vertex i.
struct LinearForm {
  std::vector<double> values;

  double operator()(const VectorFieldP1& v) const;
};

/// Symmetric sparse matrix in compressed-row form (all entries stored).
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  int dimension() const { return static_cast<int>(row_ptr_.size()) - 1; }
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> diagonal() const;
  double entry(int i, int j) const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& vals() const { return vals_; }
  std::vector<double>& vals() { return vals_; }

  static SparseSymMatrix from_triplets(
      int n, std::vector<std::array<int, 2>> idx, std::vector<double> val);

 private:
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // achieved relative preconditioned residual
};

struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad;  // gradients of the barycentric basis functions
};

ElementGeometry element_geometry(const Mesh2D& mesh, int tri);

/// Applies the isotropic stiffness tensor: A M := 2 mu sym(M) + lambda tr(M) I.
Mat2 apply_stiffness_tensor(const ElasticityParams& params, const Mat2& m);

/// Element-constant gradient of a P1 field, (grad u)_{ij} = du_i/dx_j.
Mat2 p1_gradient(const Mesh2D& mesh, const VectorFieldP1& u, int tri);

/// Area-weighted average of element gradients at each vertex.
std::vector<Mat2> vertex_averaged_gradient(const Mesh2D& mesh,
                                           const VectorFieldP1& u);

SparseSymMatrix assemble_stiffness(const Mesh2D& mesh,
                                   const ElasticityParams& params);

/// Volume load assembled with the 3-point edge-midpoint rule (exact for
/// quadratic integrands).
LinearForm assemble_load(const Mesh2D& mesh,
                         const std::function<Vec2(Vec2)>& f);

/// Symmetric row/column elimination of both dofs of every Dirichlet vertex;
/// eliminated rows become identity with zero right-hand side.
void apply_dirichlet(const Mesh2D& mesh, SparseSymMatrix& k, LinearForm& b);

/// Jacobi-preconditioned conjugate gradients. Throws NoConvergence after
/// max_iters (default 20 * dimension when <= 0).
CgResult solve_spd(const SparseSymMatrix& k, const std::vector<double>& b,
                   double tol, int max_iters = 0,
                   const std::vector<double>* x0 = nullptr);

double h1d_inner(const SparseSymMatrix& k, const VectorFieldP1& u,
                 const VectorFieldP1& v);
double h1d_norm(const SparseSymMatrix& k, const VectorFieldP1& u);

struct EdgeStress {
  int edge_index = -1;   // index into mesh.boundary_edges
  Vec2 traction;         // A e(u) n of the adjacent triangle
  double sigma_n = 0.0;  // traction . n
  Vec2 sigma_t;          // traction - sigma_n n
};

/// Element-constant stress of the unique triangle adjacent to each Signorini
/// edge, applied to the outward edge normal.
std::vector<EdgeStress> boundary_stress(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const VectorFieldP1& u);

std::vector<double> to_dofs(const VectorFieldP1& u);
VectorFieldP1 from_dofs(const Mesh2D& mesh, const std::vector<double>& dofs);

}  // namespace sigopt

#endif
