#include "sigopt/shape.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "sigopt/error.hpp"

namespace sigopt {

namespace {

struct SignoriniEdge {
  int a = -1, b = -1;
  int tri = -1;
  Vec2 normal;
  double length = 0.0;
};

std::vector<SignoriniEdge> signorini_edges(const Mesh2D& mesh) {
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = t;
    }
  }
  const BoundaryNormals normals = compute_normals(mesh);
  std::vector<SignoriniEdge> out;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.label != BoundaryLabel::Signorini) continue;
    SignoriniEdge se;
    se.a = be.a;
    se.b = be.b;
    se.tri = owner.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    se.normal = normals.edge_normals[e];
    se.length = norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
    out.push_back(se);
  }
  return out;
}

void zero_dirichlet_dofs(const Mesh2D& mesh, LinearForm& form) {
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.dirichlet_vertex[v]) {
      form.values[2 * v] = 0.0;
      form.values[2 * v + 1] = 0.0;
    }
  }
}

}  // namespace

ShapeGradientForm shape_gradient_boundary(const Mesh2D& mesh,
                                          const ElasticityParams& params,
                                          const LoadFunction& f,
                                          const VectorFieldP1& u0) {
  LinearForm form;
  form.values.assign(2 * mesh.num_vertices(), 0.0);

  for (const SignoriniEdge& se : signorini_edges(mesh)) {
    const Mat2 grad_u = p1_gradient(mesh, u0, se.tri);
    const Mat2 stress = apply_stiffness_tensor(params, grad_u);
    const double w = 0.5 * ddot(stress, sym(grad_u));
    const Vec2 sigma_n_vec = stress * se.normal;
    const Vec2 mid = 0.5 * (mesh.vertices[se.a] + mesh.vertices[se.b]);
    const Vec2 u_mid = 0.5 * (u0.values[se.a] + u0.values[se.b]);
    const double fu = dot(f.value(mid), u_mid);

    // theta.n (w - f.u): midpoint rule, theta(mid) averages the endpoints.
    const Vec2 c1 = 0.5 * se.length * (w - fu) * se.normal;
    for (int v : {se.a, se.b}) {
      form.values[2 * v] += c1.x;
      form.values[2 * v + 1] += c1.y;
    }
    // stress n . grad(theta) u: grad(theta) is constant on the triangle.
    const ElementGeometry g = element_geometry(mesh, se.tri);
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles[se.tri][k];
      const Vec2 c2 = se.length * dot(g.grad[k], u_mid) * sigma_n_vec;
      form.values[2 * v] += c2.x;
      form.values[2 * v + 1] += c2.y;
    }
    // minus stress n . grad(u) theta at the edge midpoint.
    const Vec2 c3 = -0.5 * se.length * (transpose(grad_u) * sigma_n_vec);
    for (int v : {se.a, se.b}) {
      form.values[2 * v] += c3.x;
      form.values[2 * v + 1] += c3.y;
    }
  }
  zero_dirichlet_dofs(mesh, form);
  return {std::move(form)};
}

double shape_gradient_volume_form(const Mesh2D& mesh,
                                  const ElasticityParams& params,
                                  const LoadFunction& f,
                                  const VectorFieldP1& u0,
                                  const VectorFieldP1& theta) {
  // The divergence term -div(Ae(u0)).grad(u0)theta vanishes element-wise for
  // P1 but carries inter-element jump content; it is realized distributionally
  // as sigma:grad(v) - (sigma n).v on the boundary, with the continuous field
  // v = (vertex-averaged grad u0) theta.
  const std::vector<Mat2> grad_avg = vertex_averaged_gradient(mesh, u0);
  VectorFieldP1 conv = VectorFieldP1::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    conv.values[v] = grad_avg[v] * theta.values[v];

  double value = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = triangle_area(mesh, t);
    const Mat2 grad_u = p1_gradient(mesh, u0, t);
    const Mat2 grad_th = p1_gradient(mesh, theta, t);
    const Mat2 stress = apply_stiffness_tensor(params, grad_u);
    value += area * trace(grad_th) * 0.5 * ddot(stress, sym(grad_u));
    value -= area * ddot(stress, grad_u * grad_th);
    value += area * ddot(stress, p1_gradient(mesh, conv, t));
  }
  for (const SignoriniEdge& se : signorini_edges(mesh)) {
    const Vec2 mid = 0.5 * (mesh.vertices[se.a] + mesh.vertices[se.b]);
    const Vec2 u_mid = 0.5 * (u0.values[se.a] + u0.values[se.b]);
    const Vec2 th_mid = 0.5 * (theta.values[se.a] + theta.values[se.b]);
    const Mat2 stress =
        apply_stiffness_tensor(params, p1_gradient(mesh, u0, se.tri));
    const Mat2 grad_th = p1_gradient(mesh, theta, se.tri);
    value -= se.length * dot(th_mid, se.normal) * dot(f.value(mid), u_mid);
    value += se.length * dot(stress * se.normal, grad_th * u_mid);
    const Vec2 conv_mid = 0.5 * (conv.values[se.a] + conv.values[se.b]);
    value -= se.length * dot(stress * se.normal, conv_mid);
  }
  return value;
}

double volume_gradient(const Mesh2D& mesh, const VectorFieldP1& theta) {
  double value = 0.0;
  std::map<std::pair<int, int>, std::pair<int, int>> directed;
  // Boundary edges may be stored in either order; recover CCW from triangles.
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      directed[{std::min(a, b), std::max(a, b)}] = {a, b};
    }
  for (const auto& be : mesh.boundary_edges) {
    const auto [a, b] = directed.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    const Vec2 n = perp_cw(mesh.vertices[b] - mesh.vertices[a]);  // length-scaled
    const Vec2 th_mid = 0.5 * (theta.values[a] + theta.values[b]);
    value += dot(th_mid, n);
  }
  return value;
}

LinearForm volume_gradient_form(const Mesh2D& mesh) {
  LinearForm form;
  form.values.assign(2 * mesh.num_vertices(), 0.0);
  std::map<std::pair<int, int>, std::pair<int, int>> directed;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      directed[{std::min(a, b), std::max(a, b)}] = {a, b};
    }
  for (const auto& be : mesh.boundary_edges) {
    const auto [a, b] = directed.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    const Vec2 half_n = 0.5 * perp_cw(mesh.vertices[b] - mesh.vertices[a]);
    for (int v : {a, b}) {
      form.values[2 * v] += half_n.x;
      form.values[2 * v + 1] += half_n.y;
    }
  }
  zero_dirichlet_dofs(mesh, form);
  return form;
}

DescentDirection descent_direction(const Mesh2D& mesh,
                                   const ElasticityParams& params,
                                   const ShapeGradientForm& grad_form,
                                   double ell, double tol) {
  SparseSymMatrix k = assemble_stiffness(mesh, params);
  LinearForm rhs;
  rhs.values.assign(2 * mesh.num_vertices(), 0.0);
  const LinearForm vol_form = volume_gradient_form(mesh);
  for (std::size_t i = 0; i < rhs.values.size(); ++i)
    rhs.values[i] = -(grad_form.form.values[i] + ell * vol_form.values[i]);
  apply_dirichlet(mesh, k, rhs);

  DescentDirection d;
  d.theta0 = from_dofs(mesh, solve_spd(k, rhs.values, tol).x);
  d.gradient_value = grad_form(d.theta0) + ell * vol_form(d.theta0);
  return d;
}

double energy_at_deformed(const Mesh2D& mesh, const ElasticityParams& params,
                          const LoadFunction& f, const VectorFieldP1& theta,
                          double t, double solver_tol) {
  const Mesh2D moved = deform_mesh(mesh, theta, t);
  const ContactDofs dofs = build_contact_dofs(moved);
  VectorFieldP1 u;
  if (dofs.num_constraints() <= 12) {
    SparseSymMatrix k = assemble_stiffness(moved, params);
    LinearForm b = assemble_load(moved, f.value);
    apply_dirichlet(moved, k, b);
    u = from_dofs(moved, active_set_oracle(k, b.values, dofs).x);
  } else {
    u = solve_signorini_uzawa(moved, params, f, 0.0, solver_tol).u;
  }
  return energy_value(moved, params, f, u).quadratic;
}

}  // namespace sigopt
