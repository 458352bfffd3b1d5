#include "sigopt/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigopt/error.hpp"
#include "sigopt/shape.hpp"

namespace sigopt {

namespace {

// Exact derivative, at t = 0, of the discrete contact normals of the mesh
// moved by t theta. Mirrors compute_normals: each vertex normal is the
// normalized sum of the outward normals of its adjacent Signorini edges.
std::vector<Vec2> contact_normal_derivatives(const Mesh2D& mesh,
                                             const VectorFieldP1& theta,
                                             const ContactDofs& dofs) {
  const Vec2 centroid = [&] {
    Vec2 c;
    for (const Vec2& v : mesh.vertices) c += v;
    return (1.0 / mesh.num_vertices()) * c;
  }();

  std::vector<Vec2> accum(mesh.num_vertices());
  std::vector<Vec2> accum_prime(mesh.num_vertices());
  for (const auto& be : mesh.boundary_edges) {
    if (be.label != BoundaryLabel::Signorini) continue;
    Vec2 e = mesh.vertices[be.b] - mesh.vertices[be.a];
    Vec2 ep = theta.values[be.b] - theta.values[be.a];
    Vec2 u = perp_cw(e);
    const Vec2 mid = 0.5 * (mesh.vertices[be.a] + mesh.vertices[be.b]);
    if (dot(u, mid - centroid) < 0.0) {
      u = -1.0 * u;
      ep = -1.0 * ep;
    }
    const Vec2 n = normalized(u);
    const Vec2 up = perp_cw(ep);
    const Vec2 np = (1.0 / norm(u)) * (up - dot(n, up) * n);
    accum[be.a] += n;
    accum[be.b] += n;
    accum_prime[be.a] += np;
    accum_prime[be.b] += np;
  }

  std::vector<Vec2> result(dofs.num_constraints());
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    const int v = dofs.contact_vertices[i];
    const Vec2 m = accum[v];
    const Vec2 n = normalized(m);
    const Vec2 mp = accum_prime[v];
    result[i] = (1.0 / norm(m)) * (mp - dot(n, mp) * n);
  }
  return result;
}

}  // namespace

LinearForm assemble_eprime0(const Mesh2D& mesh, const ElasticityParams& params,
                            const LoadFunction& f, const VectorFieldP1& u0,
                            const VectorFieldP1& theta) {
  LinearForm form;
  form.values.assign(2 * mesh.num_vertices(), 0.0);

  // Volume terms: derivative of the pulled-back load and of the pulled-back
  // stiffness form applied to u0. The pullback by id + t theta is exact per
  // element for P1 fields, so these are the derivatives of the transported
  // discrete problem.
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    const Mat2 grad_u = p1_gradient(mesh, u0, t);
    const Mat2 grad_th = p1_gradient(mesh, theta, t);
    const double div_th = trace(grad_th);
    const Mat2 stress = apply_stiffness_tensor(params, grad_u);

    // Load sensitivity (f div(theta) + grad(f) theta), edge-midpoint rule.
    const Vec2 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                       mesh.vertices[tri[2]]};
    Vec2 gm[3];
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = 0.5 * (p[(e + 1) % 3] + p[(e + 2) % 3]);
      const Vec2 th_mid =
          0.5 * (theta.values[tri[(e + 1) % 3]] + theta.values[tri[(e + 2) % 3]]);
      gm[e] = div_th * f.value(mid) + f.gradient(mid) * th_mid;
    }

    // Minus the stiffness-form derivative against u0.
    const Mat2 m = stress * transpose(grad_th) +
                   apply_stiffness_tensor(params, grad_u * grad_th) -
                   div_th * stress;

    for (int i = 0; i < 3; ++i) {
      const Vec2 load = (g.area / 3.0) * 0.5 * (gm[(i + 1) % 3] + gm[(i + 2) % 3]);
      const Vec2 total = load + g.area * (m * g.grad[i]);
      form.values[2 * tri[i]] += total.x;
      form.values[2 * tri[i] + 1] += total.y;
    }
  }

  // Minus the stiffness pairing with the convection field grad(theta) u0;
  // the convection vanishes on Dirichlet vertices, so the eliminated matrix
  // agrees with the full one on the rows kept below.
  const std::vector<Mat2> grad_th_v = vertex_averaged_gradient(mesh, theta);
  VectorFieldP1 conv = VectorFieldP1::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    conv.values[v] = grad_th_v[v] * u0.values[v];

  SparseSymMatrix k = assemble_stiffness(mesh, params);
  LinearForm b = assemble_load(mesh, f.value);
  apply_dirichlet(mesh, k, b);
  std::vector<double> kc;
  k.apply(to_dofs(conv), kc);
  for (std::size_t i = 0; i < kc.size(); ++i) form.values[i] -= kc[i];

  // Transport of the discrete contact reaction: the equilibrium residual
  // b - K u0 concentrates the normal forces lambda_i n_i at the contact
  // vertices; they rotate with the exact derivative of the discrete normals.
  std::vector<double> ku;
  k.apply(to_dofs(u0), ku);
  const ContactDofs dofs = build_contact_dofs(mesh);
  const std::vector<Vec2> nprime = contact_normal_derivatives(mesh, theta, dofs);
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    const int v = dofs.contact_vertices[i];
    const Vec2 r{b.values[2 * v] - ku[2 * v], b.values[2 * v + 1] - ku[2 * v + 1]};
    const Vec2 add = -dot(dofs.normals[i], r) * nprime[i];
    form.values[2 * v] += add.x;
    form.values[2 * v + 1] += add.y;
  }

  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.dirichlet_vertex[v]) {
      form.values[2 * v] = 0.0;
      form.values[2 * v + 1] = 0.0;
    }
  }
  return form;
}

ActiveSetPartition classify_active_set(const Mesh2D& mesh,
                                       const ElasticityParams& params,
                                       const ContactSolution& sol,
                                       double eps_u, double eps_sigma) {
  if (eps_u <= 0.0) {
    Vec2 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const Vec2& p : mesh.vertices) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    eps_u = 1e-8 * norm(hi - lo);
  }
  if (eps_sigma <= 0.0) eps_sigma = 1e-8 * (2.0 * params.mu + params.lambda);

  const ContactDofs dofs = build_contact_dofs(mesh);
  if (static_cast<std::size_t>(dofs.num_constraints()) != sol.sigma_n.size())
    throw Error(ErrorCode::DimensionMismatch,
                "solution does not match the contact set of this mesh");
  const std::vector<double> un = dofs.apply(to_dofs(sol.u));

  ActiveSetPartition part;
  part.eps_u = eps_u;
  part.eps_sigma = eps_sigma;
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    if (un[i] < -eps_u)
      part.gamma_n.push_back(i);
    else if (sol.sigma_n[i] < -eps_sigma)
      part.gamma_d.push_back(i);
    else
      part.gamma_s.push_back(i);
  }
  return part;
}

VectorFieldP1 solve_material_derivative(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const DerivativeProblemData& data,
                                        double tol) {
  SparseSymMatrix k = assemble_stiffness(mesh, params);
  LinearForm b;
  b.values = data.eprime0_rhs.values;
  apply_dirichlet(mesh, k, b);

  // Constraint n_i . ubar'0 = -n'_i . u0 on the strongly active set, from
  // differentiating n_i(t) . u_t = 0; the convection shift added afterwards
  // moves its normal component into the right-hand side.
  const ContactDofs dofs = build_contact_dofs(mesh);
  const std::vector<Vec2> nprime =
      contact_normal_derivatives(mesh, data.theta, dofs);
  const std::vector<Mat2> grad_th = vertex_averaged_gradient(mesh, data.theta);
  std::vector<QpConstraint> rows;
  auto add_row = [&](int i, bool equality) {
    const int v = dofs.contact_vertices[i];
    QpConstraint c;
    c.dofs = {2 * v, 2 * v + 1};
    c.coeffs = {dofs.normals[i].x, dofs.normals[i].y};
    c.rhs = -dot(nprime[i], data.u0.values[v]) -
            dot(dofs.normals[i], grad_th[v] * data.u0.values[v]);
    c.equality = equality;
    rows.push_back(c);
  };
  for (int i : data.partition.gamma_d) add_row(i, true);
  for (int i : data.partition.gamma_s) add_row(i, false);

  const QpResult qp = solve_qp_uzawa(k, b.values, rows, 0.0, tol);
  VectorFieldP1 u_bar_prime = from_dofs(mesh, qp.x);

  // Shift by the convection term grad(theta) u0, vertex-averaged gradient.
  for (int v = 0; v < mesh.num_vertices(); ++v)
    u_bar_prime.values[v] += grad_th[v] * data.u0.values[v];
  return u_bar_prime;
}

namespace {

VectorFieldP1 transported_solution(const Mesh2D& mesh,
                                   const ElasticityParams& params,
                                   const LoadFunction& f,
                                   const VectorFieldP1& theta, double t,
                                   double tol) {
  const Mesh2D moved = deform_mesh(mesh, theta, t);
  const ContactDofs dofs = build_contact_dofs(moved);
  if (dofs.num_constraints() <= 12) {
    SparseSymMatrix k = assemble_stiffness(moved, params);
    LinearForm b = assemble_load(moved, f.value);
    apply_dirichlet(moved, k, b);
    return from_dofs(moved, active_set_oracle(k, b.values, dofs).x);
  }
  return solve_signorini_uzawa(moved, params, f, 0.0, tol).u;
}

}  // namespace

VectorFieldP1 fd_material_derivative(const Mesh2D& mesh,
                                     const ElasticityParams& params,
                                     const LoadFunction& f,
                                     const VectorFieldP1& theta, double t,
                                     double solver_tol) {
  if (t <= 0.0) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  const VectorFieldP1 up = transported_solution(mesh, params, f, theta, t, solver_tol);
  const VectorFieldP1 um =
      transported_solution(mesh, params, f, theta, -t, solver_tol);
  VectorFieldP1 d = VectorFieldP1::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    d.values[v] = (1.0 / (2.0 * t)) * (up.values[v] - um.values[v]);
  return d;
}

VectorFieldP1 shape_derivative_field(const Mesh2D& mesh,
                                     const VectorFieldP1& u_bar_prime,
                                     const VectorFieldP1& u0,
                                     const VectorFieldP1& theta) {
  const std::vector<Mat2> grad_u = vertex_averaged_gradient(mesh, u0);
  VectorFieldP1 d = VectorFieldP1::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    d.values[v] = u_bar_prime.values[v] - grad_u[v] * theta.values[v];
  return d;
}

VerifyMaterialReport verify_material_theorem(const Mesh2D& mesh,
                                             const ElasticityParams& params,
                                             const LoadFunction& f,
                                             const VectorFieldP1& theta,
                                             const std::vector<double>& t_list) {
  const ContactDofs dofs = build_contact_dofs(mesh);
  ContactSolution sol;
  if (dofs.num_constraints() <= 12) {
    SparseSymMatrix k0 = assemble_stiffness(mesh, params);
    LinearForm b0 = assemble_load(mesh, f.value);
    apply_dirichlet(mesh, k0, b0);
    const QpResult qp = active_set_oracle(k0, b0.values, dofs);
    sol.u = from_dofs(mesh, qp.x);
    sol.multipliers = qp.multipliers;
    sol.sigma_n.resize(dofs.num_constraints());
    std::vector<double> len(mesh.num_vertices(), 0.0);
    for (const auto& be : mesh.boundary_edges) {
      if (be.label != BoundaryLabel::Signorini) continue;
      const double l = 0.5 * norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
      len[be.a] += l;
      len[be.b] += l;
    }
    for (int i = 0; i < dofs.num_constraints(); ++i)
      sol.sigma_n[i] = -qp.multipliers[i] / len[dofs.contact_vertices[i]];
  } else {
    sol = solve_signorini_uzawa(mesh, params, f, 0.0, 1e-11);
  }

  DerivativeProblemData data;
  data.e0 = solve_dirichlet_neumann(mesh, params, f, 1e-12);
  data.u0 = sol.u;
  data.eprime0_rhs = assemble_eprime0(mesh, params, f, sol.u, theta);
  data.partition = classify_active_set(mesh, params, sol);
  data.theta = theta;
  const VectorFieldP1 u_bar_prime =
      solve_material_derivative(mesh, params, data, 1e-11);

  SparseSymMatrix k = assemble_stiffness(mesh, params);
  LinearForm dummy;
  dummy.values.assign(2 * mesh.num_vertices(), 0.0);
  apply_dirichlet(mesh, k, dummy);
  const double ref = std::max(h1d_norm(k, u_bar_prime), 1e-300);

  // Energy-identity route: J'(theta) from the boundary form against the
  // transport identity involving <ubar'0, u0>.
  const ShapeGradientForm bform = shape_gradient_boundary(mesh, params, f, sol.u);
  const double j_boundary = bform(theta);
  double j_identity = -h1d_inner(k, u_bar_prime, sol.u);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = triangle_area(mesh, t);
    const Mat2 grad_u = p1_gradient(mesh, sol.u, t);
    const Mat2 grad_th = p1_gradient(mesh, theta, t);
    const Mat2 stress = apply_stiffness_tensor(params, grad_u);
    j_identity += -0.5 * area * trace(grad_th) * ddot(stress, sym(grad_u));
    j_identity += area * ddot(stress, grad_u * grad_th);
  }
  const double identity_gap =
      std::abs(j_boundary - j_identity) / std::max(1e-300, std::abs(j_boundary));

  VerifyMaterialReport rep;
  rep.weakly_active_present = !data.partition.gamma_s.empty();
  for (double t : t_list) {
    const VectorFieldP1 fd = fd_material_derivative(mesh, params, f, theta, t);
    VectorFieldP1 diff = VectorFieldP1::zero(mesh);
    for (int v = 0; v < mesh.num_vertices(); ++v)
      diff.values[v] = u_bar_prime.values[v] - fd.values[v];
    VerifyMaterialRow row;
    row.t = t;
    row.h1_error_material = h1d_norm(k, diff) / ref;
    row.h1_error_energy_identity = identity_gap;
    row.count_inactive = static_cast<int>(data.partition.gamma_n.size());
    row.count_strong = static_cast<int>(data.partition.gamma_d.size());
    row.count_weak = static_cast<int>(data.partition.gamma_s.size());
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sigopt
