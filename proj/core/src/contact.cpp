#include "sigopt/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>

#include "sigopt/error.hpp"

namespace sigopt {

std::vector<double> ContactDofs::apply(const std::vector<double>& dofs) const {
  std::vector<double> out(contact_vertices.size());
  for (std::size_t i = 0; i < contact_vertices.size(); ++i) {
    const int v = contact_vertices[i];
    out[i] = normals[i].x * dofs[2 * v] + normals[i].y * dofs[2 * v + 1];
  }
  return out;
}

ContactDofs build_contact_dofs(const Mesh2D& mesh) {
  const BoundaryNormals n = compute_normals(mesh);
  return {n.contact_vertices, n.vertex_normals};
}

namespace {

struct AssembledProblem {
  SparseSymMatrix k;
  LinearForm b;
};

AssembledProblem assemble_problem(const Mesh2D& mesh,
                                  const ElasticityParams& params,
                                  const LoadFunction& f) {
  AssembledProblem p;
  p.k = assemble_stiffness(mesh, params);
  p.b = assemble_load(mesh, f.value);
  apply_dirichlet(mesh, p.k, p.b);
  return p;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Half the total length of adjacent Signorini edges per contact vertex; used
// to convert QP multipliers into a nodal normal stress.
std::vector<double> lumped_contact_lengths(const Mesh2D& mesh,
                                           const ContactDofs& dofs) {
  std::vector<double> len(mesh.num_vertices(), 0.0);
  for (const auto& be : mesh.boundary_edges) {
    if (be.label != BoundaryLabel::Signorini) continue;
    const double l = 0.5 * norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
    len[be.a] += l;
    len[be.b] += l;
  }
  std::vector<double> out(dofs.num_constraints());
  for (int i = 0; i < dofs.num_constraints(); ++i)
    out[i] = len[dofs.contact_vertices[i]];
  return out;
}

}  // namespace

QpResult solve_qp_uzawa(const SparseSymMatrix& k, const std::vector<double>& b,
                        const std::vector<QpConstraint>& constraints,
                        double rho, double tol, int max_outer) {
  const int n = k.dimension();
  const int m = static_cast<int>(constraints.size());
  for (const auto& c : constraints) {
    if (c.dofs.size() != c.coeffs.size())
      throw Error(ErrorCode::DimensionMismatch, "constraint row is ragged");
    for (int d : c.dofs)
      if (d < 0 || d >= n)
        throw Error(ErrorCode::DimensionMismatch, "constraint dof out of range");
  }

  // Stable dual ascent needs rho < 2 / lambda_max(N K^{-1} N^T); estimate the
  // largest Schur eigenvalue by power iteration when no step is given.
  if (rho <= 0.0 && m > 0) {
    std::vector<double> y(m, 1.0), sx(n, 0.0);
    double lam_max = 1.0;
    for (int it = 0; it < 12; ++it) {
      std::vector<double> rhs_p(n, 0.0);
      for (int i = 0; i < m; ++i)
        for (std::size_t j = 0; j < constraints[i].dofs.size(); ++j)
          rhs_p[constraints[i].dofs[j]] += y[i] * constraints[i].coeffs[j];
      sx = solve_spd(k, rhs_p, 1e-8, 0, &sx).x;
      std::vector<double> sy(m, 0.0);
      for (int i = 0; i < m; ++i)
        for (std::size_t j = 0; j < constraints[i].dofs.size(); ++j)
          sy[i] += constraints[i].coeffs[j] * sx[constraints[i].dofs[j]];
      double nrm = 0.0;
      for (double v : sy) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (nrm <= 0.0) break;
      lam_max = nrm;
      for (int i = 0; i < m; ++i) y[i] = sy[i] / nrm;
    }
    rho = 1.0 / (1.1 * lam_max);
  } else if (rho <= 0.0) {
    rho = 1.0;
  }

  QpResult res;
  res.multipliers.assign(m, 0.0);
  std::vector<double> rhs(n), x(n, 0.0);
  const double inner_tol = std::max(1e-14, 0.01 * tol);

  auto residual_rows = [&](const std::vector<double>& xx,
                           std::vector<double>& rows) {
    rows.resize(m);
    for (int i = 0; i < m; ++i) {
      double s = -constraints[i].rhs;
      for (std::size_t j = 0; j < constraints[i].dofs.size(); ++j)
        s += constraints[i].coeffs[j] * xx[constraints[i].dofs[j]];
      rows[i] = s;
    }
  };

  std::vector<double> rows;
  double feas = 0.0, comp = 0.0;
  double best_feas = std::numeric_limits<double>::max();
  std::vector<double> best_lam = res.multipliers;
  int total_cg = 0;
  for (int outer = 1; outer <= max_outer; ++outer) {
    rhs = b;
    for (int i = 0; i < m; ++i) {
      const double lam = res.multipliers[i];
      if (lam == 0.0) continue;
      for (std::size_t j = 0; j < constraints[i].dofs.size(); ++j)
        rhs[constraints[i].dofs[j]] -= lam * constraints[i].coeffs[j];
    }
    try {
      const CgResult cg = solve_spd(k, rhs, inner_tol, 0, &x);
      x = cg.x;
      total_cg += cg.iterations;
    } catch (const Error&) {
      // Inner solve blown up by runaway multipliers; back off and restart.
      rho *= 0.5;
      res.multipliers = best_lam;
      std::fill(x.begin(), x.end(), 0.0);
      continue;
    }

    residual_rows(x, rows);
    feas = 0.0;
    comp = 0.0;
    for (int i = 0; i < m; ++i) {
      const double viol = constraints[i].equality ? std::abs(rows[i])
                                                  : std::max(0.0, rows[i]);
      feas = std::max(feas, viol);
      comp = std::max(comp, std::abs(res.multipliers[i] * rows[i]));
    }
    const double scale = 1.0 + inf_norm(x);
    const double lam_scale = 1.0 + inf_norm(res.multipliers);
    if (std::getenv("SIGOPT_UZAWA_DEBUG") && outer % 500 == 0)
      std::fprintf(stderr, "outer=%d rho=%g feas=%g comp=%g lam=%g\n", outer,
                   rho, feas, comp, inf_norm(res.multipliers));
    if (feas <= tol * scale && comp <= tol * scale * lam_scale) break;
    if (outer == max_outer)
      throw Error(ErrorCode::NoConvergence,
                  "uzawa feasibility " + std::to_string(feas) + " after " +
                      std::to_string(max_outer) + " outer iterations");

    // Dual ascent diverges when rho exceeds 2 / lambda_max of the Schur
    // complement; the blow-up is exponential, so only clear escapes past the
    // best iterate count. Back off geometrically and restart from the best.
    if (!std::isfinite(feas) || feas > 1e3 * (best_feas + scale)) {
      rho *= 0.5;
      res.multipliers = best_lam;
      std::fill(x.begin(), x.end(), 0.0);
      continue;
    }
    if (feas < best_feas) {
      best_feas = feas;
      best_lam = res.multipliers;
    }

    for (int i = 0; i < m; ++i) {
      double lam = res.multipliers[i] + rho * rows[i];
      if (!constraints[i].equality) lam = std::max(0.0, lam);
      res.multipliers[i] = lam;
    }
  }

  res.x = x;
  res.stats.max_constraint = 0.0;
  for (int i = 0; i < m; ++i)
    res.stats.max_constraint = std::max(res.stats.max_constraint, rows[i]);
  res.stats.comp_product = comp;
  // Stationarity residual of the final inner solve.
  std::vector<double> kx;
  k.apply(x, kx);
  double rnorm = 0.0, bnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    rnorm += (kx[i] - rhs[i]) * (kx[i] - rhs[i]);
    bnorm += b[i] * b[i];
  }
  res.stats.residual = std::sqrt(rnorm) / (std::sqrt(bnorm) + 1e-300);
  res.stats.iterations = total_cg;
  return res;
}

VectorFieldP1 solve_dirichlet_neumann(const Mesh2D& mesh,
                                      const ElasticityParams& params,
                                      const LoadFunction& f, double tol) {
  const AssembledProblem p = assemble_problem(mesh, params, f);
  return from_dofs(mesh, solve_spd(p.k, p.b.values, tol).x);
}

ContactSolution solve_signorini_uzawa(const Mesh2D& mesh,
                                      const ElasticityParams& params,
                                      const LoadFunction& f, double rho,
                                      double tol) {
  const AssembledProblem p = assemble_problem(mesh, params, f);
  const ContactDofs dofs = build_contact_dofs(mesh);

  std::vector<QpConstraint> rows(dofs.num_constraints());
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    const int v = dofs.contact_vertices[i];
    rows[i].dofs = {2 * v, 2 * v + 1};
    rows[i].coeffs = {dofs.normals[i].x, dofs.normals[i].y};
    rows[i].rhs = 0.0;
    rows[i].equality = false;
  }
  const QpResult qp = solve_qp_uzawa(p.k, p.b.values, rows, rho, tol);

  ContactSolution sol;
  sol.u = from_dofs(mesh, qp.x);
  sol.multipliers = qp.multipliers;
  sol.stats = qp.stats;
  const std::vector<double> len = lumped_contact_lengths(mesh, dofs);
  sol.sigma_n.resize(dofs.num_constraints());
  sol.active_set.resize(dofs.num_constraints());
  const double lam_floor = tol * (1.0 + inf_norm(qp.x));
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    sol.sigma_n[i] = -qp.multipliers[i] / len[i];
    sol.active_set[i] = qp.multipliers[i] > lam_floor ? 1 : 0;
  }
  return sol;
}

namespace {

// Dense Cholesky K = L L^T, lower triangle stored row-major.
struct DenseCholesky {
  int n = 0;
  std::vector<double> l;

  explicit DenseCholesky(const SparseSymMatrix& k) : n(k.dimension()), l(n * n, 0.0) {
    const auto& rp = k.row_ptr();
    for (int i = 0; i < n; ++i)
      for (int p = rp[i]; p < rp[i + 1]; ++p)
        if (k.cols()[p] <= i) l[i * n + k.cols()[p]] = k.vals()[p];
    for (int j = 0; j < n; ++j) {
      double d = l[j * n + j];
      for (int t = 0; t < j; ++t) d -= l[j * n + t] * l[j * n + t];
      if (d <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "matrix not positive definite");
      d = std::sqrt(d);
      l[j * n + j] = d;
      for (int i = j + 1; i < n; ++i) {
        double s = l[i * n + j];
        for (int t = 0; t < j; ++t) s -= l[i * n + t] * l[j * n + t];
        l[i * n + j] = s / d;
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < i; ++t) b[i] -= l[i * n + t] * b[t];
      b[i] /= l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int t = i + 1; t < n; ++t) b[i] -= l[t * n + i] * b[t];
      b[i] /= l[i * n + i];
    }
    return b;
  }
};

// Gaussian elimination with partial pivoting for the tiny active-set systems.
bool solve_small(std::vector<double> a, std::vector<double> b,
                 std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) < 1e-14) return false;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double fac = a[r * n + c] / a[c * n + c];
      for (int j = c; j < n; ++j) a[r * n + j] -= fac * a[c * n + j];
      b[r] -= fac * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a[r * n + j] * x[j];
    x[r] = s / a[r * n + r];
  }
  return true;
}

}  // namespace

QpResult active_set_oracle(const SparseSymMatrix& k,
                           const std::vector<double>& b, const ContactDofs& n) {
  const int m = n.num_constraints();
  if (m > 12)
    throw Error(ErrorCode::TooManyConstraints,
                "oracle enumerates 2^m active sets, m = " + std::to_string(m));

  const DenseCholesky chol(k);
  const std::vector<double> u0 = chol.solve(b);

  // Columns of K^{-1} N^T, one per constraint.
  std::vector<std::vector<double>> x_cols(m);
  for (int i = 0; i < m; ++i) {
    std::vector<double> e(k.dimension(), 0.0);
    const int v = n.contact_vertices[i];
    e[2 * v] = n.normals[i].x;
    e[2 * v + 1] = n.normals[i].y;
    x_cols[i] = chol.solve(std::move(e));
  }
  // Schur complement S = N K^{-1} N^T and the unconstrained traces N u0.
  std::vector<double> s(m * m, 0.0);
  std::vector<double> nu0 = n.apply(u0);
  for (int i = 0; i < m; ++i) {
    const std::vector<double> nx = n.apply(x_cols[i]);
    for (int j = 0; j < m; ++j) s[j * m + i] = nx[j];
  }

  const double feas_tol = 1e-10 * (1.0 + inf_norm(u0));
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) active.push_back(i);
    const int a = static_cast<int>(active.size());
    std::vector<double> lam_a;
    if (a > 0) {
      std::vector<double> sub(a * a), rhs(a);
      for (int r = 0; r < a; ++r) {
        rhs[r] = nu0[active[r]];
        for (int c = 0; c < a; ++c) sub[r * a + c] = s[active[r] * m + active[c]];
      }
      if (!solve_small(std::move(sub), std::move(rhs), lam_a)) continue;
    }
    std::vector<double> lam(m, 0.0);
    for (int r = 0; r < a; ++r) lam[active[r]] = lam_a[r];

    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      if (lam[i] < -feas_tol) ok = false;
    if (!ok) continue;

    std::vector<double> u = u0;
    for (int i = 0; i < m; ++i) {
      if (lam[i] == 0.0) continue;
      for (int d = 0; d < k.dimension(); ++d) u[d] -= lam[i] * x_cols[i][d];
    }
    const std::vector<double> nu = n.apply(u);
    for (int i = 0; i < m && ok; ++i)
      if (nu[i] > feas_tol) ok = false;
    if (!ok) continue;

    QpResult res;
    res.x = std::move(u);
    res.multipliers = std::move(lam);
    res.stats.iterations = static_cast<int>(mask) + 1;
    res.stats.max_constraint = inf_norm(nu) == 0.0 ? 0.0 : *std::max_element(nu.begin(), nu.end());
    double comp = 0.0;
    for (int i = 0; i < m; ++i)
      comp = std::max(comp, std::abs(res.multipliers[i] * nu[i]));
    res.stats.comp_product = comp;
    return res;
  }
  throw Error(ErrorCode::NoFeasibleKkt, "no active set satisfies the KKT signs");
}

namespace {

struct NitscheEdge {
  int a = -1, b = -1;        // edge endpoints
  int tri[3] = {-1, -1, -1}; // adjacent triangle vertices
  Vec2 normal;
  double length = 0.0;
  double gamma = 0.0;        // gamma_E = h_E / gamma0
  // Row maps over the 6 triangle dofs (pairs per vertex in tri order).
  std::array<double, 6> sigma_row{};  // u -> sigma_n(u) on the triangle
  // Trapezoidal samples at the non-Dirichlet endpoints: u -> u_n(vertex)
  // with the averaged vertex normal.
  int num_nodes = 0;
  int node_vertex[2] = {-1, -1};
  std::array<std::array<double, 6>, 2> node_row{};
};

}  // namespace

ContactSolution solve_signorini_nitsche(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const LoadFunction& f, double gamma0,
                                        double tol) {
  if (gamma0 <= 0.0) gamma0 = 1e5 * (2.0 * params.mu + params.lambda);
  const int nd = 2 * mesh.num_vertices();

  SparseSymMatrix k = assemble_stiffness(mesh, params);
  LinearForm b = assemble_load(mesh, f.value);

  // Collect Signorini edges with their adjacent triangle.
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int va = tri[e], vb = tri[(e + 1) % 3];
      owner[{std::min(va, vb), std::max(va, vb)}] = t;
    }
  }
  const BoundaryNormals normals = compute_normals(mesh);
  std::vector<Vec2> vertex_normal(mesh.num_vertices());
  std::vector<char> is_contact(mesh.num_vertices(), 0);
  for (std::size_t i = 0; i < normals.contact_vertices.size(); ++i) {
    vertex_normal[normals.contact_vertices[i]] = normals.vertex_normals[i];
    is_contact[normals.contact_vertices[i]] = 1;
  }
  std::vector<NitscheEdge> edges;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.label != BoundaryLabel::Signorini) continue;
    NitscheEdge ne;
    ne.a = be.a;
    ne.b = be.b;
    const int t = owner.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    for (int i = 0; i < 3; ++i) ne.tri[i] = mesh.triangles[t][i];
    ne.normal = normals.edge_normals[e];
    ne.length = norm(mesh.vertices[be.b] - mesh.vertices[be.a]);
    ne.gamma = ne.length / gamma0;

    const ElementGeometry g = element_geometry(mesh, t);
    for (int i = 0; i < 3; ++i) {
      // sigma_n of the unit basis fields: n . A(e_c outer grad lambda_i) n
      for (int c = 0; c < 2; ++c) {
        const Vec2 unit = c == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        const Mat2 stress =
            apply_stiffness_tensor(params, Mat2::outer(unit, g.grad[i]));
        ne.sigma_row[2 * i + c] = dot(stress * ne.normal, ne.normal);
      }
    }
    for (int v : {ne.a, ne.b}) {
      if (!is_contact[v]) continue;
      const int s = ne.num_nodes++;
      ne.node_vertex[s] = v;
      for (int i = 0; i < 3; ++i) {
        if (ne.tri[i] != v) continue;
        ne.node_row[s][2 * i] = vertex_normal[v].x;
        ne.node_row[s][2 * i + 1] = vertex_normal[v].y;
      }
    }
    edges.push_back(ne);
  }

  // Base stiffness triplets, reused every Newton step.
  std::vector<std::array<int, 2>> base_idx;
  std::vector<double> base_val;
  for (int i = 0; i < nd; ++i) {
    for (int p = k.row_ptr()[i]; p < k.row_ptr()[i + 1]; ++p) {
      base_idx.push_back({i, k.cols()[p]});
      base_val.push_back(k.vals()[p]);
    }
  }
  // The consistency term is active-set independent; fold it into the base.
  for (const auto& ne : edges) {
    const double w = -ne.gamma * ne.length;
    for (int i = 0; i < 6; ++i) {
      if (ne.sigma_row[i] == 0.0) continue;
      const int gi = 2 * ne.tri[i / 2] + (i % 2);
      for (int j = 0; j < 6; ++j) {
        if (ne.sigma_row[j] == 0.0) continue;
        const int gj = 2 * ne.tri[j / 2] + (j % 2);
        base_idx.push_back({gi, gj});
        base_val.push_back(w * ne.sigma_row[i] * ne.sigma_row[j]);
      }
    }
  }

  std::vector<std::array<char, 2>> active(edges.size(), {0, 0});
  std::vector<double> u(nd, 0.0);
  SolverStats stats;
  const int max_newton = 100;
  bool converged = false;
  for (int it = 1; it <= max_newton; ++it) {
    std::vector<std::array<int, 2>> idx = base_idx;
    std::vector<double> val = base_val;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ne = edges[e];
      const double w = 0.5 * ne.length / ne.gamma;
      for (int s = 0; s < ne.num_nodes; ++s) {
        if (!active[e][s]) continue;
        std::array<double, 6> p_row{};
        for (int i = 0; i < 6; ++i)
          p_row[i] = ne.node_row[s][i] - ne.gamma * ne.sigma_row[i];
        for (int i = 0; i < 6; ++i) {
          if (p_row[i] == 0.0) continue;
          const int gi = 2 * ne.tri[i / 2] + (i % 2);
          for (int j = 0; j < 6; ++j) {
            if (p_row[j] == 0.0) continue;
            const int gj = 2 * ne.tri[j / 2] + (j % 2);
            idx.push_back({gi, gj});
            val.push_back(w * p_row[i] * p_row[j]);
          }
        }
      }
    }
    SparseSymMatrix j =
        SparseSymMatrix::from_triplets(nd, std::move(idx), std::move(val));
    LinearForm rhs;
    rhs.values = b.values;
    apply_dirichlet(mesh, j, rhs);

    const CgResult cg =
        solve_spd(j, rhs.values, std::max(1e-13, 0.01 * tol), 0, &u);
    u = cg.x;
    stats.iterations = it;

    int flips = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& ne = edges[e];
      for (int s = 0; s < ne.num_nodes; ++s) {
        double p = 0.0;
        for (int i = 0; i < 6; ++i) {
          const int gi = 2 * ne.tri[i / 2] + (i % 2);
          p += (ne.node_row[s][i] - ne.gamma * ne.sigma_row[i]) * u[gi];
        }
        const char want = p > 0.0 ? 1 : 0;
        if (want != active[e][s]) ++flips;
        active[e][s] = want;
      }
    }
    stats.active_set_flips += flips;
    if (flips == 0) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorCode::NoConvergence,
                "nitsche active set cycles after " +
                    std::to_string(max_newton) + " newton steps");

  ContactSolution sol;
  sol.u = from_dofs(mesh, u);

  const ContactDofs dofs = build_contact_dofs(mesh);
  // Nodal contact pressure: length-weighted average of the discrete Nitsche
  // reaction -(1/gamma_E) [u_n - gamma_E sigma_n]_+ per edge, which is
  // nonpositive by construction and vanishes on inactive edges.
  std::vector<double> sn_acc(mesh.num_vertices(), 0.0);
  std::vector<double> sn_w(mesh.num_vertices(), 0.0);
  std::vector<char> vert_active(mesh.num_vertices(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& ne = edges[e];
    for (int s = 0; s < ne.num_nodes; ++s) {
      double p = 0.0;
      for (int i = 0; i < 6; ++i)
        p += (ne.node_row[s][i] - ne.gamma * ne.sigma_row[i]) *
             u[2 * ne.tri[i / 2] + (i % 2)];
      const int v = ne.node_vertex[s];
      sn_acc[v] += 0.5 * ne.length * (-std::max(0.0, p) / ne.gamma);
      sn_w[v] += 0.5 * ne.length;
      if (active[e][s]) vert_active[v] = 1;
    }
  }
  sol.sigma_n.resize(dofs.num_constraints());
  sol.active_set.resize(dofs.num_constraints());
  const std::vector<double> nu = dofs.apply(u);
  double max_c = 0.0, comp = 0.0;
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    const int v = dofs.contact_vertices[i];
    sol.sigma_n[i] = sn_acc[v] / sn_w[v];
    sol.active_set[i] = vert_active[v];
    max_c = std::max(max_c, nu[i]);
    comp = std::max(comp, std::abs(nu[i] * sol.sigma_n[i]));
  }
  stats.max_constraint = max_c;
  stats.comp_product = comp;
  stats.residual = 0.0;
  sol.stats = stats;
  return sol;
}

ComplementarityReport complementarity_report(const Mesh2D& mesh,
                                             const ElasticityParams& params,
                                             const ContactSolution& sol) {
  (void)params;
  const ContactDofs dofs = build_contact_dofs(mesh);
  const std::vector<double> nu = dofs.apply(to_dofs(sol.u));
  ComplementarityReport rep;
  for (int i = 0; i < dofs.num_constraints(); ++i) {
    rep.max_penetration = std::max(rep.max_penetration, nu[i]);
    rep.max_tension = std::max(rep.max_tension, sol.sigma_n[i]);
    rep.max_comp_product =
        std::max(rep.max_comp_product, std::abs(nu[i] * sol.sigma_n[i]));
  }
  rep.max_penetration = std::max(0.0, rep.max_penetration);
  rep.max_tension = std::max(0.0, rep.max_tension);
  return rep;
}

EnergyValue energy_value(const Mesh2D& mesh, const ElasticityParams& params,
                         const LoadFunction& f, const VectorFieldP1& u) {
  const AssembledProblem p = assemble_problem(mesh, params, f);
  const std::vector<double> ud = to_dofs(u);
  std::vector<double> ku;
  p.k.apply(ud, ku);
  double uku = 0.0, bu = 0.0;
  for (std::size_t i = 0; i < ud.size(); ++i) {
    uku += ud[i] * ku[i];
    bu += p.b.values[i] * ud[i];
  }
  EnergyValue e;
  e.quadratic = 0.5 * uku - bu;
  e.identity = -0.5 * uku;
  e.gap = std::abs(e.quadratic - e.identity);
  return e;
}

}  // namespace sigopt
