#include "sigopt/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "sigopt/error.hpp"

namespace sigopt {

double LinearForm::operator()(const VectorFieldP1& v) const {
  if (values.size() != 2 * v.values.size())
    throw Error(ErrorCode::DimensionMismatch, "linear form / field size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i)
    s += values[2 * i] * v.values[i].x + values[2 * i + 1] * v.values[i].y;
  return s;
}

void SparseSymMatrix::apply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  const int n = dimension();
  if (static_cast<int>(x.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
  y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += vals_[p] * x[cols_[p]];
    y[i] = s;
  }
}

std::vector<double> SparseSymMatrix::diagonal() const {
  const int n = dimension();
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      if (cols_[p] == i) d[i] = vals_[p];
  return d;
}

double SparseSymMatrix::entry(int i, int j) const {
  for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    if (cols_[p] == j) return vals_[p];
  return 0.0;
}

SparseSymMatrix SparseSymMatrix::from_triplets(int n,
                                               std::vector<std::array<int, 2>> idx,
                                               std::vector<double> val) {
  if (idx.size() != val.size())
    throw Error(ErrorCode::DimensionMismatch, "triplet arrays differ in length");
  std::vector<int> count(n, 0);
  for (const auto& ij : idx) ++count[ij[0]];

  SparseSymMatrix m;
  m.row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) m.row_ptr_[i + 1] = m.row_ptr_[i] + count[i];
  m.cols_.resize(idx.size());
  m.vals_.resize(idx.size());
  std::vector<int> cursor(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const int p = cursor[idx[k][0]]++;
    m.cols_[p] = idx[k][1];
    m.vals_[p] = val[k];
  }

  // Sort each row and merge duplicate column entries in place.
  std::vector<int> perm;
  for (int i = 0; i < n; ++i) {
    const int lo = m.row_ptr_[i], hi = cursor[i];
    perm.resize(hi - lo);
    std::iota(perm.begin(), perm.end(), lo);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return m.cols_[a] < m.cols_[b]; });
    std::vector<int> c(hi - lo);
    std::vector<double> v(hi - lo);
    for (int k = 0; k < hi - lo; ++k) {
      c[k] = m.cols_[perm[k]];
      v[k] = m.vals_[perm[k]];
    }
    std::copy(c.begin(), c.end(), m.cols_.begin() + lo);
    std::copy(v.begin(), v.end(), m.vals_.begin() + lo);
  }
  std::vector<int> new_ptr{0};
  std::vector<int> new_cols;
  std::vector<double> new_vals;
  new_cols.reserve(m.cols_.size());
  new_vals.reserve(m.vals_.size());
  for (int i = 0; i < n; ++i) {
    for (int p = m.row_ptr_[i]; p < m.row_ptr_[i + 1]; ++p) {
      if (!new_cols.empty() && static_cast<int>(new_cols.size()) > new_ptr.back() &&
          new_cols.back() == m.cols_[p]) {
        new_vals.back() += m.vals_[p];
      } else {
        new_cols.push_back(m.cols_[p]);
        new_vals.push_back(m.vals_[p]);
      }
    }
    new_ptr.push_back(static_cast<int>(new_cols.size()));
  }
  m.row_ptr_ = std::move(new_ptr);
  m.cols_ = std::move(new_cols);
  m.vals_ = std::move(new_vals);
  return m;
}

ElementGeometry element_geometry(const Mesh2D& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  const Vec2 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]],
             c = mesh.vertices[t[2]];
  ElementGeometry g;
  g.area = 0.5 * cross(b - a, c - a);
  const double inv2a = 1.0 / (2.0 * g.area);
  // grad lambda_i is the inward-rotated opposite edge over twice the area
  g.grad[0] = inv2a * perp_cw(c - b) * -1.0;
  g.grad[1] = inv2a * perp_cw(a - c) * -1.0;
  g.grad[2] = inv2a * perp_cw(b - a) * -1.0;
  return g;
}

Mat2 apply_stiffness_tensor(const ElasticityParams& params, const Mat2& m) {
  return 2.0 * params.mu * sym(m) + params.lambda * trace(m) * Mat2::identity();
}

Mat2 p1_gradient(const Mesh2D& mesh, const VectorFieldP1& u, int tri) {
  const ElementGeometry g = element_geometry(mesh, tri);
  Mat2 grad;
  for (int k = 0; k < 3; ++k) {
    const Vec2 v = u.values[mesh.triangles[tri][k]];
    grad += Mat2::outer(v, g.grad[k]);
  }
  return grad;
}

std::vector<Mat2> vertex_averaged_gradient(const Mesh2D& mesh,
                                           const VectorFieldP1& u) {
  std::vector<Mat2> acc(mesh.num_vertices());
  std::vector<double> weight(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double a = triangle_area(mesh, t);
    const Mat2 g = a * p1_gradient(mesh, u, t);
    for (int v : mesh.triangles[t]) {
      acc[v] += g;
      weight[v] += a;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) acc[v] *= 1.0 / weight[v];
  return acc;
}

SparseSymMatrix assemble_stiffness(const Mesh2D& mesh,
                                   const ElasticityParams& params) {
  const int n = 2 * mesh.num_vertices();
  std::vector<std::array<int, 2>> idx;
  std::vector<double> val;
  idx.reserve(36 * mesh.triangles.size());
  val.reserve(36 * mesh.triangles.size());

  // Local 6x6 blocks from A e(phi_i^a) : e(phi_j^b) with phi_i^a the vector
  // basis function carrying unit component a at vertex i.
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    Mat2 strain[6];
    for (int i = 0; i < 3; ++i) {
      strain[2 * i] = sym(Mat2::outer({1.0, 0.0}, g.grad[i]));
      strain[2 * i + 1] = sym(Mat2::outer({0.0, 1.0}, g.grad[i]));
    }
    for (int a = 0; a < 6; ++a) {
      const Mat2 stress =
          2.0 * params.mu * strain[a] +
          params.lambda * trace(strain[a]) * Mat2::identity();
      for (int b = 0; b < 6; ++b) {
        const int gi = 2 * tri[a / 2] + (a % 2);
        const int gj = 2 * tri[b / 2] + (b % 2);
        idx.push_back({gi, gj});
        val.push_back(g.area * ddot(stress, strain[b]));
      }
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(idx), std::move(val));
}

LinearForm assemble_load(const Mesh2D& mesh,
                         const std::function<Vec2(Vec2)>& f) {
  LinearForm form;
  form.values.assign(2 * mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double a = triangle_area(mesh, t);
    const Vec2 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                       mesh.vertices[tri[2]]};
    // Edge-midpoint rule; basis function value at the opposite midpoint is 0,
    // at the two adjacent midpoints 1/2.
    Vec2 fm[3];
    for (int e = 0; e < 3; ++e) fm[e] = f(0.5 * (p[(e + 1) % 3] + p[(e + 2) % 3]));
    for (int i = 0; i < 3; ++i) {
      const Vec2 contrib = (a / 3.0) * 0.5 * (fm[(i + 1) % 3] + fm[(i + 2) % 3]);
      form.values[2 * tri[i]] += contrib.x;
      form.values[2 * tri[i] + 1] += contrib.y;
    }
  }
  return form;
}

void apply_dirichlet(const Mesh2D& mesh, SparseSymMatrix& k, LinearForm& b) {
  const int n = k.dimension();
  if (n != 2 * mesh.num_vertices() ||
      b.values.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::DimensionMismatch, "dirichlet elimination size mismatch");
  std::vector<char> fixed(n, 0);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.dirichlet_vertex[v]) {
      fixed[2 * v] = 1;
      fixed[2 * v + 1] = 1;
    }
  }
  const auto& row_ptr = k.row_ptr();
  const auto& cols = k.cols();
  auto& vals = k.vals();
  for (int i = 0; i < n; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const int j = cols[p];
      if (fixed[i] || fixed[j]) vals[p] = (i == j) ? 1.0 : 0.0;
    }
    if (fixed[i]) b.values[i] = 0.0;
  }
}

CgResult solve_spd(const SparseSymMatrix& k, const std::vector<double>& b,
                   double tol, int max_iters, const std::vector<double>* x0) {
  const int n = k.dimension();
  if (max_iters <= 0) max_iters = 20 * n;
  std::vector<double> diag = k.diagonal();
  for (double& d : diag) {
    if (d <= 0.0) throw Error(ErrorCode::InvalidArgument, "non-positive diagonal");
    d = 1.0 / d;
  }

  CgResult res;
  res.x = x0 ? *x0 : std::vector<double>(n, 0.0);
  std::vector<double> r(n), z(n), p(n), kp(n);
  k.apply(res.x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rz = 0.0;
  for (int i = 0; i < n; ++i) {
    z[i] = diag[i] * r[i];
    rz += r[i] * z[i];
  }
  double rz0 = rz;
  if (rz0 == 0.0) {
    res.residual = 0.0;
    return res;
  }
  // If the initial guess is already good, rz0 can be tiny relative to b; use
  // the preconditioned norm of b as the reference instead.
  double bz = 0.0;
  for (int i = 0; i < n; ++i) bz += b[i] * diag[i] * b[i];
  if (bz > rz0) rz0 = bz;
  p = z;
  for (int it = 1; it <= max_iters; ++it) {
    k.apply(p, kp);
    double pkp = 0.0;
    for (int i = 0; i < n; ++i) pkp += p[i] * kp[i];
    const double alpha = rz / pkp;
    for (int i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * kp[i];
    }
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = diag[i] * r[i];
      rz_new += r[i] * z[i];
    }
    res.iterations = it;
    res.residual = std::sqrt(rz_new / rz0);
    if (res.residual <= tol) return res;
    const double beta = rz_new / rz;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
  }
  throw Error(ErrorCode::NoConvergence,
              "cg stalled at residual " + std::to_string(res.residual) + " after " +
                  std::to_string(max_iters) + " iterations");
}

double h1d_inner(const SparseSymMatrix& k, const VectorFieldP1& u,
                 const VectorFieldP1& v) {
  const std::vector<double> ud = to_dofs(u), vd = to_dofs(v);
  std::vector<double> ku;
  k.apply(ud, ku);
  double s = 0.0;
  for (std::size_t i = 0; i < ku.size(); ++i) s += ku[i] * vd[i];
  return s;
}

double h1d_norm(const SparseSymMatrix& k, const VectorFieldP1& u) {
  return std::sqrt(std::max(0.0, h1d_inner(k, u, u)));
}

std::vector<EdgeStress> boundary_stress(const Mesh2D& mesh,
                                        const ElasticityParams& params,
                                        const VectorFieldP1& u) {
  // Map each boundary edge to its unique adjacent triangle.
  std::map<std::pair<int, int>, int> owner;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = t;
    }
  }
  const BoundaryNormals normals = compute_normals(mesh);
  std::vector<EdgeStress> out;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.label != BoundaryLabel::Signorini) continue;
    const int t = owner.at({std::min(be.a, be.b), std::max(be.a, be.b)});
    const Mat2 stress = apply_stiffness_tensor(params, p1_gradient(mesh, u, t));
    EdgeStress s;
    s.edge_index = static_cast<int>(e);
    const Vec2 n = normals.edge_normals[e];
    s.traction = stress * n;
    s.sigma_n = dot(s.traction, n);
    s.sigma_t = s.traction - s.sigma_n * n;
    out.push_back(s);
  }
  return out;
}

std::vector<double> to_dofs(const VectorFieldP1& u) {
  std::vector<double> d(2 * u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    d[2 * i] = u.values[i].x;
    d[2 * i + 1] = u.values[i].y;
  }
  return d;
}

VectorFieldP1 from_dofs(const Mesh2D& mesh, const std::vector<double>& dofs) {
  if (dofs.size() != 2 * mesh.vertices.size())
    throw Error(ErrorCode::DimensionMismatch, "dof vector does not match mesh");
  VectorFieldP1 u = VectorFieldP1::zero(mesh);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    u.values[i] = {dofs[2 * i], dofs[2 * i + 1]};
  return u;
}

}  // namespace sigopt
