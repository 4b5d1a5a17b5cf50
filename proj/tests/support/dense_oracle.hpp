#pragma once

// Dense reference assembly built on the barycentric polynomial algebra in
// bpoly.hpp. Element loops, node lookup and integration are all independent of
// the library's assembly, basis and quadrature code.

#include <functional>
#include <random>
#include <vector>

#include "bpoly.hpp"
#include "emacfem/field.hpp"
#include "emacfem/forms.hpp"
#include "emacfem/mesh.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;
using emacfem::DofMap;
using emacfem::FemField;
using emacfem::NonlinearForm;
using emacfem::TriMesh;

inline Dense zeros(int r, int c) { return Dense(r, std::vector<double>(c, 0.0)); }

inline Tri tri_of(const TriMesh& mesh, int t) {
  const auto& v = mesh.triangle(t);
  return Tri({mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])});
}

/// Mesh node ids of the 6 P2 nodes (or 3 P1 nodes) of triangle t.
inline std::vector<int> nodes_of(const TriMesh& mesh, int t, int degree) {
  const auto& v = mesh.triangle(t);
  std::vector<int> n{v[0], v[1], v[2]};
  if (degree == 2) {
    for (int e = 0; e < 3; ++e) n.push_back(mesh.num_vertices() + mesh.find_edge(v[e], v[(e + 1) % 3]));
  }
  return n;
}

/// Trial/test functions of one element: (global dof, component, polynomial).
struct LocalFn {
  int dof;
  int comp;
  BPoly poly;
};

inline std::vector<LocalFn> local_functions(const DofMap& map, int t) {
  std::vector<LocalFn> out;
  const auto nodes = nodes_of(map.mesh(), t, map.degree());
  for (int c = 0; c < map.components(); ++c) {
    for (std::size_t a = 0; a < nodes.size(); ++a) out.push_back({map.dof(nodes[a], c), c, basis(map.degree(), static_cast<int>(a))});
  }
  return out;
}

/// Restriction of a field to one element, one polynomial per component.
inline std::array<BPoly, 2> field_poly(const FemField& f, int t) {
  std::array<BPoly, 2> out;
  for (const auto& fn : local_functions(f.dofs(), t)) out[fn.comp] += fn.poly * f.coeffs[fn.dof];
  return out;
}

using Grad = std::array<std::array<BPoly, 2>, 2>;  // g[i][j] = d u_i / d x_j

inline Grad grad_of(const Tri& tri, const std::array<BPoly, 2>& u) {
  Grad g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g[i][j] = tri.d(u[i], j);
  return g;
}

inline std::array<BPoly, 2> unit_vector_poly(const BPoly& p, int comp) {
  std::array<BPoly, 2> v;
  v[comp] = p;
  return v;
}

inline Dense mass(const DofMap& map) {
  Dense m = zeros(map.n_dofs(), map.n_dofs());
  for (int t = 0; t < map.mesh().num_triangles(); ++t) {
    const Tri tri = tri_of(map.mesh(), t);
    const auto fns = local_functions(map, t);
    for (const auto& a : fns)
      for (const auto& b : fns)
        if (a.comp == b.comp) m[a.dof][b.dof] += tri.integrate(a.poly * b.poly);
  }
  return m;
}

inline Dense viscous(const DofMap& map, double nu) {
  Dense m = zeros(map.n_dofs(), map.n_dofs());
  for (int t = 0; t < map.mesh().num_triangles(); ++t) {
    const Tri tri = tri_of(map.mesh(), t);
    const auto fns = local_functions(map, t);
    for (const auto& a : fns) {
      const Grad ga = grad_of(tri, unit_vector_poly(a.poly, a.comp));
      for (const auto& b : fns) {
        const Grad gb = grad_of(tri, unit_vector_poly(b.poly, b.comp));
        BPoly s;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) s += (0.5 * (ga[i][j] + ga[j][i])) * (0.5 * (gb[i][j] + gb[j][i]));
        m[a.dof][b.dof] += 2.0 * nu * tri.integrate(s);
      }
    }
  }
  return m;
}

inline Dense divergence(const DofMap& vel, const DofMap& pres) {
  Dense m = zeros(pres.n_dofs(), vel.n_dofs());
  for (int t = 0; t < vel.mesh().num_triangles(); ++t) {
    const Tri tri = tri_of(vel.mesh(), t);
    for (const auto& q : local_functions(pres, t))
      for (const auto& v : local_functions(vel, t)) m[q.dof][v.dof] += tri.integrate(tri.d(v.poly, v.comp) * q.poly);
  }
  return m;
}

inline Dense transport(const FemField& u, const DofMap& scalar) {
  Dense m = zeros(scalar.n_dofs(), scalar.n_dofs());
  for (int t = 0; t < scalar.mesh().num_triangles(); ++t) {
    const Tri tri = tri_of(scalar.mesh(), t);
    const auto up = field_poly(u, t);
    const auto fns = local_functions(scalar, t);
    for (const auto& v : fns)
      for (const auto& w : fns) {
        const BPoly adv = up[0] * tri.d(w.poly, 0) + up[1] * tri.d(w.poly, 1);
        m[v.dof][w.dof] += tri.integrate(adv * v.poly);
      }
  }
  return m;
}

/// Residual density of each form: value part g and flux part T (tested with grad v).
struct Density {
  std::array<BPoly, 2> g;
  std::array<std::array<BPoly, 2>, 2> t;
};

inline Density density(NonlinearForm form, const Tri& tri, const std::array<BPoly, 2>& u) {
  const Grad gu = grad_of(tri, u);
  const BPoly div = gu[0][0] + gu[1][1];
  Density d;
  for (int i = 0; i < 2; ++i) {
    const BPoly conv = u[0] * gu[i][0] + u[1] * gu[i][1];
    switch (form) {
      case NonlinearForm::EMAC: {
        BPoly du;
        for (int j = 0; j < 2; ++j) du += (0.5 * (gu[i][j] + gu[j][i])) * u[j];
        d.g[i] = 2.0 * du + div * u[i];
        break;
      }
      case NonlinearForm::CONV: d.g[i] = conv; break;
      case NonlinearForm::SKEW: d.g[i] = conv + 0.5 * (div * u[i]); break;
      case NonlinearForm::ROT: {
        const BPoly w = gu[1][0] - gu[0][1];
        d.g[i] = i == 0 ? (-1.0) * (w * u[1]) : w * u[0];
        break;
      }
      case NonlinearForm::CONS:
        for (int j = 0; j < 2; ++j) d.t[i][j] = (-1.0) * (u[i] * u[j]);
        break;
    }
  }
  return d;
}

inline std::vector<double> residual(NonlinearForm form, const FemField& u) {
  std::vector<double> r(u.coeffs.size(), 0.0);
  for (int t = 0; t < u.dofs().mesh().num_triangles(); ++t) {
    const Tri tri = tri_of(u.dofs().mesh(), t);
    const Density d = density(form, tri, field_poly(u, t));
    for (const auto& v : local_functions(u.dofs(), t)) {
      BPoly s = d.g[v.comp] * v.poly;
      for (int j = 0; j < 2; ++j) s += d.t[v.comp][j] * tri.d(v.poly, j);
      r[v.dof] += tri.integrate(s);
    }
  }
  return r;
}

inline double max_abs_diff(const Dense& a, const emacfem::SparseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b.at(static_cast<int>(i), static_cast<int>(j))));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline FemField random_field(std::shared_ptr<const DofMap> map, std::mt19937& gen, bool zero_dirichlet = true) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  FemField f = FemField::zeros(map);
  for (int d = 0; d < map->n_dofs(); ++d) f.coeffs[d] = (zero_dirichlet && map->is_dirichlet(d)) ? 0.0 : val(gen);
  return f;
}

/// Structured n x n mesh with interior vertices jittered.
inline std::shared_ptr<TriMesh> jittered_square(int n, unsigned seed, emacfem::Rect box = {}) {
  const auto base = emacfem::build_structured_square(n, box);
  std::mt19937 gen(seed);
  const double h = (box.x1 - box.x0) / n;
  std::uniform_real_distribution<double> jit(-0.2 * h, 0.2 * h);
  auto v = base.vertices();
  for (int i = 0; i < base.num_vertices(); ++i) {
    if (base.boundary_vertex_mask()[i]) continue;
    v[i].x += jit(gen);
    v[i].y += jit(gen);
  }
  return std::make_shared<TriMesh>(TriMesh::create(v, base.triangles(), base.boundary_tag_map()));
}

}  // namespace oracle
