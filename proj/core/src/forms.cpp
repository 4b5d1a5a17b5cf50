#include "emacfem/forms.hpp"

#include "emacfem/errors.hpp"

namespace emacfem {

std::string to_string(NonlinearForm form) {
  switch (form) {
    case NonlinearForm::EMAC:
      return "EMAC";
    case NonlinearForm::CONV:
      return "CONV";
    case NonlinearForm::SKEW:
      return "SKEW";
    case NonlinearForm::ROT:
      return "ROT";
    case NonlinearForm::CONS:
      return "CONS";
  }
  throw InvalidArgument("unknown nonlinear form");
}

NonlinearForm parse_nonlinear_form(std::string_view name) {
  if (name == "EMAC") return NonlinearForm::EMAC;
  if (name == "CONV") return NonlinearForm::CONV;
  if (name == "SKEW") return NonlinearForm::SKEW;
  if (name == "ROT") return NonlinearForm::ROT;
  if (name == "CONS") return NonlinearForm::CONS;
  throw InvalidArgument("unknown nonlinear form '" + std::string(name) + "'");
}

namespace {

const QuadratureRule& form_rule() { return rule(kDefaultQuadratureDegree); }

/// Physical basis gradients of one element at every quadrature point.
struct ElementBasis {
  ElementGeometry geo;
  std::vector<std::array<Vec2, 6>> grads;

  ElementBasis(const TriMesh& mesh, int t, const BasisTable& table) : geo(element_geometry(mesh, t)) {
    grads.resize(table.at.size());
    for (std::size_t k = 0; k < table.at.size(); ++k) {
      for (int a = 0; a < table.count; ++a) grads[k][a] = geo.physical_gradient(table.at[k].gradients[a]);
    }
  }
};

void require_vector(const DofMap& map, const char* what) {
  if (map.kind() != SpaceKind::P2Vector) throw InvalidArgument(std::string(what) + " needs a P2-vector space");
}

Vec2 mat_vec(const Mat2& m, const Vec2& v) { return emacfem::apply(m, v); }

}  // namespace

InertiaDensity inertia_density(NonlinearForm form, const Vec2& u, const Mat2& g) {
  InertiaDensity d;
  const double div = trace(g);
  switch (form) {
    case NonlinearForm::EMAC: {
      const Vec2 du = mat_vec(symmetric_part(g), u);
      d.g = {2.0 * du[0] + div * u[0], 2.0 * du[1] + div * u[1]};
      break;
    }
    case NonlinearForm::CONV:
      d.g = mat_vec(g, u);
      break;
    case NonlinearForm::SKEW: {
      const Vec2 c = mat_vec(g, u);
      d.g = {c[0] + 0.5 * div * u[0], c[1] + 0.5 * div * u[1]};
      break;
    }
    case NonlinearForm::ROT: {
      const double w = g[1][0] - g[0][1];
      d.g = {-w * u[1], w * u[0]};
      break;
    }
    case NonlinearForm::CONS:
      d.t = {Vec2{-u[0] * u[0], -u[0] * u[1]}, Vec2{-u[1] * u[0], -u[1] * u[1]}};
      break;
  }
  return d;
}

InertiaDensity inertia_density_derivative(NonlinearForm form, const Vec2& u, const Mat2& g,
                                          const Vec2& w, const Mat2& gw) {
  InertiaDensity d;
  const double div = trace(g);
  const double divw = trace(gw);
  switch (form) {
    case NonlinearForm::EMAC: {
      const Vec2 a = mat_vec(symmetric_part(gw), u);
      const Vec2 b = mat_vec(symmetric_part(g), w);
      for (int i = 0; i < 2; ++i) d.g[i] = 2.0 * (a[i] + b[i]) + divw * u[i] + div * w[i];
      break;
    }
    case NonlinearForm::CONV: {
      const Vec2 a = mat_vec(gw, u);
      const Vec2 b = mat_vec(g, w);
      d.g = {a[0] + b[0], a[1] + b[1]};
      break;
    }
    case NonlinearForm::SKEW: {
      const Vec2 a = mat_vec(gw, u);
      const Vec2 b = mat_vec(g, w);
      for (int i = 0; i < 2; ++i) d.g[i] = a[i] + b[i] + 0.5 * (divw * u[i] + div * w[i]);
      break;
    }
    case NonlinearForm::ROT: {
      const double om = g[1][0] - g[0][1];
      const double dom = gw[1][0] - gw[0][1];
      d.g = {-dom * u[1] - om * w[1], dom * u[0] + om * w[0]};
      break;
    }
    case NonlinearForm::CONS:
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) d.t[i][j] = -(w[i] * u[j] + u[i] * w[j]);
      }
      break;
  }
  return d;
}

void add_mass(std::vector<Triplet>& out, const DofMap& map, double scale, BlockOffset at) {
  const auto& q = form_rule();
  const BasisTable table(map.degree(), q);
  const int npe = map.nodes_per_element();
  const TriMesh& mesh = map.mesh();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double det = element_geometry(mesh, t).det;
    const auto dofs = map.element_dofs(t);
    std::array<std::array<double, 6>, 6> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * det * scale;
      const auto& n = table.at[k].values;
      for (int a = 0; a < npe; ++a) {
        for (int b = 0; b < npe; ++b) local[a][b] += w * n[a] * n[b];
      }
    }
    for (int c = 0; c < map.components(); ++c) {
      for (int a = 0; a < npe; ++a) {
        for (int b = 0; b < npe; ++b) {
          out.push_back({at.row + dofs[c * npe + a], at.col + dofs[c * npe + b], local[a][b]});
        }
      }
    }
  }
}

void add_viscous(std::vector<Triplet>& out, const DofMap& vel, double nu, BlockOffset at) {
  require_vector(vel, "viscous form");
  const auto& q = form_rule();
  const BasisTable table(2, q);
  const TriMesh& mesh = vel.mesh();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementBasis eb(mesh, t, table);
    const auto dofs = vel.element_dofs(t);
    std::array<std::array<double, 12>, 12> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * eb.geo.det * nu;
      const auto& g = eb.grads[k];
      // 2 nu D(N_b e_e) : D(N_a e_c) = nu (delta_ce grad N_a . grad N_b + dN_a/dx_e dN_b/dx_c)
      for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 6; ++a) {
          for (int e = 0; e < 2; ++e) {
            for (int b = 0; b < 6; ++b) {
              double v = g[a][e] * g[b][c];
              if (c == e) v += dot(g[a], g[b]);
              local[c * 6 + a][e * 6 + b] += w * v;
            }
          }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) out.push_back({at.row + dofs[i], at.col + dofs[j], local[i][j]});
    }
  }
}

namespace {

/// local[q][v] = (div phi_v, psi_q) over one element.
template <class Emit>
void divergence_blocks(const DofMap& vel, const DofMap& pres, Emit&& emit) {
  require_vector(vel, "divergence form");
  if (pres.kind() != SpaceKind::P1Scalar) throw InvalidArgument("divergence form needs a P1 pressure space");
  const auto& q = form_rule();
  const BasisTable v_table(2, q);
  const BasisTable p_table(1, q);
  const TriMesh& mesh = vel.mesh();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementBasis eb(mesh, t, v_table);
    std::array<std::array<double, 12>, 3> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * eb.geo.det;
      const auto& psi = p_table.at[k].values;
      for (int p = 0; p < 3; ++p) {
        for (int e = 0; e < 2; ++e) {
          for (int b = 0; b < 6; ++b) local[p][e * 6 + b] += w * psi[p] * eb.grads[k][b][e];
        }
      }
    }
    emit(vel.element_dofs(t), pres.element_dofs(t), local);
  }
}

}  // namespace

void add_divergence(std::vector<Triplet>& out, const DofMap& vel, const DofMap& pres, double scale,
                    BlockOffset at) {
  divergence_blocks(vel, pres, [&](const auto& vd, const auto& pd, const auto& local) {
    for (int p = 0; p < 3; ++p) {
      for (int j = 0; j < 12; ++j) out.push_back({at.row + pd[p], at.col + vd[j], scale * local[p][j]});
    }
  });
}

void add_divergence_transpose(std::vector<Triplet>& out, const DofMap& vel, const DofMap& pres,
                              double scale, BlockOffset at) {
  divergence_blocks(vel, pres, [&](const auto& vd, const auto& pd, const auto& local) {
    for (int j = 0; j < 12; ++j) {
      for (int p = 0; p < 3; ++p) out.push_back({at.row + vd[j], at.col + pd[p], scale * local[p][j]});
    }
  });
}

std::vector<double> nonlinear_residual(NonlinearForm form, const FemField& u) {
  const DofMap& vel = u.dofs();
  require_vector(vel, "nonlinear residual");
  const auto& q = form_rule();
  const BasisTable table(2, q);
  const TriMesh& mesh = vel.mesh();
  std::vector<double> r(vel.n_dofs(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementBasis eb(mesh, t, table);
    const auto dofs = vel.element_dofs(t);
    const auto coef = gather(u, t);
    std::array<double, 12> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * eb.geo.det;
      const auto s = eval_local(2, 6, coef, table.at[k], eb.grads[k]);
      const auto d = inertia_density(form, s.value, s.gradient);
      const auto& n = table.at[k].values;
      for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 6; ++a) {
          local[c * 6 + a] += w * (d.g[c] * n[a] + dot(d.t[c], eb.grads[k][a]));
        }
      }
    }
    for (int i = 0; i < 12; ++i) r[dofs[i]] += local[i];
  }
  return r;
}

void add_nonlinear_jacobian(std::vector<Triplet>& out, NonlinearForm form, const FemField& u,
                            BlockOffset at) {
  const DofMap& vel = u.dofs();
  require_vector(vel, "nonlinear Jacobian");
  const auto& q = form_rule();
  const BasisTable table(2, q);
  const TriMesh& mesh = vel.mesh();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementBasis eb(mesh, t, table);
    const auto dofs = vel.element_dofs(t);
    const auto coef = gather(u, t);
    std::array<std::array<double, 12>, 12> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * eb.geo.det;
      const auto s = eval_local(2, 6, coef, table.at[k], eb.grads[k]);
      const auto& n = table.at[k].values;
      const auto& g = eb.grads[k];
      for (int e = 0; e < 2; ++e) {
        for (int b = 0; b < 6; ++b) {
          Vec2 dir{};
          Mat2 gdir{};
          dir[e] = n[b];
          gdir[e] = g[b];
          const auto d = inertia_density_derivative(form, s.value, s.gradient, dir, gdir);
          for (int c = 0; c < 2; ++c) {
            for (int a = 0; a < 6; ++a) {
              local[c * 6 + a][e * 6 + b] += w * (d.g[c] * n[a] + dot(d.t[c], g[a]));
            }
          }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) out.push_back({at.row + dofs[i], at.col + dofs[j], local[i][j]});
    }
  }
}

void add_transport(std::vector<Triplet>& out, const FemField& u, const DofMap& scalar, double scale,
                   BlockOffset at) {
  require_vector(u.dofs(), "transport form velocity");
  if (scalar.components() != 1) throw InvalidArgument("transport form needs a scalar space");
  const auto& q = form_rule();
  const BasisTable v_table(2, q);
  const BasisTable s_table(scalar.degree(), q);
  const TriMesh& mesh = scalar.mesh();
  const int npe = scalar.nodes_per_element();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementBasis vb(mesh, t, v_table);
    const ElementBasis sb(mesh, t, s_table);
    const auto coef = gather(u, t);
    const auto dofs = scalar.element_dofs(t);
    std::array<std::array<double, 6>, 6> local{};
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vb.geo.det * scale;
      const auto s = eval_local(2, 6, coef, v_table.at[k], vb.grads[k]);
      const auto& n = s_table.at[k].values;
      for (int b = 0; b < npe; ++b) {
        const double adv = dot(s.value, sb.grads[k][b]);
        for (int a = 0; a < npe; ++a) local[a][b] += w * adv * n[a];
      }
    }
    for (int a = 0; a < npe; ++a) {
      for (int b = 0; b < npe; ++b) out.push_back({at.row + dofs[a], at.col + dofs[b], local[a][b]});
    }
  }
}

SparseMatrix assemble_mass(const DofMap& map) {
  std::vector<Triplet> trip;
  add_mass(trip, map, 1.0);
  return SparseMatrix::from_triplets(map.n_dofs(), map.n_dofs(), trip);
}

SparseMatrix assemble_viscous(const DofMap& vel, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("viscosity must be positive");
  std::vector<Triplet> trip;
  add_viscous(trip, vel, nu);
  return SparseMatrix::from_triplets(vel.n_dofs(), vel.n_dofs(), trip);
}

SparseMatrix assemble_divergence(const DofMap& vel, const DofMap& pres) {
  std::vector<Triplet> trip;
  add_divergence(trip, vel, pres, 1.0);
  return SparseMatrix::from_triplets(pres.n_dofs(), vel.n_dofs(), trip);
}

SparseMatrix assemble_transport(const FemField& u, const DofMap& scalar) {
  std::vector<Triplet> trip;
  add_transport(trip, u, scalar, 1.0);
  return SparseMatrix::from_triplets(scalar.n_dofs(), scalar.n_dofs(), trip);
}

SparseMatrix nonlinear_jacobian(NonlinearForm form, const FemField& u) {
  std::vector<Triplet> trip;
  add_nonlinear_jacobian(trip, form, u);
  return SparseMatrix::from_triplets(u.size(), u.size(), trip);
}

std::vector<double> assemble_load(const DofMap& vel, const std::function<Vec2(const Point&)>& f) {
  require_vector(vel, "load vector");
  const auto& q = form_rule();
  const BasisTable table(2, q);
  const TriMesh& mesh = vel.mesh();
  std::vector<double> out(vel.n_dofs(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = element_geometry(mesh, t);
    const auto dofs = vel.element_dofs(t);
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * geo.det;
      const Vec2 fv = f(geo.map(q.points[k]));
      for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 6; ++a) out[dofs[c * 6 + a]] += w * fv[c] * table.at[k].values[a];
      }
    }
  }
  return out;
}

}  // namespace emacfem
