#include "emacfem/field.hpp"

#include "emacfem/errors.hpp"

namespace emacfem {

FemField FemField::zeros(std::shared_ptr<const DofMap> map) {
  FemField f;
  f.coeffs.assign(map->n_dofs(), 0.0);
  f.map = std::move(map);
  return f;
}

FemField FemField::interpolate(std::shared_ptr<const DofMap> map,
                               const std::function<Vec2(const Point&)>& fn) {
  FemField f = zeros(std::move(map));
  const DofMap& m = *f.map;
  for (int s = 0; s < m.num_scalar_dofs(); ++s) {
    const int node = m.dof_node(s);
    const Vec2 v = fn(m.node_point(node));
    for (int c = 0; c < m.components(); ++c) f.coeffs[m.dof(node, c)] = v[c];
  }
  return f;
}

FemField FemField::interpolate_scalar(std::shared_ptr<const DofMap> map,
                                      const std::function<double(const Point&)>& fn) {
  if (map->components() != 1) throw InvalidArgument("interpolate_scalar needs a scalar space");
  return interpolate(std::move(map), [&](const Point& p) { return Vec2{fn(p), 0.0}; });
}

std::array<double, 12> gather(const FemField& field, int element) {
  const auto dofs = field.map->element_dofs(element);
  std::array<double, 12> local{};
  const int n = field.map->dofs_per_element();
  for (int i = 0; i < n; ++i) local[i] = field.coeffs[dofs[i]];
  return local;
}

FieldSample eval_local(int components, int nodes, const std::array<double, 12>& local,
                       const BasisValues& basis, const std::array<Vec2, 6>& grads) {
  FieldSample s;
  s.components = components;
  for (int c = 0; c < components; ++c) {
    double v = 0.0, gx = 0.0, gy = 0.0;
    for (int a = 0; a < nodes; ++a) {
      const double coef = local[c * nodes + a];
      v += coef * basis.values[a];
      gx += coef * grads[a][0];
      gy += coef * grads[a][1];
    }
    s.value[c] = v;
    s.gradient[c] = {gx, gy};
  }
  return s;
}

FieldSample eval_field(const FemField& field, int element, const Barycentric& point) {
  const DofMap& m = *field.map;
  const auto geo = element_geometry(m.mesh(), element);
  const auto basis = eval_basis(m.degree(), point);
  std::array<Vec2, 6> grads{};
  for (int a = 0; a < basis.count; ++a) grads[a] = geo.physical_gradient(basis.gradients[a]);
  return eval_local(m.components(), m.nodes_per_element(), gather(field, element), basis, grads);
}

void apply_dirichlet(FemField& field, double t) {
  for (int d : field.map->dirichlet_dofs()) field.coeffs[d] = field.map->dirichlet_value(d, t);
}

double integrate(const FemField& field) {
  const DofMap& m = *field.map;
  const auto& q = rule(kDefaultQuadratureDegree);
  const BasisTable table(m.degree(), q);
  double sum = 0.0;
  for (int t = 0; t < m.mesh().num_triangles(); ++t) {
    const auto local = gather(field, t);
    const double det = element_geometry(m.mesh(), t).det;
    for (int k = 0; k < q.size(); ++k) {
      double v = 0.0;
      for (int a = 0; a < table.count; ++a) v += local[a] * table.at[k].values[a];
      sum += q.weights[k] * det * v;
    }
  }
  return sum;
}

}  // namespace emacfem
