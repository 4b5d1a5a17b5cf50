#include "emacfem/dof_map.hpp"

#include <algorithm>

#include "emacfem/errors.hpp"

namespace emacfem {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P1Scalar:
      return "P1-scalar";
    case SpaceKind::P2Scalar:
      return "P2-scalar";
    case SpaceKind::P2Vector:
      return "P2-vector";
  }
  return "?";
}

DofMap::DofMap(std::shared_ptr<const TriMesh> mesh, SpaceKind kind, const DirichletSpec& dirichlet)
    : mesh_(std::move(mesh)), kind_(kind) {
  const TriMesh& m = *mesh_;
  const int nv = m.num_vertices();
  const int nnodes = degree() == 1 ? nv : nv + m.num_edges();

  master_node_.resize(nnodes);
  for (int n = 0; n < nnodes; ++n) master_node_[n] = n;
  const auto& pairs = m.periodic_pairs();
  for (const auto& [slave, master] : pairs) master_node_[slave] = master;
  if (degree() == 2 && !pairs.empty()) {
    for (int e = 0; e < m.num_edges(); ++e) {
      const auto& ed = m.edge(e);
      auto a = pairs.find(ed[0]);
      auto b = pairs.find(ed[1]);
      if (a == pairs.end() || b == pairs.end()) continue;
      const int me = m.find_edge(a->second, b->second);
      if (me >= 0) master_node_[edge_node(m, e)] = edge_node(m, me);
    }
  }

  node_scalar_dof_.assign(nnodes, -1);
  for (int n = 0; n < nnodes; ++n) {
    if (master_node_[n] == n) {
      node_scalar_dof_[n] = num_scalar_dofs_++;
      scalar_dof_node_.push_back(n);
    }
  }
  for (int n = 0; n < nnodes; ++n) node_scalar_dof_[n] = node_scalar_dof_[master_node_[n]];

  const auto tags = m.boundary_tag_names();
  for (const auto& [tag, fn] : dirichlet) {
    if (!tags.count(tag)) throw ConfigError("Dirichlet data references unknown boundary tag '" + tag + "'");
    dirichlet_tags_.push_back(tag);
  }

  dirichlet_index_.assign(n_dofs(), -1);
  auto constrain = [&](int node, const BoundaryFunction& fn) {
    for (int c = 0; c < components(); ++c) {
      const int d = dof(node, c);
      if (dirichlet_index_[d] >= 0) continue;
      dirichlet_index_[d] = static_cast<int>(constraints_.size());
      constraints_.push_back({fn, node_point(node), c});
      dirichlet_dofs_.push_back(d);
    }
  };
  // Iterate tags in map order so shared corner nodes get a deterministic owner.
  for (const auto& [tag, fn] : dirichlet) {
    for (int e : m.boundary_edges()) {
      if (m.edge_tag(e) != tag) continue;
      constrain(m.edge(e)[0], fn);
      constrain(m.edge(e)[1], fn);
      if (degree() == 2) constrain(edge_node(m, e), fn);
    }
  }
  std::sort(dirichlet_dofs_.begin(), dirichlet_dofs_.end());
}

Point DofMap::node_point(int node) const {
  const TriMesh& m = *mesh_;
  if (node < m.num_vertices()) return m.vertex(node);
  const auto& ed = m.edge(node - m.num_vertices());
  const Point& a = m.vertex(ed[0]);
  const Point& b = m.vertex(ed[1]);
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

std::array<int, 6> DofMap::element_nodes(int t) const {
  const auto& tri = mesh_->triangle(t);
  std::array<int, 6> nodes{tri[0], tri[1], tri[2], -1, -1, -1};
  if (degree() == 2) {
    const auto& te = mesh_->triangle_edges(t);
    for (int e = 0; e < 3; ++e) nodes[3 + e] = edge_node(*mesh_, te[e]);
  }
  return nodes;
}

std::array<int, 12> DofMap::element_dofs(int t) const {
  std::array<int, 12> dofs{};
  dofs.fill(-1);
  const auto nodes = element_nodes(t);
  const int npe = nodes_per_element();
  for (int c = 0; c < components(); ++c) {
    for (int a = 0; a < npe; ++a) dofs[c * npe + a] = dof(nodes[a], c);
  }
  return dofs;
}

double DofMap::dirichlet_value(int d, double t) const {
  const int idx = dirichlet_index_[d];
  if (idx < 0) throw InvalidArgument("dof " + std::to_string(d) + " is not Dirichlet-constrained");
  const auto& c = constraints_[idx];
  return c.fn(c.where, t, c.component);
}

std::shared_ptr<const DofMap> build_dof_map(std::shared_ptr<const TriMesh> mesh, SpaceKind kind,
                                            const DirichletSpec& dirichlet) {
  return std::make_shared<const DofMap>(std::move(mesh), kind, dirichlet);
}

DirichletSpec homogeneous_dirichlet(const std::vector<std::string>& tags) {
  DirichletSpec spec;
  for (const auto& tag : tags) spec[tag] = [](const Point&, double, int) { return 0.0; };
  return spec;
}

}  // namespace emacfem
