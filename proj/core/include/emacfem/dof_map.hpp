#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "emacfem/mesh.hpp"

namespace emacfem {

enum class SpaceKind { P1Scalar, P2Scalar, P2Vector };

const char* to_string(SpaceKind kind);

/// Prescribed boundary value of one component at a point and time.
using BoundaryFunction = std::function<double(const Point&, double t, int component)>;
/// Boundary tag -> prescribed value.
using DirichletSpec = std::map<std::string, BoundaryFunction>;

/// Degree-of-freedom numbering for continuous P1/P2 spaces on a TriMesh.
///
/// Nodes follow the mesh node numbering (vertices, then edges for P2). Periodic
/// slave nodes share the dof of their master. Vector spaces interleave
/// components: dof = 2 * scalar_dof + component.
class DofMap {
 public:
  DofMap(std::shared_ptr<const TriMesh> mesh, SpaceKind kind, const DirichletSpec& dirichlet);

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  SpaceKind kind() const { return kind_; }
  int degree() const { return kind_ == SpaceKind::P1Scalar ? 1 : 2; }
  int components() const { return kind_ == SpaceKind::P2Vector ? 2 : 1; }
  int nodes_per_element() const { return degree() == 1 ? 3 : 6; }
  int dofs_per_element() const { return nodes_per_element() * components(); }

  int num_nodes() const { return static_cast<int>(node_scalar_dof_.size()); }
  int num_scalar_dofs() const { return num_scalar_dofs_; }
  int n_dofs() const { return num_scalar_dofs_ * components(); }

  int master_node(int node) const { return master_node_[node]; }
  Point node_point(int node) const;
  int scalar_dof(int node) const { return node_scalar_dof_[node]; }
  int dof(int node, int component = 0) const {
    return node_scalar_dof_[node] * components() + component;
  }
  int component_of(int dof) const { return dof % components(); }
  /// Representative (master) node of a scalar dof.
  int dof_node(int scalar) const { return scalar_dof_node_[scalar]; }

  /// Mesh node ids of the element's local nodes (3 or 6 valid entries).
  std::array<int, 6> element_nodes(int t) const;
  /// Local index = component * nodes_per_element + local node.
  std::array<int, 12> element_dofs(int t) const;

  bool is_dirichlet(int dof) const { return dirichlet_index_[dof] >= 0; }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }
  double dirichlet_value(int dof, double t) const;
  /// Tags this map was constrained on.
  const std::vector<std::string>& dirichlet_tags() const { return dirichlet_tags_; }

 private:
  struct Constraint {
    BoundaryFunction fn;
    Point where;
    int component;
  };

  std::shared_ptr<const TriMesh> mesh_;
  SpaceKind kind_;
  int num_scalar_dofs_ = 0;
  std::vector<int> master_node_;
  std::vector<int> node_scalar_dof_;
  std::vector<int> scalar_dof_node_;
  std::vector<int> dirichlet_index_;
  std::vector<int> dirichlet_dofs_;
  std::vector<Constraint> constraints_;
  std::vector<std::string> dirichlet_tags_;
};

/// Throws ConfigError when `dirichlet` names a tag the mesh does not have.
std::shared_ptr<const DofMap> build_dof_map(std::shared_ptr<const TriMesh> mesh, SpaceKind kind,
                                            const DirichletSpec& dirichlet = {});

/// Zero value on the given tags, for homogeneous constraints.
DirichletSpec homogeneous_dirichlet(const std::vector<std::string>& tags);

}  // namespace emacfem
