#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "emacfem/geometry.hpp"

namespace emacfem {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

using EdgeKey = std::pair<int, int>;  // vertex indices, first < second

inline EdgeKey make_edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

/// Conforming straight-edged triangulation with tagged boundary edges and an
/// optional x-periodic vertex identification.
///
/// Local edge e of a triangle joins local vertices e and (e + 1) % 3; the P2
/// node of that edge is local node 3 + e.
class TriMesh {
 public:
  /// Validates and builds the edge topology. Boundary edges missing from
  /// `boundary_tags` receive the tag "boundary".
  static TriMesh create(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                        std::map<EdgeKey, std::string> boundary_tags = {},
                        std::map<int, int> periodic_pairs = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }

  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  /// Global edge ids of a triangle's local edges.
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  /// Adjacent triangles of an edge; second entry is -1 on the boundary.
  const std::array<int, 2>& edge_triangles(int e) const { return edge_triangles_[e]; }
  bool is_boundary_edge(int e) const { return edge_triangles_[e][1] < 0; }
  /// Empty for interior edges.
  const std::string& edge_tag(int e) const { return edge_tags_[e]; }
  int find_edge(int a, int b) const;

  std::vector<int> boundary_edges() const;
  std::map<EdgeKey, std::string> boundary_tag_map() const;
  std::set<std::string> boundary_tag_names() const;
  /// Vertices lying on at least one boundary edge.
  const std::vector<bool>& boundary_vertex_mask() const { return boundary_vertex_; }
  const std::vector<std::vector<int>>& vertex_triangles() const { return vertex_triangles_; }

  /// slave vertex -> master vertex.
  const std::map<int, int>& periodic_pairs() const { return periodic_pairs_; }
  bool is_periodic() const { return !periodic_pairs_.empty(); }

  double signed_area(int t) const;
  Point barycenter(int t) const;
  double total_area() const;

 private:
  TriMesh() = default;
  void build_topology(const std::map<EdgeKey, std::string>& boundary_tags);
  void validate() const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 2>> edge_triangles_;
  std::vector<std::string> edge_tags_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::vector<int>> vertex_triangles_;
  std::map<EdgeKey, int> edge_index_;
  std::map<int, int> periodic_pairs_;
};

/// n x n quad grid on `domain`, each quad split along its lower-left to
/// upper-right diagonal. Boundary tags: bottom, right, top, left. With
/// `periodic_x` the right column of vertices is paired to the left column.
TriMesh build_structured_square(int n, const Rect& domain = {}, bool periodic_x = false);

/// Reads Gmsh MSH 2.2 ASCII (3-node triangles, 2-node lines, 1-node points).
/// Line elements carry boundary tags taken from $PhysicalNames when present,
/// otherwise the physical id as text.
TriMesh import_gmsh(const std::filesystem::path& path);

/// Plain-text dump used for fixtures: vertices, triangles, tagged edges,
/// periodic pairs.
void write_mesh_dump(const TriMesh& mesh, const std::filesystem::path& path);
TriMesh read_mesh_dump(const std::filesystem::path& path);

/// Dispatches on content: Gmsh files start with $MeshFormat.
TriMesh load_mesh(const std::filesystem::path& path);

/// Node numbering shared by all P2 objects: vertex v is node v, edge e is
/// node num_vertices + e.
inline int edge_node(const TriMesh& mesh, int e) { return mesh.num_vertices() + e; }

/// Mesh-aligned subdomain omega_h built from whole triangles.
struct SubdomainMarker {
  struct BoundaryEdge {
    int edge = -1;
    int inside_triangle = -1;
  };

  std::vector<int> element_set;  // sorted
  std::vector<int> interior_p2_nodes;  // sorted node ids (vertices and edge nodes)
  std::vector<int> interior_p1_nodes;  // sorted vertex ids
  std::vector<BoundaryEdge> boundary;  // edges of the boundary of omega_h

  bool contains_element(int t) const;
};

using RegionPredicate = std::function<bool(const Point&)>;

/// Selects the triangles whose barycenter satisfies `region`. Throws
/// InvalidRegion if the selection is empty, touches the domain boundary, is
/// or is not edge-connected.
SubdomainMarker mark_subdomain(const TriMesh& mesh, const RegionPredicate& region);

}  // namespace emacfem
