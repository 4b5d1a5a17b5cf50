#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "emacfem/dof_map.hpp"
#include "emacfem/errors.hpp"
#include "emacfem/mesh.hpp"
#include "test_paths.hpp"

using namespace emacfem;

TEST_CASE("structured square combinatorics") {
  const auto m = build_structured_square(2);
  CHECK(m.num_vertices() == 9);
  CHECK(m.num_triangles() == 8);
  CHECK(m.boundary_edges().size() == 8);
  CHECK(m.num_edges() == 16);
  for (int t = 0; t < m.num_triangles(); ++t) CHECK(m.signed_area(t) > 0.0);

  const auto big = build_structured_square(128);
  CHECK(big.num_vertices() == 129 * 129);
  CHECK(big.num_vertices() == 16641);
  CHECK(big.num_triangles() == 32768);
  CHECK(std::abs(big.total_area() - 1.0) <= 1e-13);
}

TEST_CASE("structured square tags and diagonal") {
  const auto m = build_structured_square(3, {-0.5, 0.5, -0.5, 0.5});
  std::map<std::string, int> counts;
  for (int e : m.boundary_edges()) ++counts[m.edge_tag(e)];
  CHECK(counts["bottom"] == 3);
  CHECK(counts["right"] == 3);
  CHECK(counts["top"] == 3);
  CHECK(counts["left"] == 3);
  // every diagonal runs from lower-left to upper-right
  int diagonals = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& ed = m.edge(e);
    const Point a = m.vertex(ed[0]);
    const Point b = m.vertex(ed[1]);
    if (std::abs(a.x - b.x) > 1e-12 && std::abs(a.y - b.y) > 1e-12) {
      ++diagonals;
      CHECK((b.x - a.x) * (b.y - a.y) > 0.0);
    }
  }
  CHECK(diagonals == 9);
  CHECK(std::abs(m.total_area() - 1.0) <= 1e-13);
}

TEST_CASE("periodic pairing") {
  const auto m = build_structured_square(2, {}, true);
  CHECK(m.periodic_pairs().size() == 3);
  for (const auto& [slave, master] : m.periodic_pairs()) {
    CHECK(m.vertex(slave).x == doctest::Approx(1.0));
    CHECK(m.vertex(master).x == doctest::Approx(0.0));
    CHECK(m.vertex(slave).y == m.vertex(master).y);
  }
}

TEST_CASE("structured square argument errors") {
  CHECK_THROWS_AS(build_structured_square(1), InvalidArgument);
  CHECK_THROWS_AS(build_structured_square(4, {0.0, 0.0, 0.0, 1.0}), InvalidArgument);
}

TEST_CASE("create validates orientation and conformity") {
  std::vector<Point> v{{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(TriMesh::create(v, {{0, 2, 1}}), ValidationError);
  CHECK_NOTHROW(TriMesh::create(v, {{0, 1, 2}}));
  // an edge shared by three triangles
  std::vector<Point> w{{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {0.5, 0.5}};
  CHECK_THROWS_AS(TriMesh::create(w, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}), ValidationError);
  // tag on an interior edge
  std::vector<Point> q{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(TriMesh::create(q, {{0, 1, 2}, {0, 2, 3}}, {{make_edge_key(0, 2), "x"}}), ValidationError);
}

TEST_CASE("untagged boundary edges get the default tag") {
  std::vector<Point> q{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto m = TriMesh::create(q, {{0, 1, 2}, {0, 2, 3}}, {{make_edge_key(0, 1), "floor"}});
  const auto names = m.boundary_tag_names();
  CHECK(names == std::set<std::string>{"boundary", "floor"});
}

TEST_CASE("gmsh import") {
  const auto m = import_gmsh(test_data("two_triangles.msh"));
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.boundary_edges().size() == 4);
  for (int e : m.boundary_edges()) CHECK(m.edge_tag(e) == "wall");
  CHECK_THROWS_AS(import_gmsh(test_data("quad.msh")), FormatError);
  CHECK_THROWS_AS(import_gmsh(test_data("hanging_node.msh")), ValidationError);
  CHECK_THROWS_AS(import_gmsh(test_data("does_not_exist.msh")), FormatError);
}

TEST_CASE("cylinder mesh topology") {
  const auto m = import_gmsh(mesh_data("cylinder_coarse.msh"));
  const auto names = m.boundary_tag_names();
  CHECK(names == std::set<std::string>{"cylinder", "inflow", "outflow", "walls"});
  // annulus: V - E + F = 0
  CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 0);
  const double area = 2.2 * 0.41 - std::acos(-1.0) * 0.05 * 0.05;
  // polygonal cylinder with 30 sides
  const double polygon = 2.2 * 0.41 - 0.5 * 30 * 0.05 * 0.05 * std::sin(2.0 * std::acos(-1.0) / 30);
  CHECK(std::abs(m.total_area() - polygon) <= 1e-12);
  CHECK(m.total_area() > area);
  const auto dofs = build_dof_map(std::make_shared<TriMesh>(m), SpaceKind::P2Vector);
  CHECK(dofs->n_dofs() > 7000);
  CHECK(dofs->n_dofs() < 11000);
}

TEST_CASE("mesh dump round trip") {
  const auto m = build_structured_square(3, {0.0, 2.0, 0.0, 1.0}, true);
  const auto path = scratch_dir("mesh") / "dump.txt";
  write_mesh_dump(m, path);
  const auto r = load_mesh(path);
  CHECK(r.num_vertices() == m.num_vertices());
  CHECK(r.triangles() == m.triangles());
  CHECK(r.boundary_tag_map() == m.boundary_tag_map());
  CHECK(r.periodic_pairs() == m.periodic_pairs());
  for (int v = 0; v < m.num_vertices(); ++v) {
    CHECK(r.vertex(v).x == m.vertex(v).x);
    CHECK(r.vertex(v).y == m.vertex(v).y);
  }
  const auto g = load_mesh(test_data("two_triangles.msh"));
  CHECK(g.num_triangles() == 2);
}

TEST_CASE("mark_subdomain selection") {
  const auto m = build_structured_square(4);
  const auto marker = mark_subdomain(m, [](const Point& p) {
    return p.x > 0.25 && p.x < 0.75 && p.y > 0.25 && p.y < 0.75;
  });
  CHECK(marker.element_set.size() == 8);
  CHECK(marker.interior_p1_nodes == std::vector<int>{12});  // vertex (0.5, 0.5)
  CHECK(marker.boundary.size() == 8);
  CHECK_THROWS_AS(mark_subdomain(m, [](const Point&) { return true; }), InvalidRegion);
  CHECK_THROWS_AS(mark_subdomain(m, [](const Point&) { return false; }), InvalidRegion);
  // two separated elements
  const auto far = [](const Point& p) {
    return (std::abs(p.x - 0.3) < 0.05 && std::abs(p.y - 0.3) < 0.1) ||
           (std::abs(p.x - 0.7) < 0.05 && std::abs(p.y - 0.7) < 0.1);
  };
  CHECK_THROWS_AS(mark_subdomain(m, far), InvalidRegion);
}

TEST_CASE("vertex patch interior nodes match an incidence enumeration") {
  const auto m = build_structured_square(6);
  const int center = 3 * 7 + 3;  // vertex (0.5, 0.5)
  const auto& patch = m.vertex_triangles()[center];
  const std::set<int> patch_set(patch.begin(), patch.end());
  const auto marker = mark_subdomain(m, [&](const Point& p) {
    for (int t : patch) {
      const Point b = m.barycenter(t);
      if (std::abs(b.x - p.x) < 1e-12 && std::abs(b.y - p.y) < 1e-12) return true;
    }
    return false;
  });
  CHECK(std::set<int>(marker.element_set.begin(), marker.element_set.end()) == patch_set);
  CHECK(marker.interior_p1_nodes == std::vector<int>{center});

  // oracle: interior P2 nodes are the centre vertex and the edges whose every
  // incident triangle lies in the patch
  std::vector<int> expected{center};
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& tr = m.edge_triangles(e);
    if (tr[1] >= 0 && patch_set.count(tr[0]) && patch_set.count(tr[1])) expected.push_back(edge_node(m, e));
  }
  std::sort(expected.begin(), expected.end());
  CHECK(marker.interior_p2_nodes == expected);
  CHECK(expected.size() == 1 + 6);

  // every P2 node of omega_h is interior or on its boundary, exactly once
  std::set<int> all_nodes, boundary_nodes;
  for (int t : marker.element_set) {
    for (int v : m.triangle(t)) all_nodes.insert(v);
    for (int e : m.triangle_edges(t)) all_nodes.insert(edge_node(m, e));
  }
  for (const auto& be : marker.boundary) {
    boundary_nodes.insert(m.edge(be.edge)[0]);
    boundary_nodes.insert(m.edge(be.edge)[1]);
    boundary_nodes.insert(edge_node(m, be.edge));
  }
  for (int n : all_nodes) {
    const bool interior = std::binary_search(marker.interior_p2_nodes.begin(), marker.interior_p2_nodes.end(), n);
    CHECK(interior != static_cast<bool>(boundary_nodes.count(n)));
  }
}

TEST_CASE("dof map counts") {
  auto m = std::make_shared<TriMesh>(build_structured_square(2));
  const auto all = homogeneous_dirichlet({"bottom", "right", "top", "left"});
  const auto p1 = build_dof_map(m, SpaceKind::P1Scalar, all);
  CHECK(p1->n_dofs() == 9);
  CHECK(p1->dirichlet_dofs().size() == 8);
  const auto p2 = build_dof_map(m, SpaceKind::P2Scalar);
  CHECK(p2->n_dofs() == 25);
  const auto v2 = build_dof_map(m, SpaceKind::P2Vector);
  CHECK(v2->n_dofs() == 50);
  for (int d = 0; d < v2->n_dofs(); ++d) CHECK(v2->component_of(d) == d % 2);
  CHECK_THROWS_AS(build_dof_map(m, SpaceKind::P2Vector, homogeneous_dirichlet({"nowhere"})), ConfigError);
}

TEST_CASE("periodic dof elimination") {
  auto m = std::make_shared<TriMesh>(build_structured_square(4, {}, true));
  const auto p2 = build_dof_map(m, SpaceKind::P2Scalar, homogeneous_dirichlet({"top", "bottom"}));
  // 5 columns of vertices become 4; the 4 right boundary edges merge with the left ones
  CHECK(p2->n_dofs() == 4 * 5 + (m->num_edges() - 4));
  for (int n = 0; n < p2->num_nodes(); ++n) {
    const int master = p2->master_node(n);
    CHECK(p2->master_node(master) == master);
    CHECK(p2->scalar_dof(n) == p2->scalar_dof(master));
    const Point a = p2->node_point(n);
    const Point b = p2->node_point(master);
    CHECK(a.y == doctest::Approx(b.y));
  }
  // corners are Dirichlet through their masters only
  for (int d : p2->dirichlet_dofs()) {
    const int node = p2->dof_node(d);
    CHECK(p2->master_node(node) == node);
  }
}
