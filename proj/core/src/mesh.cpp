#include "emacfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <queue>
#include <sstream>

#include "emacfem/errors.hpp"

namespace emacfem {

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

TriMesh TriMesh::create(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                        std::map<EdgeKey, std::string> boundary_tags,
                        std::map<int, int> periodic_pairs) {
  TriMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.periodic_pairs_ = std::move(periodic_pairs);

  const int nv = mesh.num_vertices();
  for (const auto& tri : mesh.triangles_) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw ValidationError("triangle references vertex out of range");
    }
  }
  mesh.build_topology(boundary_tags);
  mesh.validate();
  return mesh;
}

void TriMesh::build_topology(const std::map<EdgeKey, std::string>& boundary_tags) {
  const int nt = num_triangles();
  triangle_edges_.assign(nt, {-1, -1, -1});
  edge_index_.clear();
  edges_.clear();
  edge_triangles_.clear();
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int e = 0; e < 3; ++e) {
      const EdgeKey key = make_edge_key(tri[e], tri[(e + 1) % 3]);
      if (key.first == key.second) throw ValidationError("degenerate triangle " + std::to_string(t));
      auto [it, inserted] = edge_index_.emplace(key, num_edges());
      if (inserted) {
        edges_.push_back({key.first, key.second});
        edge_triangles_.push_back({t, -1});
      } else {
        auto& adj = edge_triangles_[it->second];
        if (adj[1] >= 0) {
          throw ValidationError("edge (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ") shared by more than two triangles");
        }
        adj[1] = t;
      }
      triangle_edges_[t][e] = it->second;
    }
  }

  edge_tags_.assign(num_edges(), std::string());
  boundary_vertex_.assign(num_vertices(), false);
  for (int e = 0; e < num_edges(); ++e) {
    if (is_boundary_edge(e)) {
      edge_tags_[e] = "boundary";
      boundary_vertex_[edges_[e][0]] = true;
      boundary_vertex_[edges_[e][1]] = true;
    }
  }
  for (const auto& [key, tag] : boundary_tags) {
    const EdgeKey k = make_edge_key(key.first, key.second);
    auto it = edge_index_.find(k);
    if (it == edge_index_.end() || !is_boundary_edge(it->second)) {
      throw ValidationError("tagged edge (" + std::to_string(k.first) + "," +
                            std::to_string(k.second) + ") is not a boundary edge of the mesh");
    }
    edge_tags_[it->second] = tag;
  }

  vertex_triangles_.assign(num_vertices(), {});
  for (int t = 0; t < nt; ++t) {
    for (int v : triangles_[t]) vertex_triangles_[v].push_back(t);
  }
}

void TriMesh::validate() const {
  for (int t = 0; t < num_triangles(); ++t) {
    if (!(signed_area(t) > 0.0)) {
      throw ValidationError("triangle " + std::to_string(t) + " has non-positive signed area");
    }
  }

  // A vertex lying strictly inside a boundary segment signals a hanging node.
  std::vector<int> bverts;
  for (int v = 0; v < num_vertices(); ++v) {
    if (boundary_vertex_[v]) bverts.push_back(v);
  }
  for (int e = 0; e < num_edges(); ++e) {
    if (!is_boundary_edge(e)) continue;
    const Point& a = vertices_[edges_[e][0]];
    const Point& b = vertices_[edges_[e][1]];
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    const double xmin = std::min(a.x, b.x), xmax = std::max(a.x, b.x);
    const double ymin = std::min(a.y, b.y), ymax = std::max(a.y, b.y);
    for (int v : bverts) {
      if (v == edges_[e][0] || v == edges_[e][1]) continue;
      const Point& c = vertices_[v];
      if (c.x < xmin || c.x > xmax || c.y < ymin || c.y > ymax) continue;
      if (std::abs(orient(a, b, c)) > 1e-12 * len2) continue;
      const double s = ((c.x - a.x) * (b.x - a.x) + (c.y - a.y) * (b.y - a.y)) / len2;
      if (s > 1e-12 && s < 1.0 - 1e-12) {
        throw ValidationError("non-conforming mesh: vertex " + std::to_string(v) +
                              " lies inside boundary edge " + std::to_string(e));
      }
    }
  }

  if (!periodic_pairs_.empty()) {
    double xmin = std::numeric_limits<double>::max();
    double xmax = std::numeric_limits<double>::lowest();
    for (const auto& p : vertices_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
    }
    const double period = xmax - xmin;
    for (const auto& [slave, master] : periodic_pairs_) {
      if (slave < 0 || slave >= num_vertices() || master < 0 || master >= num_vertices()) {
        throw ValidationError("periodic pair references vertex out of range");
      }
      if (periodic_pairs_.count(master)) {
        throw ValidationError("periodic master " + std::to_string(master) + " is itself a slave");
      }
      const Point& s = vertices_[slave];
      const Point& m = vertices_[master];
      if (std::abs(s.y - m.y) > 1e-12 * std::max(1.0, period) ||
          std::abs(std::abs(s.x - m.x) - period) > 1e-12 * std::max(1.0, period)) {
        throw ValidationError("periodic pair (" + std::to_string(slave) + "," +
                              std::to_string(master) + ") is not an x-translate by the period");
      }
    }
  }
}

int TriMesh::find_edge(int a, int b) const {
  auto it = edge_index_.find(make_edge_key(a, b));
  return it == edge_index_.end() ? -1 : it->second;
}

std::vector<int> TriMesh::boundary_edges() const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e) {
    if (is_boundary_edge(e)) out.push_back(e);
  }
  return out;
}

std::map<EdgeKey, std::string> TriMesh::boundary_tag_map() const {
  std::map<EdgeKey, std::string> out;
  for (int e : boundary_edges()) out[{edges_[e][0], edges_[e][1]}] = edge_tags_[e];
  return out;
}

std::set<std::string> TriMesh::boundary_tag_names() const {
  std::set<std::string> out;
  for (int e : boundary_edges()) out.insert(edge_tags_[e]);
  return out;
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  return 0.5 * orient(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Point TriMesh::barycenter(int t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += signed_area(t);
  return sum;
}

TriMesh build_structured_square(int n, const Rect& domain, bool periodic_x) {
  if (n < 2) throw InvalidArgument("structured mesh needs n >= 2, got " + std::to_string(n));
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
    throw InvalidArgument("structured mesh needs a rectangle with positive width and height");
  }
  const int np = n + 1;
  auto id = [np](int i, int j) { return j * np + i; };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j <= n; ++j) {
    // Exact end coordinates so periodic pairs and boundary data match bit-for-bit.
    const double y = j == n ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * j / n;
    for (int i = 0; i <= n; ++i) {
      const double x = i == n ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * i / n;
      vertices.push_back({x, y});
    }
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  std::map<EdgeKey, std::string> tags;
  for (int i = 0; i < n; ++i) {
    tags[make_edge_key(id(i, 0), id(i + 1, 0))] = "bottom";
    tags[make_edge_key(id(i, n), id(i + 1, n))] = "top";
  }
  for (int j = 0; j < n; ++j) {
    tags[make_edge_key(id(0, j), id(0, j + 1))] = "left";
    tags[make_edge_key(id(n, j), id(n, j + 1))] = "right";
  }

  std::map<int, int> periodic;
  if (periodic_x) {
    for (int j = 0; j <= n; ++j) periodic[id(n, j)] = id(0, j);
  }
  return TriMesh::create(std::move(vertices), std::move(triangles), std::move(tags),
                         std::move(periodic));
}

namespace {

std::string next_token_line(std::istream& in, const char* context) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw FormatError(std::string("unexpected end of file while reading ") + context);
}

void expect_line(std::istream& in, const std::string& expected) {
  const std::string line = next_token_line(in, expected.c_str());
  if (line != expected) throw FormatError("expected '" + expected + "', found '" + line + "'");
}

}  // namespace

TriMesh import_gmsh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open mesh file " + path.string());

  std::map<int, std::string> physical_names;
  std::map<long, Point> nodes;
  struct RawTriangle {
    std::array<long, 3> n;
  };
  struct RawLine {
    std::array<long, 2> n;
    int physical;
  };
  std::vector<RawTriangle> raw_triangles;
  std::vector<RawLine> raw_lines;
  bool have_format = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      std::istringstream hdr(next_token_line(in, "$MeshFormat"));
      double version = 0.0;
      int file_type = -1, data_size = 0;
      hdr >> version >> file_type >> data_size;
      if (!hdr || version < 2.2 - 1e-9 || version >= 3.0) {
        throw FormatError("only MSH format version 2.2 is supported");
      }
      if (file_type != 0) throw FormatError("only ASCII MSH files are supported");
      expect_line(in, "$EndMeshFormat");
      have_format = true;
    } else if (line == "$PhysicalNames") {
      const int count = std::stoi(next_token_line(in, "$PhysicalNames"));
      for (int i = 0; i < count; ++i) {
        std::istringstream row(next_token_line(in, "$PhysicalNames"));
        int dim = 0, tag = 0;
        std::string name;
        row >> dim >> tag;
        std::getline(row >> std::ws, name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') {
          name = name.substr(1, name.size() - 2);
        }
        physical_names[tag] = name;
      }
      expect_line(in, "$EndPhysicalNames");
    } else if (line == "$Nodes") {
      const long count = std::stol(next_token_line(in, "$Nodes"));
      for (long i = 0; i < count; ++i) {
        std::istringstream row(next_token_line(in, "$Nodes"));
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(row >> id >> x >> y >> z)) throw FormatError("malformed node record");
        nodes[id] = {x, y};
      }
      expect_line(in, "$EndNodes");
    } else if (line == "$Elements") {
      const long count = std::stol(next_token_line(in, "$Elements"));
      for (long i = 0; i < count; ++i) {
        std::istringstream row(next_token_line(in, "$Elements"));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(row >> id >> type >> ntags)) throw FormatError("malformed element record");
        std::vector<int> tags(ntags);
        for (auto& t : tags) row >> t;
        const int physical = ntags > 0 ? tags[0] : 0;
        if (type == 2) {
          RawTriangle tri{};
          for (auto& n : tri.n) row >> n;
          if (!row) throw FormatError("malformed triangle record");
          raw_triangles.push_back(tri);
        } else if (type == 1) {
          RawLine ln{};
          for (auto& n : ln.n) row >> n;
          if (!row) throw FormatError("malformed line record");
          ln.physical = physical;
          raw_lines.push_back(ln);
        } else if (type == 15) {
          continue;
        } else {
          throw FormatError("unsupported Gmsh element type " + std::to_string(type) +
                            " (element " + std::to_string(id) + ")");
        }
      }
      expect_line(in, "$EndElements");
    } else if (line.front() == '$' && line.rfind("$End", 0) != 0) {
      // Skip sections we do not interpret ($Periodic, $NodeData, ...).
      const std::string end = "$End" + line.substr(1);
      std::string skip;
      bool closed = false;
      while (std::getline(in, skip)) {
        if (!skip.empty() && skip.back() == '\r') skip.pop_back();
        if (skip == end) {
          closed = true;
          break;
        }
      }
      if (!closed) throw FormatError("unterminated section " + line);
    }
  }
  if (!have_format) throw FormatError("missing $MeshFormat section");
  if (raw_triangles.empty()) throw FormatError("mesh contains no triangles");

  // Keep only nodes used by triangles, numbered in order of first use by node id.
  std::map<long, int> index;
  for (const auto& tri : raw_triangles) {
    for (long n : tri.n) {
      if (!nodes.count(n)) throw FormatError("triangle references unknown node " + std::to_string(n));
      index.emplace(n, 0);
    }
  }
  std::vector<Point> vertices;
  vertices.reserve(index.size());
  for (auto& [id, local] : index) {
    local = static_cast<int>(vertices.size());
    vertices.push_back(nodes.at(id));
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(raw_triangles.size());
  for (const auto& tri : raw_triangles) {
    std::array<int, 3> t{index.at(tri.n[0]), index.at(tri.n[1]), index.at(tri.n[2])};
    if (orient(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0.0) std::swap(t[1], t[2]);
    triangles.push_back(t);
  }

  std::map<EdgeKey, std::string> tags;
  for (const auto& ln : raw_lines) {
    auto a = index.find(ln.n[0]);
    auto b = index.find(ln.n[1]);
    if (a == index.end() || b == index.end()) {
      throw ValidationError("boundary line references a node not used by any triangle");
    }
    auto name = physical_names.find(ln.physical);
    tags[make_edge_key(a->second, b->second)] =
        name != physical_names.end() ? name->second : std::to_string(ln.physical);
  }
  return TriMesh::create(std::move(vertices), std::move(triangles), std::move(tags));
}

void write_mesh_dump(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh dump " + path.string());
  out << std::setprecision(17);
  out << "emacfem-mesh 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  for (const auto& p : mesh.vertices()) out << p.x << " " << p.y << "\n";
  out << "triangles " << mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles()) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  const auto tags = mesh.boundary_tag_map();
  out << "boundary " << tags.size() << "\n";
  for (const auto& [key, tag] : tags) out << key.first << " " << key.second << " " << tag << "\n";
  out << "periodic " << mesh.periodic_pairs().size() << "\n";
  for (const auto& [s, m] : mesh.periodic_pairs()) out << s << " " << m << "\n";
}

TriMesh read_mesh_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open mesh dump " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "emacfem-mesh" || version != 1) throw FormatError("not an emacfem mesh dump");

  auto section = [&](const char* name) {
    std::string word;
    long count = -1;
    in >> word >> count;
    if (!in || word != name || count < 0) {
      throw FormatError(std::string("mesh dump: expected section ") + name);
    }
    return count;
  };

  std::vector<Point> vertices(section("vertices"));
  for (auto& p : vertices) in >> p.x >> p.y;
  std::vector<std::array<int, 3>> triangles(section("triangles"));
  for (auto& t : triangles) in >> t[0] >> t[1] >> t[2];
  std::map<EdgeKey, std::string> tags;
  for (long i = 0, n = section("boundary"); i < n; ++i) {
    int a = 0, b = 0;
    std::string tag;
    in >> a >> b >> tag;
    tags[make_edge_key(a, b)] = tag;
  }
  std::map<int, int> periodic;
  for (long i = 0, n = section("periodic"); i < n; ++i) {
    int s = 0, m = 0;
    in >> s >> m;
    periodic[s] = m;
  }
  if (!in) throw FormatError("mesh dump truncated");
  return TriMesh::create(std::move(vertices), std::move(triangles), std::move(tags),
                         std::move(periodic));
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open mesh file " + path.string());
  std::string first;
  in >> first;
  if (first == "$MeshFormat") return import_gmsh(path);
  if (first == "emacfem-mesh") return read_mesh_dump(path);
  throw FormatError("unrecognized mesh file " + path.string());
}

bool SubdomainMarker::contains_element(int t) const {
  return std::binary_search(element_set.begin(), element_set.end(), t);
}

SubdomainMarker mark_subdomain(const TriMesh& mesh, const RegionPredicate& region) {
  const int nt = mesh.num_triangles();
  std::vector<bool> selected(nt, false);
  SubdomainMarker marker;
  for (int t = 0; t < nt; ++t) {
    if (region(mesh.barycenter(t))) {
      selected[t] = true;
      marker.element_set.push_back(t);
    }
  }
  if (marker.element_set.empty()) throw InvalidRegion("subdomain selects no elements");

  const auto& on_boundary = mesh.boundary_vertex_mask();
  for (int t : marker.element_set) {
    for (int v : mesh.triangle(t)) {
      if (on_boundary[v]) {
        throw InvalidRegion("subdomain touches the domain boundary at vertex " + std::to_string(v));
      }
    }
  }

  // Edge-connectivity by breadth-first search over shared edges.
  std::vector<bool> seen(nt, false);
  std::queue<int> queue;
  queue.push(marker.element_set.front());
  seen[marker.element_set.front()] = true;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop();
    ++reached;
    for (int e : mesh.triangle_edges(t)) {
      for (int nb : mesh.edge_triangles(e)) {
        if (nb >= 0 && selected[nb] && !seen[nb]) {
          seen[nb] = true;
          queue.push(nb);
        }
      }
    }
  }
  if (reached != marker.element_set.size()) throw InvalidRegion("subdomain is not edge-connected");

  const auto& vtri = mesh.vertex_triangles();
  std::vector<bool> vertex_seen(mesh.num_vertices(), false);
  for (int t : marker.element_set) {
    for (int v : mesh.triangle(t)) {
      if (vertex_seen[v]) continue;
      vertex_seen[v] = true;
      const bool inside = std::all_of(vtri[v].begin(), vtri[v].end(),
                                      [&](int s) { return selected[s]; });
      if (inside) marker.interior_p1_nodes.push_back(v);
    }
  }
  std::sort(marker.interior_p1_nodes.begin(), marker.interior_p1_nodes.end());

  std::vector<bool> edge_seen(mesh.num_edges(), false);
  std::vector<int> interior_edge_nodes;
  for (int t : marker.element_set) {
    for (int e : mesh.triangle_edges(t)) {
      if (edge_seen[e]) continue;
      edge_seen[e] = true;
      const auto& adj = mesh.edge_triangles(e);
      const bool both = adj[1] >= 0 && selected[adj[0]] && selected[adj[1]];
      if (both) {
        interior_edge_nodes.push_back(edge_node(mesh, e));
      } else {
        marker.boundary.push_back({e, selected[adj[0]] ? adj[0] : adj[1]});
      }
    }
  }
  marker.interior_p2_nodes = marker.interior_p1_nodes;
  marker.interior_p2_nodes.insert(marker.interior_p2_nodes.end(), interior_edge_nodes.begin(),
                                  interior_edge_nodes.end());
  std::sort(marker.interior_p2_nodes.begin(), marker.interior_p2_nodes.end());
  std::sort(marker.boundary.begin(), marker.boundary.end(),
            [](const auto& a, const auto& b) { return a.edge < b.edge; });
  return marker;
}

}  // namespace emacfem
