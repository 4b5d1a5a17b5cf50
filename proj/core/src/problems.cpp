#include "emacfem/problems.hpp"

#include <cmath>
#include <numbers>

#include "emacfem/errors.hpp"

namespace emacfem {

Region Region::disk(Point center, double radius) {
  Region r;
  r.kind = Kind::Disk;
  r.center = center;
  r.radius = radius;
  return r;
}

Region Region::make_box(const Rect& box) {
  Region r;
  r.kind = Kind::Box;
  r.box = box;
  return r;
}

bool Region::contains(const Point& p) const {
  if (kind == Kind::Disk) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    return dx * dx + dy * dy < radius * radius;
  }
  return p.x > box.x0 && p.x < box.x1 && p.y > box.y0 && p.y < box.y1;
}

RegionPredicate Region::predicate() const {
  return [r = *this](const Point& p) { return r.contains(p); };
}

GreshoConstants gresho_constants(double r1, double r2) {
  if (!(r1 > 0.0 && r2 > r1)) throw InvalidArgument("Gresho radii must satisfy 0 < r1 < r2");
  const double d2 = (r2 - r1) * (r2 - r1);
  // ring: p = (r2^2 ln r - 2 r2 r + r^2/2) / (r2 - r1)^2 + c2, inner: p = r^2 / (2 r1^2) + c1
  auto ring = [&](double r) { return (r2 * r2 * std::log(r) - 2.0 * r2 * r + 0.5 * r * r) / d2; };
  GreshoConstants c;
  c.r1 = r1;
  c.r2 = r2;
  c.c2 = -ring(r2);
  c.c1 = ring(r1) + c.c2 - 0.5;
  return c;
}

Vec2 gresho_velocity(const Point& x, double r1, double r2) {
  const double r = std::hypot(x.x, x.y);
  double ut = 0.0;
  if (r < r1) {
    ut = r / r1;
  } else if (r <= r2) {
    ut = (r2 - r) / (r2 - r1);
  }
  if (r == 0.0) return {0.0, 0.0};
  return {-ut * x.y / r, ut * x.x / r};
}

double gresho_pressure(const Point& x, const GreshoConstants& c) {
  const double r = std::hypot(x.x, x.y);
  const double d2 = (c.r2 - c.r1) * (c.r2 - c.r1);
  if (r < c.r1) return 0.5 * r * r / (c.r1 * c.r1) + c.c1;
  if (r <= c.r2) return (c.r2 * c.r2 * std::log(r) - 2.0 * c.r2 * r + 0.5 * r * r) / d2 + c.c2;
  return 0.0;
}

namespace {

BoundaryFunction zero_bc() {
  return [](const Point&, double, int) { return 0.0; };
}

}  // namespace

ProblemSpec gresho(double r1, double r2) {
  const auto c = gresho_constants(r1, r2);
  ProblemSpec s;
  s.name = "gresho";
  s.nu = 1e-10;
  s.initial_velocity = [r1, r2](const Point& x) { return gresho_velocity(x, r1, r2); };
  s.initial_pressure = [c](const Point& x) { return gresho_pressure(x, c); };
  for (const char* tag : {"bottom", "right", "top", "left"}) {
    s.velocity_bc[tag] = zero_bc();
    s.wall_tags.emplace_back(tag);
  }
  s.omega = Region::disk({0.2, 0.09}, 0.05);
  s.dt = 0.01;
  s.end_time = 1.0;
  s.bdf_order = 2;
  s.transport_order = 1;
  s.domain = {-0.5, 0.5, -0.5, 0.5};
  s.mesh_n = 64;
  s.constants = {{"r1", r1}, {"r2", r2}, {"C1", c.c1}, {"C2", c.c2}};
  return s;
}

double cylinder_inflow(double y) { return 6.0 / (0.41 * 0.41) * y * (0.41 - y); }

ProblemSpec cylinder() {
  ProblemSpec s;
  s.name = "cylinder";
  s.nu = 1e-3;
  s.initial_velocity = [](const Point&) { return Vec2{0.0, 0.0}; };
  const BoundaryFunction profile = [](const Point& x, double, int c) {
    return c == 0 ? cylinder_inflow(x.y) : 0.0;
  };
  s.velocity_bc["inflow"] = profile;
  s.velocity_bc["outflow"] = profile;
  s.velocity_bc["walls"] = zero_bc();
  s.velocity_bc["cylinder"] = zero_bc();
  s.wall_tags = {"inflow", "outflow", "walls", "cylinder"};
  s.required_tags = s.wall_tags;
  s.omega = Region::disk({0.35, 0.16}, 0.05);
  s.dt = 0.01;
  s.end_time = 5.0;
  s.bdf_order = 3;
  s.transport_order = 1;
  s.lagrangian = false;
  s.mesh_required = true;
  s.domain = {0.0, 2.2, 0.0, 0.41};
  // u0 = 0 does not match the inflow profile; the data is imposed from t > 0.
  s.initial_matches_bc = false;
  s.constants = {{"U_max", 1.5}, {"diameter", 0.1}};
  return s;
}

Vec2 kelvin_helmholtz_initial(const Point& x) {
  constexpr double pi = std::numbers::pi;
  const double d0 = 1.0 / 28.0;
  const double u_inf = 1.0;
  const double cn = 1e-3;
  const double yc = x.y - 0.5;
  const double g = u_inf * std::exp(-yc * yc / (d0 * d0));
  const double modes = std::cos(8.0 * pi * x.x) + std::cos(20.0 * pi * x.x);
  const double dmodes = -8.0 * pi * std::sin(8.0 * pi * x.x) - 20.0 * pi * std::sin(20.0 * pi * x.x);
  const double dpsi_dy = g * (-2.0 * yc / (d0 * d0)) * modes;
  const double dpsi_dx = g * dmodes;
  return {u_inf * std::tanh((2.0 * x.y - 1.0) / d0) + cn * dpsi_dy, -cn * dpsi_dx};
}

ProblemSpec kelvin_helmholtz(double re) {
  if (!(re > 0.0)) throw InvalidArgument("Reynolds number must be positive");
  ProblemSpec s;
  s.name = "kelvin_helmholtz";
  s.nu = 1.0 / (28.0 * re);
  s.initial_velocity = kelvin_helmholtz_initial;
  s.velocity_bc["bottom"] = zero_bc();
  s.velocity_bc["top"] = zero_bc();
  s.wall_tags = {"bottom", "top"};
  s.omega = Region::make_box({0.125, 0.25, 0.125, 0.25});
  s.dt = 0.01;
  s.end_time = 5.0;
  s.bdf_order = 2;
  s.transport_order = 1;
  s.domain = {0.0, 1.0, 0.0, 1.0};
  s.mesh_n = 128;
  s.periodic_x = true;
  // The shear layer has u1 = +-1 at y = 0, 1; no-slip is imposed for t > 0 only.
  s.initial_matches_bc = false;
  s.constants = {{"Re", re}, {"delta0", 1.0 / 28.0}, {"u_inf", 1.0}, {"c_n", 1e-3}};
  return s;
}

ProblemSpec problem_by_name(const std::string& name, double re) {
  if (name == "gresho") return gresho();
  if (name == "cylinder") return cylinder();
  if (name == "kelvin_helmholtz" || name == "kh") return kelvin_helmholtz(re);
  throw ConfigError("unknown problem '" + name + "'");
}

std::shared_ptr<const TriMesh> problem_mesh(const ProblemSpec& spec, std::optional<int> mesh_n,
                                            const std::optional<std::string>& mesh_path) {
  std::shared_ptr<const TriMesh> mesh;
  if (mesh_path) {
    try {
      mesh = std::make_shared<const TriMesh>(load_mesh(*mesh_path));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("cannot load mesh '" + *mesh_path + "': " + e.what());
    }
  } else {
    if (spec.mesh_required) throw ConfigError("problem '" + spec.name + "' requires mesh_path");
    const int n = mesh_n.value_or(spec.mesh_n);
    if (n < 2) throw ConfigError("mesh_n must be at least 2");
    mesh = std::make_shared<const TriMesh>(build_structured_square(n, spec.domain, spec.periodic_x));
  }
  const auto tags = mesh->boundary_tag_names();
  for (const auto& tag : spec.required_tags) {
    if (!tags.count(tag)) throw ConfigError("mesh is missing boundary tag '" + tag + "'");
  }
  return mesh;
}

}  // namespace emacfem
