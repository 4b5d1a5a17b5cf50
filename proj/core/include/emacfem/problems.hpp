#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emacfem/dof_map.hpp"
#include "emacfem/mesh.hpp"

namespace emacfem {

/// Disk or axis-aligned box used to select omega_h by element barycenter.
struct Region {
  enum class Kind { Disk, Box };
  Kind kind = Kind::Disk;
  Point center;
  double radius = 0.0;
  Rect box;

  static Region disk(Point center, double radius);
  static Region make_box(const Rect& box);

  /// Strict containment of a barycenter.
  bool contains(const Point& p) const;
  RegionPredicate predicate() const;
};

struct ProblemSpec {
  std::string name;
  double nu = 1.0;
  std::function<Vec2(const Point&)> initial_velocity;
  std::function<double(const Point&)> initial_pressure;  // reporting only; may be empty
  DirichletSpec velocity_bc;
  /// Boundary tags on which indicators vanish.
  std::vector<std::string> wall_tags;
  Region omega;
  double dt = 0.01;
  double end_time = 1.0;
  int bdf_order = 2;
  int transport_order = 1;
  bool lagrangian = true;
  /// Structured mesh defaults; ignored when mesh_required is set.
  Rect domain;
  int mesh_n = 64;
  bool periodic_x = false;
  bool mesh_required = false;
  std::vector<std::string> required_tags;
  /// Constants and conventions recorded in run metadata.
  std::vector<std::pair<std::string, double>> constants;
  /// Whether the initial interpolant must match the Dirichlet data at t = 0.
  bool initial_matches_bc = true;
};

struct GreshoConstants {
  double r1 = 0.2;
  double r2 = 0.4;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Pressure constants from p(r2) = 0 and continuity at r1.
GreshoConstants gresho_constants(double r1 = 0.2, double r2 = 0.4);
Vec2 gresho_velocity(const Point& x, double r1 = 0.2, double r2 = 0.4);
double gresho_pressure(const Point& x, const GreshoConstants& c);

ProblemSpec gresho(double r1 = 0.2, double r2 = 0.4);
ProblemSpec cylinder();
ProblemSpec kelvin_helmholtz(double re = 100.0);

double cylinder_inflow(double y);
Vec2 kelvin_helmholtz_initial(const Point& x);

/// Throws ConfigError for an unknown problem name.
ProblemSpec problem_by_name(const std::string& name, double re = 100.0);

/// Mesh for a problem: structured from its defaults, or loaded from `mesh_path`.
/// Throws ConfigError when a required mesh or tag is missing.
std::shared_ptr<const TriMesh> problem_mesh(const ProblemSpec& spec, std::optional<int> mesh_n,
                                            const std::optional<std::string>& mesh_path);

}  // namespace emacfem
