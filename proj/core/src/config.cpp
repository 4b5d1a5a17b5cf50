#include "emacfem/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "emacfem/errors.hpp"

namespace emacfem {

using nlohmann::json;

int RunConfig::num_steps() const {
  return static_cast<int>(std::ceil(end_time / dt * (1.0 - 1e-9)));
}

RunConfig default_config(const std::string& problem, double re) {
  const ProblemSpec spec = problem_by_name(problem, re);
  RunConfig c;
  c.problem = spec.name;
  c.re = re;
  c.nu = spec.nu;
  c.dt = spec.dt;
  c.end_time = spec.end_time;
  c.bdf_order = spec.bdf_order;
  c.transport_order = spec.transport_order;
  c.omega = spec.omega;
  c.lagrangian = spec.lagrangian;
  return c;
}

namespace {

template <class T>
T get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("invalid value for '") + key + "'");
  }
}

Region parse_region(const json& v) {
  if (!v.is_object()) throw ConfigError("'omega' must be an object");
  if (v.contains("box") && v.size() == 1) {
    const auto b = get<std::vector<double>>(v, "box");
    if (b.size() != 4) throw ConfigError("'omega.box' must be [x0, x1, y0, y1]");
    if (!(b[1] > b[0] && b[3] > b[2])) throw ConfigError("'omega.box' must have positive extent");
    return Region::make_box({b[0], b[1], b[2], b[3]});
  }
  if (v.contains("center") && v.contains("radius") && v.size() == 2) {
    const auto c = get<std::vector<double>>(v, "center");
    const double r = get<double>(v, "radius");
    if (c.size() != 2) throw ConfigError("'omega.center' must be [x, y]");
    if (!(r > 0.0)) throw ConfigError("'omega.radius' must be positive");
    return Region::disk({c[0], c[1]}, r);
  }
  throw ConfigError("'omega' must be {\"center\": [x, y], \"radius\": r} or {\"box\": [x0, x1, y0, y1]}");
}

}  // namespace

void validate(const RunConfig& c) {
  if (!(c.nu > 0.0) || !std::isfinite(c.nu)) throw ConfigError("'nu' must be positive");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("'dt' must be positive");
  if (!(c.end_time >= c.dt) || !std::isfinite(c.end_time)) throw ConfigError("'end_time' must be at least dt");
  if (c.bdf_order < 1 || c.bdf_order > 3) throw ConfigError("'bdf_order' must be 1, 2 or 3");
  if (c.transport_order < 1 || c.transport_order > 2) throw ConfigError("'transport_order' must be 1 or 2");
  if (c.mesh_n && *c.mesh_n < 2) throw ConfigError("'mesh_n' must be at least 2");
  if (!(c.newton_tol > 0.0)) throw ConfigError("'newton_tol' must be positive");
  if (c.max_newton_iterations < 1) throw ConfigError("'max_newton_iterations' must be positive");
  if (c.snapshot_stride < 0) throw ConfigError("'snapshot_stride' must be non-negative");
  if (!(c.re > 0.0)) throw ConfigError("'re' must be positive");
  if (c.output_dir.empty()) throw ConfigError("'output_dir' must not be empty");
}

RunConfig parse_config_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::set<std::string> known = {
      "problem", "re", "nu", "dt", "end_time", "mesh_n", "mesh_path", "form", "bdf_order",
      "transport_order", "omega", "newton_tol", "max_newton_iterations", "output_dir",
      "snapshot_stride", "lagrangian"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown configuration key '" + item.key() + "'");
  }
  if (!doc.contains("problem")) throw ConfigError("missing required key 'problem'");
  const auto problem = get<std::string>(doc, "problem");
  const double re = doc.contains("re") ? get<double>(doc, "re") : 100.0;
  if (!(re > 0.0)) throw ConfigError("'re' must be positive");
  RunConfig c = default_config(problem, re);

  if (doc.contains("nu")) c.nu = get<double>(doc, "nu");
  if (doc.contains("dt")) c.dt = get<double>(doc, "dt");
  if (doc.contains("end_time")) c.end_time = get<double>(doc, "end_time");
  if (doc.contains("mesh_n")) c.mesh_n = get<int>(doc, "mesh_n");
  if (doc.contains("mesh_path")) {
    std::filesystem::path p = get<std::string>(doc, "mesh_path");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.mesh_path = p.string();
  }
  if (doc.contains("form")) {
    try {
      c.form = parse_nonlinear_form(get<std::string>(doc, "form"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("'form': ") + e.what());
    }
  }
  if (doc.contains("bdf_order")) c.bdf_order = get<int>(doc, "bdf_order");
  if (doc.contains("transport_order")) c.transport_order = get<int>(doc, "transport_order");
  if (doc.contains("omega")) c.omega = parse_region(doc.at("omega"));
  if (doc.contains("newton_tol")) c.newton_tol = get<double>(doc, "newton_tol");
  if (doc.contains("max_newton_iterations")) c.max_newton_iterations = get<int>(doc, "max_newton_iterations");
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir");
  if (doc.contains("snapshot_stride")) c.snapshot_stride = get<int>(doc, "snapshot_stride");
  if (doc.contains("lagrangian")) c.lagrangian = get<bool>(doc, "lagrangian");
  validate(c);
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config_json(doc, path.parent_path());
}

json to_json(const Region& r) {
  if (r.kind == Region::Kind::Disk) {
    return {{"center", {r.center.x, r.center.y}}, {"radius", r.radius}};
  }
  return {{"box", {r.box.x0, r.box.x1, r.box.y0, r.box.y1}}};
}

json to_json(const RunConfig& c) {
  json j = {{"problem", c.problem},
            {"nu", c.nu},
            {"dt", c.dt},
            {"end_time", c.end_time},
            {"form", to_string(c.form)},
            {"bdf_order", c.bdf_order},
            {"transport_order", c.transport_order},
            {"omega", to_json(c.omega)},
            {"newton_tol", c.newton_tol},
            {"max_newton_iterations", c.max_newton_iterations},
            {"output_dir", c.output_dir},
            {"snapshot_stride", c.snapshot_stride},
            {"lagrangian", c.lagrangian}};
  if (c.problem == "kelvin_helmholtz") j["re"] = c.re;
  if (c.mesh_n) j["mesh_n"] = *c.mesh_n;
  if (c.mesh_path) j["mesh_path"] = *c.mesh_path;
  return j;
}

}  // namespace emacfem
