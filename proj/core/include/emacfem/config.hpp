#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "emacfem/forms.hpp"
#include "emacfem/problems.hpp"

namespace emacfem {

/// Fully resolved run parameters: problem defaults overlaid with the
/// configuration file.
struct RunConfig {
  std::string problem = "gresho";
  double re = 100.0;  // Kelvin-Helmholtz only
  double nu = 0.0;
  double dt = 0.0;
  double end_time = 0.0;
  std::optional<int> mesh_n;
  std::optional<std::string> mesh_path;
  NonlinearForm form = NonlinearForm::EMAC;
  int bdf_order = 2;
  int transport_order = 1;
  Region omega;
  double newton_tol = 1e-12;
  int max_newton_iterations = 25;
  std::string output_dir = "output";
  int snapshot_stride = 0;  // 0 disables snapshots
  bool lagrangian = true;

  /// Number of steps: ceil(end_time / dt) up to a 1e-9 relative slack.
  int num_steps() const;
};

/// Defaults of a problem with no overrides.
RunConfig default_config(const std::string& problem, double re = 100.0);

/// Parses and validates a JSON object. Relative mesh paths are resolved
/// against `base_dir`. Throws ConfigError naming the offending key.
RunConfig parse_config_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

/// Throws ConfigError when a constraint is violated.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const Region& region);

}  // namespace emacfem
