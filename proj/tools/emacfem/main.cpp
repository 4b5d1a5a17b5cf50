// Command line front end: run, diff, mesh-info.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "emacfem/errors.hpp"
#include "emacfem/mesh.hpp"
#include "emacfem/report.hpp"
#include "emacfem/simulation.hpp"
#include "emacfem/version.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_override) {
  emacfem::RunConfig config;
  try {
    config = emacfem::parse_config(config_path);
  } catch (const emacfem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return emacfem::kExitConfigError;
  }
  if (!output_override.empty()) config.output_dir = output_override;
  const auto outcome = emacfem::run(config);
  if (outcome.exit_code == emacfem::kExitConfigError) {
    std::cerr << "config error: " << outcome.message << '\n';
  } else if (outcome.exit_code == emacfem::kExitSolverFailure) {
    std::cerr << "solver failure: " << outcome.message << '\n';
  } else {
    std::cout << "wrote " << outcome.rows.size() << " steps to " << config.output_dir << '\n';
  }
  return outcome.exit_code;
}

int cmd_diff(const std::string& a, const std::string& b, double tol) {
  std::vector<emacfem::ColumnDiff> diffs;
  try {
    diffs = emacfem::diff_csv(emacfem::read_csv(a), emacfem::read_csv(b));
  } catch (const emacfem::FormatError& e) {
    std::cerr << "diff: " << e.what() << '\n';
    return emacfem::kExitConfigError;
  }
  bool within = true;
  for (const auto& d : diffs) {
    std::printf("%-20s %.17g\n", d.column.c_str(), d.max_abs);
    if (!(d.max_abs <= tol)) within = false;
  }
  return within ? 0 : 1;
}

int cmd_mesh_info(const std::string& path) {
  try {
    const auto mesh = emacfem::load_mesh(path);
    const int v = mesh.num_vertices();
    const int e = mesh.num_edges();
    const int f = mesh.num_triangles();
    std::printf("vertices        %d\n", v);
    std::printf("triangles       %d\n", f);
    std::printf("edges           %d\n", e);
    std::printf("euler           %d\n", v - e + f);
    std::printf("area            %.17g\n", mesh.total_area());
    std::printf("periodic_pairs  %zu\n", mesh.periodic_pairs().size());
    std::map<std::string, int> counts;
    for (int b : mesh.boundary_edges()) ++counts[mesh.edge_tag(b)];
    for (const auto& [tag, n] : counts) std::printf("tag %-12s %d edges\n", tag.c_str(), n);
  } catch (const emacfem::Error& e) {
    std::cerr << "mesh-info: " << e.what() << '\n';
    return emacfem::kExitConfigError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMAC Navier-Stokes solver with local conservation diagnostics"};
  app.set_version_flag("--version", std::string(emacfem::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run a simulation described by a JSON configuration");
  run->add_option("config", config_path, "Configuration file")->required();
  run->add_option("-o,--output", output_dir, "Override the output directory");

  std::string csv_a;
  std::string csv_b;
  double tol = 0.0;
  auto* diff = app.add_subcommand("diff", "Maximum absolute difference per column of two balance files");
  diff->add_option("a", csv_a)->required();
  diff->add_option("b", csv_b)->required();
  diff->add_option("--tol", tol, "Exit with status 1 when any column differs by more than this");

  std::string mesh_path;
  auto* info = app.add_subcommand("mesh-info", "Print mesh statistics");
  info->add_option("mesh", mesh_path, "Gmsh MSH 2.2 or mesh dump file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : emacfem::kExitConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, output_dir);
    if (*diff) return cmd_diff(csv_a, csv_b, tol);
    if (*info) return cmd_mesh_info(mesh_path);
  } catch (const emacfem::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return emacfem::kExitSolverFailure;
  }
  return 0;
}
