#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emacfem/balances.hpp"
#include "emacfem/config.hpp"
#include "emacfem/problems.hpp"
#include "emacfem/solver.hpp"
#include "emacfem/transport.hpp"

namespace emacfem {

/// Problem setup, time loop and per-step diagnostics for one configuration.
class Simulation {
 public:
  /// `extra_transport_orders` adds Lagrangian indicator pairs besides the
  /// configured one (ignored when Lagrangian diagnostics are off).
  explicit Simulation(RunConfig config, std::vector<int> extra_transport_orders = {});

  bool finished() const { return step_ >= num_steps_; }
  int steps_taken() const { return step_; }
  int num_steps() const { return num_steps_; }

  /// Advances one step and returns its diagnostics.
  BalanceReport advance();

  const RunConfig& config() const { return config_; }
  const ProblemSpec& problem() const { return spec_; }
  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  const SubdomainMarker& marker() const { return marker_; }
  const SolverHistory& history() const { return history_; }
  const IndicatorPair& eulerian_indicators() const { return eulerian_; }
  const std::vector<IndicatorPair>& lagrangian_indicators() const { return lagrangian_; }
  NseSolver& solver() { return *solver_; }
  BalanceContext balance_context() const;

  /// Resolved parameters, conventions and mesh statistics for metadata.json.
  nlohmann::json metadata() const;

 private:
  RunConfig config_;
  ProblemSpec spec_;
  std::shared_ptr<const TriMesh> mesh_;
  std::shared_ptr<const DofMap> velocity_;
  std::shared_ptr<const DofMap> pressure_;
  std::unique_ptr<NseSolver> solver_;
  SubdomainMarker marker_;
  IndicatorSpaces spaces_;
  IndicatorPair eulerian_;
  std::vector<IndicatorPair> lagrangian_;
  std::unique_ptr<IndicatorTransport> transport_;
  SolverHistory history_;
  int step_ = 0;
  int num_steps_ = 0;
};

/// Exit codes of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitSolverFailure = 3 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<BalanceReport> rows;
};

/// Runs to completion and writes balances.csv, metadata.json and snapshots
/// into config.output_dir. Solver failures keep partial outputs and mark the
/// metadata as failed.
RunOutcome run(const RunConfig& config);

}  // namespace emacfem
