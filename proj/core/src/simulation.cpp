#include "emacfem/simulation.hpp"

#include <algorithm>
#include <cstdio>

#include "emacfem/bdf.hpp"
#include "emacfem/errors.hpp"
#include "emacfem/report.hpp"
#include "emacfem/version.hpp"

namespace emacfem {

using nlohmann::json;

Simulation::Simulation(RunConfig config, std::vector<int> extra_transport_orders)
    : config_(std::move(config)) {
  validate(config_);
  spec_ = problem_by_name(config_.problem, config_.re);
  mesh_ = problem_mesh(spec_, config_.mesh_n, config_.mesh_path);
  velocity_ = build_dof_map(mesh_, SpaceKind::P2Vector, spec_.velocity_bc);
  pressure_ = build_dof_map(mesh_, SpaceKind::P1Scalar);

  NseOptions opts;
  opts.form = config_.form;
  opts.nu = config_.nu;
  opts.newton_tol = config_.newton_tol;
  opts.max_newton_iterations = config_.max_newton_iterations;
  solver_ = std::make_unique<NseSolver>(velocity_, pressure_, opts);

  marker_ = mark_subdomain(*mesh_, config_.omega.predicate());
  spaces_ = make_indicator_spaces(mesh_, spec_.wall_tags);
  eulerian_ = build_indicators(marker_, spaces_, 1);
  if (config_.lagrangian) {
    std::vector<int> orders{config_.transport_order};
    for (int j : extra_transport_orders) {
      if (j < 1 || j > 2) throw InvalidArgument("transport order must be 1 or 2");
      if (std::find(orders.begin(), orders.end(), j) == orders.end()) orders.push_back(j);
    }
    for (int j : orders) lagrangian_.push_back(build_indicators(marker_, spaces_, j));
    transport_ = std::make_unique<IndicatorTransport>(spaces_);
  }

  history_.push(initial_state(velocity_, pressure_, spec_.initial_velocity, 0.0));
  num_steps_ = config_.num_steps();
}

BalanceContext Simulation::balance_context() const {
  BalanceContext ctx;
  ctx.form = config_.form;
  ctx.nu = config_.nu;
  ctx.dt = config_.dt;
  return ctx;
}

BalanceReport Simulation::advance() {
  if (finished()) throw InvalidState("simulation already reached its end time");
  const int n = step_ + 1;
  const int k = scheduled_order(config_.bdf_order, n);
  SolverState next = solver_->step(history_, config_.dt, k);
  history_.push(std::move(next));
  step_ = n;
  const SolverState& s = history_.back(0);
  for (auto& pair : lagrangian_) transport_->advance(pair, s.u, config_.dt);

  const auto ctx = balance_context();
  BalanceReport r;
  r.step = n;
  r.t = s.t;
  r.order = k;
  r.e_E_mom = eulerian_momentum_error(history_, eulerian_.current_phi(), ctx);
  r.e_E_am = eulerian_angular_error(history_, eulerian_.current_psi(), ctx);
  for (const auto& pair : lagrangian_) {
    LagrangianErrors l;
    l.order = pair.orders.front();
    l.momentum = lagrangian_momentum_error(history_, pair, ctx);
    l.angular = lagrangian_angular_error(history_, pair, ctx);
    r.lagrangian.push_back(l);
  }
  const auto trad = traditional_eulerian_errors(history_, marker_, ctx);
  r.e_trad_mom = trad.momentum;
  r.e_trad_am = trad.angular;
  r.global = global_balances(s);
  r.newton_iterations = s.newton_iterations;
  r.newton_residual = s.newton_residual;
  return r;
}

json Simulation::metadata() const {
  json m;
  m["version"] = kVersion;
  m["config"] = to_json(config_);
  m["steps"] = num_steps_;
  json mesh = {{"vertices", mesh_->num_vertices()},
               {"triangles", mesh_->num_triangles()},
               {"edges", mesh_->num_edges()},
               {"periodic_pairs", mesh_->periodic_pairs().size()},
               {"velocity_dofs", velocity_->n_dofs()},
               {"pressure_dofs", pressure_->n_dofs()}};
  if (config_.mesh_path) {
    mesh["source"] = *config_.mesh_path;
  } else {
    mesh["source"] = "structured";
    mesh["n"] = config_.mesh_n.value_or(spec_.mesh_n);
    mesh["domain"] = {spec_.domain.x0, spec_.domain.x1, spec_.domain.y0, spec_.domain.y1};
    mesh["diagonal"] = "lower-left to upper-right";
  }
  m["mesh"] = mesh;
  m["omega_h"] = {{"elements", marker_.element_set.size()},
                  {"interior_p2_nodes", marker_.interior_p2_nodes.size()},
                  {"interior_p1_nodes", marker_.interior_p1_nodes.size()},
                  {"boundary_edges", marker_.boundary.size()}};
  json constants = json::object();
  for (const auto& [k, v] : spec_.constants) constants[k] = v;
  m["problem_constants"] = constants;
  m["dirichlet_tags"] = velocity_->dirichlet_tags();
  m["indicator_zero_tags"] = spec_.wall_tags;
  m["conventions"] = {
      {"elements", "Taylor-Hood P2-P1"},
      {"quadrature_degree", kDefaultQuadratureDegree},
      {"edge_quadrature", "4-point Gauss-Legendre"},
      {"time_stepping", "BDF1 first step, min(2,k) second step, BDFk afterwards"},
      {"transport_startup", "BDF1 first step"},
      {"dirichlet_time", "data sampled at t^n"},
      {"pressure_term", "-(p_hat, div v)"},
      {"pressure_gauge", "pressure dof 0 pinned during Newton, zero mean afterwards"},
      {"recovered_pressure", "EMAC: p_hat + |u|^2/2; ROT: p_hat - |u|^2/2; CONV, SKEW, CONS: p_hat"},
      {"newton", "exact Jacobian, absolute 2-norm of the constrained residual"},
      {"newton_initial_guess", "2 u^{n-1} - u^{n-2} (u^{n-1} on the first step) with Dirichlet data at t^n"},
      {"linear_solver", "UMFPACK sparse LU"},
      {"weak_flux_weight", "n|grad phi| evaluated as -grad phi"},
      {"traditional_trace", "inside-element one-sided trace on the boundary of omega_h"},
      {"angular", "z-component, test function psi (y, -x)"},
      {"initial_velocity", "nodal interpolant"}};
  return m;
}

namespace {

std::string snapshot_name(int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.vtk", step);
  return buf;
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  std::unique_ptr<Simulation> sim;
  try {
    sim = std::make_unique<Simulation>(config);
  } catch (const ConfigError& e) {
    return {kExitConfigError, e.what(), {}};
  } catch (const InvalidRegion& e) {
    return {kExitConfigError, std::string("omega: ") + e.what(), {}};
  } catch (const FormatError& e) {
    return {kExitConfigError, e.what(), {}};
  } catch (const ValidationError& e) {
    return {kExitConfigError, e.what(), {}};
  }

  const std::filesystem::path dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return {kExitConfigError, "cannot create output directory '" + dir.string() + "'", {}};

  json meta = sim->metadata();
  std::vector<std::string> snapshots;
  auto snapshot = [&](int step) {
    const auto name = snapshot_name(step);
    write_vtk(sim->history().back(0), config.form, dir / name);
    snapshots.push_back(name);
  };
  if (config.snapshot_stride > 0) snapshot(0);

  try {
    while (!sim->finished()) {
      out.rows.push_back(sim->advance());
      if (config.snapshot_stride > 0 && sim->steps_taken() % config.snapshot_stride == 0) {
        snapshot(sim->steps_taken());
      }
    }
    meta["status"] = "completed";
  } catch (const NonConvergence& e) {
    out.exit_code = kExitSolverFailure;
    out.message = e.what();
    meta["status"] = "failed";
    meta["failure"] = {{"step", sim->steps_taken() + 1},
                       {"reason", e.what()},
                       {"last_residual", e.last_residual()},
                       {"iterations", e.iterations()}};
  } catch (const SingularMatrix& e) {
    out.exit_code = kExitSolverFailure;
    out.message = e.what();
    meta["status"] = "failed";
    meta["failure"] = {{"step", sim->steps_taken() + 1}, {"reason", e.what()}, {"pivot_row", e.pivot_row()}};
  }
  meta["steps_completed"] = sim->steps_taken();
  meta["snapshots"] = snapshots;
  meta["columns"] = balance_columns();
  atomic_write(dir / "balances.csv", format_balances_csv(out.rows));
  atomic_write(dir / "metadata.json", meta.dump(2) + "\n");
  return out;
}

}  // namespace emacfem
