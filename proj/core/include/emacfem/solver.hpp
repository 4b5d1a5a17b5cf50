#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "emacfem/bdf.hpp"
#include "emacfem/field.hpp"
#include "emacfem/forms.hpp"
#include "emacfem/sparse.hpp"

namespace emacfem {

/// Velocity and EMAC pressure p_hat at one time level.
struct SolverState {
  double t = 0.0;
  FemField u;
  FemField p_hat;
  int order = 0;  // BDF order that produced this state; 0 for initial data
  int newton_iterations = 0;
  double newton_residual = 0.0;
};

/// The last few states, newest first.
class SolverHistory {
 public:
  static constexpr int kDepth = 4;

  void push(SolverState state);
  int size() const { return static_cast<int>(states_.size()); }
  bool empty() const { return states_.empty(); }
  /// back(0) is the newest state, back(1) the one before, ...
  const SolverState& back(int i = 0) const;
  /// Throws InvalidState unless at least `count` states are held.
  void require(int count) const;

 private:
  std::deque<SolverState> states_;
};

using BodyForce = std::function<Vec2(const Point&, double t)>;

struct NseOptions {
  NonlinearForm form = NonlinearForm::EMAC;
  double nu = 1.0;
  double newton_tol = 1e-12;
  int max_newton_iterations = 25;
  BodyForce body_force;  // empty means zero force
};

/// Fully implicit BDFk + Newton for the P2-P1 Taylor-Hood system
///
///   (BDFk u, v) + c(u; u, v) + 2 nu (D(u), D(v)) - (p_hat, div v) = (f, v)
///   -(div u, q) = 0
///
/// with Dirichlet rows replaced by identities and pressure dof 0 pinned while
/// solving; p_hat is shifted to zero mean afterwards.
class NseSolver {
 public:
  NseSolver(std::shared_ptr<const DofMap> velocity, std::shared_ptr<const DofMap> pressure,
            NseOptions options);

  /// Advances from history.back(0) to t = history.back(0).t + dt with BDF
  /// order `order`. Throws NonConvergence or SingularMatrix.
  SolverState step(const SolverHistory& history, double dt, int order);

  const NseOptions& options() const { return options_; }
  const DofMap& velocity() const { return *velocity_; }
  const DofMap& pressure() const { return *pressure_; }
  const std::shared_ptr<const DofMap>& velocity_ptr() const { return velocity_; }
  const std::shared_ptr<const DofMap>& pressure_ptr() const { return pressure_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& viscous() const { return viscous_; }
  const SparseMatrix& divergence() const { return divergence_; }
  int pinned_pressure_dof() const { return 0; }

  /// Unconstrained momentum residual rows of the scheme at state `u`, `p_hat`:
  /// (BDFk u, phi) + c(u; u, phi) + 2 nu (D(u), D(phi)) - (p_hat, div phi) - (f, phi).
  std::vector<double> momentum_residual(const SolverHistory& history, const FemField& u,
                                        const FemField& p_hat, double t, double dt,
                                        int order) const;

 private:
  void build_pattern();
  void assemble_system(const FemField& u, double a0_over_dt);
  std::vector<double> residual(const std::vector<double>& history_term, const std::vector<double>& force,
                               const FemField& u, const FemField& p_hat, double a0_over_dt) const;

  std::shared_ptr<const DofMap> velocity_;
  std::shared_ptr<const DofMap> pressure_;
  NseOptions options_;
  SparseMatrix mass_;
  SparseMatrix viscous_;
  SparseMatrix divergence_;

  int nv_ = 0;
  int np_ = 0;
  SparseMatrix system_;
  std::vector<double> mass_values_;   // mass in the system pattern
  std::vector<double> static_values_; // viscous and pressure blocks in the system pattern
  std::vector<int> jacobian_slots_;   // triplet k of the Jacobian -> system value index
  std::vector<bool> constrained_row_;
  std::vector<int> diagonal_slot_;
  LinearSolver linear_;
};

/// Nodal-interpolant initial state at time t0.
SolverState initial_state(std::shared_ptr<const DofMap> velocity,
                          std::shared_ptr<const DofMap> pressure,
                          const std::function<Vec2(const Point&)>& u0, double t0);

/// Sets p_hat to zero integral mean.
void remove_mean(FemField& p_hat);

}  // namespace emacfem
