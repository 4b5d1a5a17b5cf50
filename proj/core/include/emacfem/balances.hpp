#pragma once

#include <vector>

#include "emacfem/forms.hpp"
#include "emacfem/mesh.hpp"
#include "emacfem/solver.hpp"
#include "emacfem/transport.hpp"

namespace emacfem {

/// Physical pressure recovered from the solver's pressure unknown at a point:
/// EMAC p_hat + |u|^2/2, ROT P - |u|^2/2, CONV/SKEW/CONS p_hat.
double recovered_pressure(NonlinearForm form, double p_hat, const Vec2& u);

struct BalanceContext {
  NonlinearForm form = NonlinearForm::EMAC;
  double nu = 1.0;
  double dt = 1.0;
  const QuadratureRule* quadrature = nullptr;  // default: rule(kDefaultQuadratureDegree)
};

/// Eulerian weak-form errors for the newest state, using the state's BDF tag
/// and a static indicator.
Vec2 eulerian_momentum_error(const SolverHistory& history, const FemField& phi, const BalanceContext& ctx);
double eulerian_angular_error(const SolverHistory& history, const FemField& psi, const BalanceContext& ctx);

/// Lagrangian errors; the indicator pair must be advanced to the newest state's time.
Vec2 lagrangian_momentum_error(const SolverHistory& history, const IndicatorPair& indicators,
                               const BalanceContext& ctx);
double lagrangian_angular_error(const SolverHistory& history, const IndicatorPair& indicators,
                                const BalanceContext& ctx);

struct TraditionalErrors {
  Vec2 momentum{};
  double angular = 0.0;
};
/// Volume change over omega_h minus boundary fluxes through its edges
/// (4-point Gauss per edge, inside-element traces).
TraditionalErrors traditional_eulerian_errors(const SolverHistory& history, const SubdomainMarker& marker,
                                              const BalanceContext& ctx);

struct GlobalBalances {
  double energy = 0.0;
  Vec2 momentum{};
  double angular = 0.0;
};
GlobalBalances global_balances(const SolverState& state);

struct LagrangianErrors {
  int order = 0;  // transport order j the indicator was advanced with
  Vec2 momentum{};
  double angular = 0.0;
};

/// One row of diagnostics for a time step.
struct BalanceReport {
  int step = 0;
  double t = 0.0;
  int order = 0;  // solver BDF order k of this step
  Vec2 e_E_mom{};
  double e_E_am = 0.0;
  std::vector<LagrangianErrors> lagrangian;  // one per transport order; empty when disabled
  Vec2 e_trad_mom{};
  double e_trad_am = 0.0;
  GlobalBalances global;
  int newton_iterations = 0;
  double newton_residual = 0.0;
};

}  // namespace emacfem
