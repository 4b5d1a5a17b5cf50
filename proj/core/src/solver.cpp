#include "emacfem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emacfem/errors.hpp"

namespace emacfem {

void SolverHistory::push(SolverState state) {
  if (!states_.empty() && !(state.t > states_.front().t)) {
    throw InvalidState("history times must increase");
  }
  states_.push_front(std::move(state));
  while (static_cast<int>(states_.size()) > kDepth) states_.pop_back();
}

const SolverState& SolverHistory::back(int i) const {
  require(i + 1);
  return states_[i];
}

void SolverHistory::require(int count) const {
  if (static_cast<int>(states_.size()) < count) {
    throw InvalidState("history holds " + std::to_string(states_.size()) + " states, " +
                       std::to_string(count) + " needed");
  }
}

void remove_mean(FemField& p_hat) {
  const double mean = integrate(p_hat) / p_hat.dofs().mesh().total_area();
  for (double& c : p_hat.coeffs) c -= mean;
}

SolverState initial_state(std::shared_ptr<const DofMap> velocity,
                          std::shared_ptr<const DofMap> pressure,
                          const std::function<Vec2(const Point&)>& u0, double t0) {
  SolverState s;
  s.t = t0;
  s.u = FemField::interpolate(std::move(velocity), u0);
  s.p_hat = FemField::zeros(std::move(pressure));
  return s;
}

namespace {

int slot_of(const SparseMatrix& a, int r, int c) {
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto first = cols.begin() + off[r];
  const auto last = cols.begin() + off[r + 1];
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) throw InvalidState("entry outside the system pattern");
  return static_cast<int>(it - cols.begin());
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

NseSolver::NseSolver(std::shared_ptr<const DofMap> velocity, std::shared_ptr<const DofMap> pressure,
                     NseOptions options)
    : velocity_(std::move(velocity)), pressure_(std::move(pressure)), options_(std::move(options)) {
  if (velocity_->kind() != SpaceKind::P2Vector || pressure_->kind() != SpaceKind::P1Scalar) {
    throw InvalidArgument("the solver needs a P2-vector velocity and a P1 pressure space");
  }
  if (&velocity_->mesh() != &pressure_->mesh()) throw InvalidArgument("velocity and pressure meshes differ");
  if (!(options_.nu > 0.0)) throw InvalidArgument("viscosity must be positive");
  if (!(options_.newton_tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
  if (!pressure_->dirichlet_dofs().empty()) throw InvalidArgument("pressure space must be unconstrained");
  nv_ = velocity_->n_dofs();
  np_ = pressure_->n_dofs();
  mass_ = assemble_mass(*velocity_);
  viscous_ = assemble_viscous(*velocity_, options_.nu);
  divergence_ = assemble_divergence(*velocity_, *pressure_);
  build_pattern();
}

void NseSolver::build_pattern() {
  const int n = nv_ + np_;
  std::vector<Triplet> mass_trip;
  add_mass(mass_trip, *velocity_, 1.0);
  std::vector<Triplet> static_trip;
  add_viscous(static_trip, *velocity_, options_.nu);
  add_divergence_transpose(static_trip, *velocity_, *pressure_, -1.0, {0, nv_});
  add_divergence(static_trip, *velocity_, *pressure_, -1.0, {nv_, 0});
  std::vector<Triplet> jac_trip;
  add_nonlinear_jacobian(jac_trip, options_.form, FemField::zeros(velocity_));

  std::vector<Triplet> all;
  all.reserve(mass_trip.size() + static_trip.size() + jac_trip.size() + n);
  for (const auto* list : {&mass_trip, &static_trip, &jac_trip}) {
    for (const auto& t : *list) all.push_back({t.row, t.col, 0.0});
  }
  for (int i = 0; i < n; ++i) all.push_back({i, i, 0.0});
  system_ = SparseMatrix::from_triplets(n, n, all);

  mass_values_.assign(system_.nnz(), 0.0);
  for (const auto& t : mass_trip) mass_values_[slot_of(system_, t.row, t.col)] += t.value;
  static_values_.assign(system_.nnz(), 0.0);
  for (const auto& t : static_trip) static_values_[slot_of(system_, t.row, t.col)] += t.value;
  jacobian_slots_.resize(jac_trip.size());
  for (std::size_t k = 0; k < jac_trip.size(); ++k) {
    jacobian_slots_[k] = slot_of(system_, jac_trip[k].row, jac_trip[k].col);
  }
  constrained_row_.assign(n, false);
  for (int d : velocity_->dirichlet_dofs()) constrained_row_[d] = true;
  constrained_row_[nv_ + pinned_pressure_dof()] = true;
  diagonal_slot_.resize(n);
  for (int i = 0; i < n; ++i) diagonal_slot_[i] = slot_of(system_, i, i);
}

void NseSolver::assemble_system(const FemField& u, double a0_over_dt) {
  auto& values = system_.values();
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = a0_over_dt * mass_values_[k] + static_values_[k];
  std::vector<Triplet> jac;
  jac.reserve(jacobian_slots_.size());
  add_nonlinear_jacobian(jac, options_.form, u);
  for (std::size_t k = 0; k < jac.size(); ++k) values[jacobian_slots_[k]] += jac[k].value;
  const auto& off = system_.row_offsets();
  for (int i = 0; i < system_.rows(); ++i) {
    if (!constrained_row_[i]) continue;
    for (int k = off[i]; k < off[i + 1]; ++k) values[k] = 0.0;
    values[diagonal_slot_[i]] = 1.0;
  }
}

std::vector<double> NseSolver::residual(const std::vector<double>& history_term,
                                        const std::vector<double>& force, const FemField& u,
                                        const FemField& p_hat, double a0_over_dt) const {
  std::vector<double> r(nv_ + np_, 0.0);
  const auto mu = mass_.multiply(u.coeffs);
  const auto au = viscous_.multiply(u.coeffs);
  const auto nu = nonlinear_residual(options_.form, u);
  const auto btp = divergence_.multiply_transpose(p_hat.coeffs);
  const auto bu = divergence_.multiply(u.coeffs);
  for (int i = 0; i < nv_; ++i) {
    r[i] = a0_over_dt * mu[i] + history_term[i] + au[i] + nu[i] - btp[i] - force[i];
  }
  for (int q = 0; q < np_; ++q) r[nv_ + q] = -bu[q];
  // Dirichlet values are imposed exactly before the first iterate, so the
  // identity rows carry no residual.
  for (int d : velocity_->dirichlet_dofs()) r[d] = 0.0;
  r[nv_ + pinned_pressure_dof()] = p_hat.coeffs[pinned_pressure_dof()];
  return r;
}

std::vector<double> NseSolver::momentum_residual(const SolverHistory& history, const FemField& u,
                                                 const FemField& p_hat, double t, double dt,
                                                 int order) const {
  const auto scheme = bdf_coefficients(order);
  history.require(order);
  std::vector<double> combo(nv_, 0.0);
  axpy(scheme.coefficients[0], u.coeffs, combo);
  for (int i = 1; i <= order; ++i) axpy(scheme.coefficients[i], history.back(i - 1).u.coeffs, combo);
  auto r = mass_.multiply(combo);
  for (double& v : r) v /= dt;
  axpy(1.0, viscous_.multiply(u.coeffs), r);
  axpy(1.0, nonlinear_residual(options_.form, u), r);
  axpy(-1.0, divergence_.multiply_transpose(p_hat.coeffs), r);
  if (options_.body_force) {
    const auto f = assemble_load(*velocity_, [&](const Point& x) { return options_.body_force(x, t); });
    axpy(-1.0, f, r);
  }
  return r;
}

SolverState NseSolver::step(const SolverHistory& history, double dt, int order) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const auto scheme = bdf_coefficients(order);
  history.require(order);
  const SolverState& prev = history.back(0);
  const double t = prev.t + dt;

  std::vector<double> combo(nv_, 0.0);
  for (int i = 1; i <= order; ++i) axpy(scheme.coefficients[i], history.back(i - 1).u.coeffs, combo);
  auto history_term = mass_.multiply(combo);
  for (double& v : history_term) v /= dt;
  std::vector<double> force(nv_, 0.0);
  if (options_.body_force) {
    force = assemble_load(*velocity_, [&](const Point& x) { return options_.body_force(x, t); });
  }
  const double a0 = scheme.leading() / dt;

  SolverState next;
  next.t = t;
  next.order = order;
  next.u = prev.u;
  if (history.size() >= 2) {
    // Linear extrapolation in time as the Newton starting value.
    const auto& older = history.back(1).u.coeffs;
    for (int i = 0; i < nv_; ++i) next.u.coeffs[i] = 2.0 * prev.u.coeffs[i] - older[i];
  }
  apply_dirichlet(next.u, t);
  next.p_hat = prev.p_hat;
  const double shift = next.p_hat.coeffs[pinned_pressure_dof()];
  for (double& c : next.p_hat.coeffs) c -= shift;

  auto r = residual(history_term, force, next.u, next.p_hat, a0);
  double rnorm = norm2(r);
  int iterations = 0;
  while (rnorm > options_.newton_tol) {
    if (iterations == options_.max_newton_iterations) {
      std::ostringstream msg;
      msg << "Newton did not converge at t = " << t << " after " << iterations
          << " iterations (residual " << rnorm << ")";
      throw NonConvergence(msg.str(), rnorm, iterations);
    }
    assemble_system(next.u, a0);
    linear_.factorize(system_);
    const auto delta = linear_.solve(r);
    for (int i = 0; i < nv_; ++i) next.u.coeffs[i] -= delta[i];
    for (int q = 0; q < np_; ++q) next.p_hat.coeffs[q] -= delta[nv_ + q];
    // identity rows can pick up round-off from the factorization
    apply_dirichlet(next.u, t);
    ++iterations;
    r = residual(history_term, force, next.u, next.p_hat, a0);
    rnorm = norm2(r);
    if (!std::isfinite(rnorm)) throw NonConvergence("Newton iterate is not finite", rnorm, iterations);
  }
  remove_mean(next.p_hat);
  next.newton_iterations = iterations;
  next.newton_residual = rnorm;
  return next;
}

}  // namespace emacfem
