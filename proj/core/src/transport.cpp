#include "emacfem/transport.hpp"

#include "emacfem/bdf.hpp"
#include "emacfem/errors.hpp"
#include "emacfem/forms.hpp"

namespace emacfem {

void IndicatorPair::push(double t, FemField phi_n, FemField psi_n, int used_order) {
  if (!times.empty() && !(t > times.front())) throw InvalidState("indicator times must increase");
  times.push_front(t);
  phi.push_front(std::move(phi_n));
  psi.push_front(std::move(psi_n));
  orders.push_front(used_order);
  while (static_cast<int>(times.size()) > kDepth) {
    times.pop_back();
    phi.pop_back();
    psi.pop_back();
    orders.pop_back();
  }
  if (used_order > 0) ++steps_;
}

IndicatorSpaces make_indicator_spaces(std::shared_ptr<const TriMesh> mesh,
                                      const std::vector<std::string>& zero_tags) {
  const auto spec = homogeneous_dirichlet(zero_tags);
  return {build_dof_map(mesh, SpaceKind::P2Scalar, spec), build_dof_map(mesh, SpaceKind::P1Scalar, spec)};
}

IndicatorPair build_indicators(const SubdomainMarker& marker, const IndicatorSpaces& spaces, int order,
                               double t0) {
  if (order < 1 || order > 2) throw InvalidArgument("transport order must be 1 or 2");
  if (marker.interior_p2_nodes.empty() || marker.interior_p1_nodes.empty()) {
    throw InvalidRegion("subdomain has no interior node");
  }
  FemField phi = FemField::zeros(spaces.p2);
  for (int node : marker.interior_p2_nodes) {
    const int d = spaces.p2->dof(node);
    if (spaces.p2->is_dirichlet(d)) throw InvalidRegion("subdomain interior node lies on a constrained boundary");
    phi.coeffs[d] = 1.0;
  }
  FemField psi = FemField::zeros(spaces.p1);
  for (int node : marker.interior_p1_nodes) {
    const int d = spaces.p1->dof(node);
    if (spaces.p1->is_dirichlet(d)) throw InvalidRegion("subdomain interior node lies on a constrained boundary");
    psi.coeffs[d] = 1.0;
  }
  IndicatorPair pair;
  pair.order = order;
  pair.push(t0, std::move(phi), std::move(psi), 0);
  return pair;
}

IndicatorTransport::IndicatorTransport(IndicatorSpaces spaces) : spaces_(std::move(spaces)) {}

FemField IndicatorTransport::solve_step(const DofMap& map, const std::vector<const FemField*>& history,
                                        const FemField& u, double dt, int order) {
  const auto scheme = bdf_coefficients(order);
  if (static_cast<int>(history.size()) < order) throw InvalidState("transport history too short");
  const int n = map.n_dofs();

  std::vector<Triplet> trip;
  add_mass(trip, map, scheme.leading() / dt);
  add_transport(trip, u, map, 1.0);
  for (int d : map.dirichlet_dofs()) trip.push_back({d, d, 0.0});
  auto a = SparseMatrix::from_triplets(n, n, trip);

  std::vector<double> combo(n, 0.0);
  for (int i = 1; i <= order; ++i) {
    const auto& h = history[i - 1]->coeffs;
    for (int k = 0; k < n; ++k) combo[k] -= scheme.coefficients[i] * h[k] / dt;
  }
  std::vector<Triplet> mass_trip;
  add_mass(mass_trip, map, 1.0);
  auto rhs = SparseMatrix::from_triplets(n, n, mass_trip).multiply(combo);

  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  auto& vals = a.values();
  for (int d : map.dirichlet_dofs()) {
    for (int k = off[d]; k < off[d + 1]; ++k) vals[k] = cols[k] == d ? 1.0 : 0.0;
    rhs[d] = 0.0;
  }

  LinearSolver& solver = map.degree() == 2 ? p2_solver_ : p1_solver_;
  solver.factorize(a);
  FemField out = FemField::zeros(history.front()->map);
  out.coeffs = solver.solve(rhs);
  for (int d : map.dirichlet_dofs()) out.coeffs[d] = 0.0;
  return out;
}

void IndicatorTransport::advance(IndicatorPair& pair, const FemField& u, double dt) {
  if (pair.times.empty()) throw InvalidState("indicator pair has no initial value");
  const int order = scheduled_order(pair.order, pair.steps_taken() + 1);
  std::vector<const FemField*> phi_hist;
  std::vector<const FemField*> psi_hist;
  for (int i = 0; i < order; ++i) {
    phi_hist.push_back(&pair.phi[i]);
    psi_hist.push_back(&pair.psi[i]);
  }
  auto phi = solve_step(*spaces_.p2, phi_hist, u, dt, order);
  auto psi = solve_step(*spaces_.p1, psi_hist, u, dt, order);
  pair.push(pair.times.front() + dt, std::move(phi), std::move(psi), order);
}

IndicatorPair advance_indicator(const IndicatorPair& pair, const FemField& u, double dt) {
  IndicatorTransport transport({pair.current_phi().map, pair.current_psi().map});
  IndicatorPair out = pair;
  transport.advance(out, u, dt);
  return out;
}

}  // namespace emacfem
