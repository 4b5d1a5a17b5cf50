#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "emacfem/field.hpp"
#include "emacfem/mesh.hpp"
#include "emacfem/sparse.hpp"

namespace emacfem {

/// Indicator functions phi (P2) and psi (P1) with their recent history.
/// phi[0], psi[0] are the current values; orders[0] is the BDF order that
/// produced them (0 for the initial indicator).
struct IndicatorPair {
  int order = 1;  // target transport order j
  std::deque<double> times;
  std::deque<FemField> phi;
  std::deque<FemField> psi;
  std::deque<int> orders;

  static constexpr int kDepth = 3;

  const FemField& current_phi() const { return phi.front(); }
  const FemField& current_psi() const { return psi.front(); }
  int steps_taken() const { return steps_; }

  void push(double t, FemField phi_n, FemField psi_n, int used_order);

 private:
  int steps_ = 0;
};

/// Zero-trace P2/P1 scalar spaces for indicators; `zero_tags` lists the
/// boundary tags on which indicators vanish (every non-periodic tag).
struct IndicatorSpaces {
  std::shared_ptr<const DofMap> p2;
  std::shared_ptr<const DofMap> p1;
};
IndicatorSpaces make_indicator_spaces(std::shared_ptr<const TriMesh> mesh,
                                      const std::vector<std::string>& zero_tags);

/// Nodal 0/1 indicators of the marker's interior nodes. Throws InvalidRegion
/// when the marker has no interior node.
IndicatorPair build_indicators(const SubdomainMarker& marker, const IndicatorSpaces& spaces,
                               int order, double t0 = 0.0);

/// Galerkin transport
///   (BDFj phi, v) + (u . grad phi, v) = 0   for all v in the zero-trace space,
/// solved for phi^n with u = u^n. The first step always uses BDF1.
class IndicatorTransport {
 public:
  explicit IndicatorTransport(IndicatorSpaces spaces);

  /// Advances `pair` to t^n = pair.times[0] + dt using velocity u^n.
  void advance(IndicatorPair& pair, const FemField& u, double dt);
  /// Solves one scalar transport step on `map`; history[i] is phi^{n-1-i}.
  FemField solve_step(const DofMap& map, const std::vector<const FemField*>& history,
                      const FemField& u, double dt, int order);

 private:
  IndicatorSpaces spaces_;
  LinearSolver p2_solver_;
  LinearSolver p1_solver_;
};

/// Convenience wrapper around IndicatorTransport::advance.
IndicatorPair advance_indicator(const IndicatorPair& pair, const FemField& u, double dt);

}  // namespace emacfem
