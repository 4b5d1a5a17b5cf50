#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "emacfem/dof_map.hpp"
#include "emacfem/quadrature.hpp"

namespace emacfem {

/// Coefficient vector over a DofMap.
struct FemField {
  std::shared_ptr<const DofMap> map;
  std::vector<double> coeffs;

  static FemField zeros(std::shared_ptr<const DofMap> map);
  /// Nodal interpolant of a vector function (uses component 0 for scalar maps).
  static FemField interpolate(std::shared_ptr<const DofMap> map,
                              const std::function<Vec2(const Point&)>& fn);
  static FemField interpolate_scalar(std::shared_ptr<const DofMap> map,
                                     const std::function<double(const Point&)>& fn);

  const DofMap& dofs() const { return *map; }
  int size() const { return static_cast<int>(coeffs.size()); }
};

/// Value and physical gradient of a field at one point. Scalar fields use
/// component 0 only.
struct FieldSample {
  int components = 1;
  Vec2 value{};
  Mat2 gradient{};
};

FieldSample eval_field(const FemField& field, int element, const Barycentric& point);

/// Local coefficients of one element, ordered like DofMap::element_dofs.
std::array<double, 12> gather(const FemField& field, int element);

/// Evaluation from pre-gathered local coefficients and physical basis gradients.
FieldSample eval_local(int components, int nodes, const std::array<double, 12>& local,
                       const BasisValues& basis, const std::array<Vec2, 6>& physical_gradients);

/// Overwrites Dirichlet dofs with their prescribed values at time t.
void apply_dirichlet(FemField& field, double t);

/// Integral of a scalar field over the domain.
double integrate(const FemField& field);

}  // namespace emacfem
