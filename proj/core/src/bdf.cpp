#include "emacfem/bdf.hpp"

#include <algorithm>
#include <string>

#include "emacfem/errors.hpp"

namespace emacfem {

BdfScheme bdf_coefficients(int k) {
  switch (k) {
    case 1:
      return {1, {1.0, -1.0}};
    case 2:
      return {2, {1.5, -2.0, 0.5}};
    case 3:
      return {3, {11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0}};
    default:
      throw InvalidArgument("BDF order must be 1, 2 or 3, got " + std::to_string(k));
  }
}

int scheduled_order(int k, int step) {
  if (k < 1 || k > 3) throw InvalidArgument("BDF order must be 1, 2 or 3");
  if (step <= 1) return 1;
  if (step == 2) return std::min(2, k);
  return k;
}

std::vector<int> startup_schedule(int k, int steps) {
  std::vector<int> out;
  out.reserve(std::max(steps, 0));
  for (int s = 1; s <= steps; ++s) out.push_back(scheduled_order(k, s));
  return out;
}

double bdf_apply(const BdfScheme& scheme, std::span<const double> values, double dt) {
  if (values.size() < scheme.coefficients.size()) {
    throw InvalidState("BDF" + std::to_string(scheme.order) + " needs " +
                       std::to_string(scheme.coefficients.size()) + " values");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < scheme.coefficients.size(); ++i) s += scheme.coefficients[i] * values[i];
  return s / dt;
}

}  // namespace emacfem
