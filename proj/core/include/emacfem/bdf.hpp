#pragma once

#include <span>
#include <vector>

namespace emacfem {

/// BDF coefficients a_0..a_k, with df/dt(t^n) ~ sum_i a_i f^{n-i} / dt.
struct BdfScheme {
  int order = 1;
  std::vector<double> coefficients;

  double leading() const { return coefficients.front(); }
};

/// Throws InvalidArgument unless 1 <= k <= 3.
BdfScheme bdf_coefficients(int k);

/// Order used at 1-based step `step` when targeting order k: BDF1, then
/// min(2, k), then k.
int scheduled_order(int k, int step);
std::vector<int> startup_schedule(int k, int steps);

/// sum_i a_i values[i] / dt, values[0] being the newest.
double bdf_apply(const BdfScheme& scheme, std::span<const double> values, double dt);

}  // namespace emacfem
