#pragma once

#include <array>
#include <vector>

#include "emacfem/dof_map.hpp"
#include "emacfem/geometry.hpp"
#include "emacfem/mesh.hpp"

namespace emacfem {

using Barycentric = std::array<double, 3>;

/// Symmetric rule on the reference triangle (0,0), (1,0), (0,1).
struct QuadratureRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;  // sum to 1/2
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Smallest tabulated rule integrating total degree `exact_degree` exactly,
/// 1 <= exact_degree <= 10.
const QuadratureRule& rule(int exact_degree);

/// Exactness used by every assembled form and diagnostic.
inline constexpr int kDefaultQuadratureDegree = 6;

/// Gauss-Legendre rule on [0, 1] (weights sum to 1).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
const LineRule& gauss_legendre(int npoints);

/// Nodal Lagrange basis on the reference triangle. Reference gradients are
/// with respect to (xi, eta) where barycentric = (1 - xi - eta, xi, eta).
struct BasisValues {
  int count = 0;
  std::array<double, 6> values{};
  std::array<Vec2, 6> gradients{};
};

BasisValues eval_basis(int degree, const Barycentric& point);
BasisValues eval_basis(SpaceKind kind, const Barycentric& point);

/// Affine map of one triangle.
struct ElementGeometry {
  Point origin;
  Mat2 jacobian{};           // columns are the edge vectors p1 - p0, p2 - p0
  Mat2 inverse_transpose{};  // maps reference gradients to physical ones
  double det = 0.0;          // twice the triangle area

  Point map(const Barycentric& b) const;
  Vec2 physical_gradient(const Vec2& reference) const { return emacfem::apply(inverse_transpose, reference); }
};

ElementGeometry element_geometry(const TriMesh& mesh, int t);

/// Basis values and reference gradients tabulated at every point of a rule.
struct BasisTable {
  int degree = 0;
  int count = 0;
  std::vector<BasisValues> at;  // one per quadrature point

  BasisTable(int degree, const QuadratureRule& rule);
};

}  // namespace emacfem
