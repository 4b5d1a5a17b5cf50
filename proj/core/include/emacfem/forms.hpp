#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "emacfem/field.hpp"
#include "emacfem/quadrature.hpp"
#include "emacfem/sparse.hpp"

namespace emacfem {

/// Discretization of the inertia term.
///   EMAC: 2(D(u)u, v) + ((div u)u, v)
///   CONV: (u.grad u, v)
///   SKEW: (u.grad u, v) + 1/2((div u)u, v)
///   ROT:  ((curl u) x u, v), with (curl u) x u = w(-u2, u1) in 2D
///   CONS: -(u u^T, grad v)
enum class NonlinearForm { EMAC, CONV, SKEW, ROT, CONS };

std::string to_string(NonlinearForm form);
/// Throws InvalidArgument for an unknown name.
NonlinearForm parse_nonlinear_form(std::string_view name);

/// Offset of a block inside a larger system matrix.
struct BlockOffset {
  int row = 0;
  int col = 0;
};

/// Triplet-emitting assemblers; the assemble_* wrappers build standalone matrices.
void add_mass(std::vector<Triplet>& out, const DofMap& map, double scale, BlockOffset at = {});
void add_viscous(std::vector<Triplet>& out, const DofMap& velocity, double nu, BlockOffset at = {});
/// scale * B with B[q, v] = (div phi_v, psi_q).
void add_divergence(std::vector<Triplet>& out, const DofMap& velocity, const DofMap& pressure,
                    double scale, BlockOffset at = {});
/// scale * B^T.
void add_divergence_transpose(std::vector<Triplet>& out, const DofMap& velocity,
                              const DofMap& pressure, double scale, BlockOffset at = {});
void add_nonlinear_jacobian(std::vector<Triplet>& out, NonlinearForm form, const FemField& u,
                            BlockOffset at = {});
/// scale * C with C[v, w] = (u . grad psi_w, psi_v).
void add_transport(std::vector<Triplet>& out, const FemField& u, const DofMap& scalar,
                   double scale, BlockOffset at = {});

SparseMatrix assemble_mass(const DofMap& map);
/// 2 nu (D(u), D(v)).
SparseMatrix assemble_viscous(const DofMap& velocity, double nu);
SparseMatrix assemble_divergence(const DofMap& velocity, const DofMap& pressure);
SparseMatrix assemble_transport(const FemField& u, const DofMap& scalar);

/// r[v] = c_form(u; u, phi_v) for every velocity dof, constrained or not.
std::vector<double> nonlinear_residual(NonlinearForm form, const FemField& u);
/// Exact Frechet derivative of nonlinear_residual at u.
SparseMatrix nonlinear_jacobian(NonlinearForm form, const FemField& u);

/// (f, phi_v) for a vector body force.
std::vector<double> assemble_load(const DofMap& velocity, const std::function<Vec2(const Point&)>& f);

/// Pointwise inertia integrand for one form: the residual density is
/// g . v + T : grad v.
struct InertiaDensity {
  Vec2 g{};
  Mat2 t{};
};
InertiaDensity inertia_density(NonlinearForm form, const Vec2& u, const Mat2& grad_u);
/// Directional derivative of inertia_density at u along w.
InertiaDensity inertia_density_derivative(NonlinearForm form, const Vec2& u, const Mat2& grad_u,
                                          const Vec2& w, const Mat2& grad_w);

}  // namespace emacfem
