#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "emacfem/errors.hpp"
#include "emacfem/forms.hpp"

using namespace emacfem;

namespace {

const std::vector<std::string> kSquareTags{"bottom", "right", "top", "left"};
const std::array<NonlinearForm, 5> kForms{NonlinearForm::EMAC, NonlinearForm::CONV, NonlinearForm::SKEW,
                                          NonlinearForm::ROT, NonlinearForm::CONS};

struct Spaces {
  std::shared_ptr<const TriMesh> mesh;
  std::shared_ptr<const DofMap> vel;   // zero trace on the square
  std::shared_ptr<const DofMap> free; // unconstrained P2 vector
  std::shared_ptr<const DofMap> p1;
  std::shared_ptr<const DofMap> p2;
};

Spaces spaces(std::shared_ptr<const TriMesh> mesh) {
  Spaces s;
  s.mesh = mesh;
  const auto dir = mesh->is_periodic() ? homogeneous_dirichlet({"top", "bottom"}) : homogeneous_dirichlet(kSquareTags);
  s.vel = build_dof_map(mesh, SpaceKind::P2Vector, dir);
  s.free = build_dof_map(mesh, SpaceKind::P2Vector);
  s.p1 = build_dof_map(mesh, SpaceKind::P1Scalar);
  s.p2 = build_dof_map(mesh, SpaceKind::P2Scalar);
  return s;
}

std::vector<Spaces> small_meshes() {
  return {spaces(oracle::jittered_square(2, 17)), spaces(std::make_shared<TriMesh>(build_structured_square(2, {}, true))),
          spaces(std::make_shared<TriMesh>(build_structured_square(2, {-0.5, 0.5, -0.5, 0.5})))};
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("form names") {
  for (auto f : kForms) CHECK(parse_nonlinear_form(to_string(f)) == f);
  CHECK_THROWS_AS(parse_nonlinear_form("emac"), InvalidArgument);
  CHECK_THROWS_AS(parse_nonlinear_form("LAMB"), InvalidArgument);
}

TEST_CASE("linear operators match the dense oracle") {
  for (const auto& s : small_meshes()) {
    CHECK(s.mesh->num_triangles() <= 8);
    CHECK(oracle::max_abs_diff(oracle::mass(*s.free), assemble_mass(*s.free)) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::mass(*s.p1), assemble_mass(*s.p1)) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::mass(*s.p2), assemble_mass(*s.p2)) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::viscous(*s.free, 0.7), assemble_viscous(*s.free, 0.7)) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::divergence(*s.free, *s.p1), assemble_divergence(*s.free, *s.p1)) <= 1e-12);
  }
}

TEST_CASE("mass matrix properties") {
  const auto s = spaces(oracle::jittered_square(4, 3));
  const auto m1 = assemble_mass(*s.p1);
  double total = 0.0;
  for (double v : m1.values()) total += v;
  CHECK(std::abs(total - 1.0) <= 1e-13);
  const auto m = assemble_mass(*s.free);
  for (int i = 0; i < m.rows(); ++i)
    for (int k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) CHECK(std::abs(m.values()[k] - m.at(m.col_indices()[k], i)) <= 1e-14);
  const auto u = FemField::interpolate(s.free, [](const Point&) { return Vec2{1.0, 0.0}; });
  CHECK(std::abs(dotv(u.coeffs, m.multiply(u.coeffs)) - 1.0) <= 1e-13);
}

TEST_CASE("viscous operator kernel and energy") {
  const auto s = spaces(oracle::jittered_square(4, 9));
  const auto a = assemble_viscous(*s.free, 1.0);
  const auto rot = FemField::interpolate(s.free, [](const Point& p) { return Vec2{p.y, -p.x}; });
  CHECK(norm_inf(a.multiply(rot.coeffs)) <= 1e-12);
  const auto c = FemField::interpolate(s.free, [](const Point&) { return Vec2{0.3, -1.2}; });
  CHECK(norm_inf(a.multiply(c.coeffs)) <= 1e-12);
  const auto shear = FemField::interpolate(s.free, [](const Point& p) { return Vec2{p.y, 0.0}; });
  CHECK(std::abs(dotv(shear.coeffs, a.multiply(shear.coeffs)) - 1.0) <= 1e-13);
  CHECK_THROWS_AS(assemble_viscous(*s.free, 0.0), InvalidArgument);
}

TEST_CASE("divergence operator") {
  const auto s = spaces(oracle::jittered_square(4, 2));
  const auto b = assemble_divergence(*s.free, *s.p1);
  CHECK(b.rows() == s.p1->n_dofs());
  CHECK(b.cols() == s.free->n_dofs());
  const auto rot = FemField::interpolate(s.free, [](const Point& p) { return Vec2{p.y, -p.x}; });
  CHECK(norm_inf(b.multiply(rot.coeffs)) <= 1e-13);
  const auto c = FemField::interpolate(s.free, [](const Point&) { return Vec2{2.0, 1.0}; });
  CHECK(norm_inf(b.multiply(c.coeffs)) <= 1e-13);
  const auto radial = FemField::interpolate(s.free, [](const Point& p) { return Vec2{p.x, p.y}; });
  const auto bu = b.multiply(radial.coeffs);
  double sum = 0.0;
  for (double v : bu) sum += v;
  CHECK(std::abs(sum - 2.0) <= 1e-13);
}

TEST_CASE("nonlinear residuals match the dense oracle") {
  std::mt19937 gen(123);
  for (const auto& s : small_meshes()) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto u = oracle::random_field(s.free, gen, false);
      for (auto f : kForms) {
        INFO(to_string(f));
        CHECK(oracle::max_abs_diff(oracle::residual(f, u), nonlinear_residual(f, u)) <= 1e-12);
      }
    }
  }
  // gmsh two-triangle fixture
  const auto mesh = std::make_shared<TriMesh>(load_mesh(std::string(std::getenv("EMACFEM_TEST_DATA") ? std::getenv("EMACFEM_TEST_DATA") : "tests/data") + "/two_triangles.msh"));
  const auto map = build_dof_map(mesh, SpaceKind::P2Vector);
  const auto u = oracle::random_field(map, gen, false);
  for (auto f : kForms) CHECK(oracle::max_abs_diff(oracle::residual(f, u), nonlinear_residual(f, u)) <= 1e-12);
}

TEST_CASE("special fields") {
  const auto s = spaces(oracle::jittered_square(4, 21, {-0.5, 0.5, -0.5, 0.5}));
  const auto c = FemField::interpolate(s.free, [](const Point&) { return Vec2{1.5, -0.5}; });
  for (auto f : kForms) {
    const auto r = nonlinear_residual(f, c);
    // CONS drops the boundary term, so only zero-trace test functions see zero
    for (int d = 0; d < s.free->n_dofs(); ++d)
      if (f != NonlinearForm::CONS || !s.vel->is_dirichlet(d)) CHECK(std::abs(r[d]) <= 1e-13);
  }

  const auto rot = FemField::interpolate(s.free, [](const Point& p) { return Vec2{p.y, -p.x}; });
  CHECK(norm_inf(nonlinear_residual(NonlinearForm::EMAC, rot)) <= 1e-13);
  // u.grad u = (-x, -y) for the rigid rotation
  const auto conv = nonlinear_residual(NonlinearForm::CONV, rot);
  const auto load = assemble_load(*s.free, [](const Point& p) { return Vec2{-p.x, -p.y}; });
  CHECK(oracle::max_abs_diff(conv, load) <= 1e-13);
  CHECK(norm_inf(conv) > 1e-3);

  const auto zero = FemField::zeros(s.free);
  for (auto f : kForms) {
    const auto j = nonlinear_jacobian(f, zero);
    CHECK(norm_inf(j.values()) == 0.0);
  }
}

TEST_CASE("load vector matches the oracle") {
  const auto s = spaces(oracle::jittered_square(2, 4));
  const auto f = [](const Point& p) { return Vec2{p.x * p.y, 1.0 - p.x}; };
  const auto r = assemble_load(*s.free, f);
  std::vector<double> ref(r.size(), 0.0);
  for (int t = 0; t < s.mesh->num_triangles(); ++t) {
    const oracle::Tri tri = oracle::tri_of(*s.mesh, t);
    const std::array<oracle::BPoly, 2> fp{tri.x() * tri.y(), oracle::BPoly::constant(1.0) - tri.x()};
    for (const auto& v : oracle::local_functions(*s.free, t)) ref[v.dof] += tri.integrate(fp[v.comp] * v.poly);
  }
  CHECK(oracle::max_abs_diff(ref, r) <= 1e-13);
}

TEST_CASE("EMAC energy annihilation on zero-trace fields") {
  std::mt19937 gen(5);
  for (const auto& s : small_meshes()) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto u = oracle::random_field(s.vel, gen);
      const auto r = nonlinear_residual(NonlinearForm::EMAC, u);
      double scale = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) scale += std::abs(u.coeffs[i] * r[i]);
      CHECK(std::abs(dotv(u.coeffs, r)) <= 1e-11 * scale);
    }
  }
  // CONV does not annihilate energy when div u != 0
  const auto s = spaces(oracle::jittered_square(4, 8));
  const auto u = oracle::random_field(s.vel, gen);
  const auto r = nonlinear_residual(NonlinearForm::CONV, u);
  double scale = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) scale += std::abs(u.coeffs[i] * r[i]);
  CHECK(std::abs(dotv(u.coeffs, r)) > 1e-6 * scale);
}

TEST_CASE("EMAC momentum identity for indicator test functions") {
  // c_EMAC(u; u, phi e_i) = -int u_i (u . grad phi) - 1/2 int |u|^2 d_i phi
  std::mt19937 gen(77);
  const auto s = spaces(oracle::jittered_square(4, 31));
  const auto u = oracle::random_field(s.vel, gen);
  const auto r = nonlinear_residual(NonlinearForm::EMAC, u);
  const auto scalar0 = build_dof_map(s.mesh, SpaceKind::P2Scalar, homogeneous_dirichlet(kSquareTags));
  const auto phi = oracle::random_field(scalar0, gen);
  for (int i = 0; i < 2; ++i) {
    std::vector<double> v(u.coeffs.size(), 0.0);
    for (int n = 0; n < scalar0->num_nodes(); ++n) v[s.vel->dof(n, i)] = phi.coeffs[scalar0->dof(n)];
    double ref = 0.0;
    for (int t = 0; t < s.mesh->num_triangles(); ++t) {
      const oracle::Tri tri = oracle::tri_of(*s.mesh, t);
      const auto up = oracle::field_poly(u, t);
      const auto pp = oracle::field_poly(phi, t)[0];
      const auto gx = tri.d(pp, 0), gy = tri.d(pp, 1);
      const auto ugp = up[0] * gx + up[1] * gy;
      const auto sq = up[0] * up[0] + up[1] * up[1];
      ref += tri.integrate((-1.0) * (up[i] * ugp) - 0.5 * (sq * (i == 0 ? gx : gy)));
    }
    CHECK(std::abs(dotv(v, r) - ref) <= 1e-12);
  }
}

TEST_CASE("Jacobians") {
  std::mt19937 gen(99);
  for (const auto& s : small_meshes()) {
    for (auto f : kForms) {
      INFO(to_string(f));
      const auto u = oracle::random_field(s.free, gen, false);
      const auto w = oracle::random_field(s.free, gen, false);
      const auto j = nonlinear_jacobian(f, u);
      CHECK(j.rows() == s.free->n_dofs());

      // Euler identity for quadratic maps
      const auto ju = j.multiply(u.coeffs);
      const auto r = nonlinear_residual(f, u);
      double scale = norm_inf(r);
      for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(ju[k] - 2.0 * r[k]) <= 1e-11 * scale);

      // central differences are exact up to round-off for quadratic residuals
      const auto jw = j.multiply(w.coeffs);
      for (double eps : {1e-4, 1e-5}) {
        FemField up = u, um = u;
        for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
          up.coeffs[k] += eps * w.coeffs[k];
          um.coeffs[k] -= eps * w.coeffs[k];
        }
        const auto rp = nonlinear_residual(f, up);
        const auto rm = nonlinear_residual(f, um);
        for (std::size_t k = 0; k < rp.size(); ++k) CHECK(std::abs((rp[k] - rm[k]) / (2.0 * eps) - jw[k]) <= 1e-9);
      }

      // linear in u
      const auto v = oracle::random_field(s.free, gen, false);
      FemField uv = u;
      for (std::size_t k = 0; k < u.coeffs.size(); ++k) uv.coeffs[k] += v.coeffs[k];
      const auto jv = nonlinear_jacobian(f, v);
      const auto juv = nonlinear_jacobian(f, uv);
      CHECK(juv.same_pattern(j));
      for (std::size_t k = 0; k < juv.values().size(); ++k)
        CHECK(std::abs(juv.values()[k] - j.values()[k] - jv.values()[k]) <= 1e-12);
    }
  }
}

TEST_CASE("Jacobian triplet order is fixed") {
  std::mt19937 gen(1);
  const auto s = spaces(oracle::jittered_square(2, 1));
  const auto u = oracle::random_field(s.free, gen, false);
  std::vector<Triplet> a, b;
  add_nonlinear_jacobian(a, NonlinearForm::EMAC, u);
  add_nonlinear_jacobian(b, NonlinearForm::EMAC, FemField::zeros(s.free));
  CHECK(a.size() == 144 * static_cast<std::size_t>(s.mesh->num_triangles()));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].row == b[k].row);
    CHECK(a[k].col == b[k].col);
  }
}

TEST_CASE("block offsets and scaling") {
  const auto s = spaces(oracle::jittered_square(2, 6));
  std::vector<Triplet> t;
  add_divergence_transpose(t, *s.free, *s.p1, -2.0, {3, 5});
  const auto big = SparseMatrix::from_triplets(s.free->n_dofs() + 3, s.p1->n_dofs() + 5, t);
  const auto b = assemble_divergence(*s.free, *s.p1);
  for (int q = 0; q < b.rows(); ++q)
    for (int v = 0; v < b.cols(); ++v) CHECK(big.at(v + 3, q + 5) == doctest::Approx(-2.0 * b.at(q, v)).epsilon(1e-14));
}

TEST_CASE("transport operator") {
  std::mt19937 gen(8);
  for (const auto& s : small_meshes()) {
    const auto u = oracle::random_field(s.free, gen, false);
    CHECK(oracle::max_abs_diff(oracle::transport(u, *s.p2), assemble_transport(u, *s.p2)) <= 1e-12);
    CHECK(oracle::max_abs_diff(oracle::transport(u, *s.p1), assemble_transport(u, *s.p1)) <= 1e-12);
    const auto c = assemble_transport(FemField::zeros(s.free), *s.p2);
    CHECK(norm_inf(c.values()) == 0.0);
  }
  // constant scalar: C phi = 0
  const auto s = spaces(oracle::jittered_square(4, 12));
  const auto u = oracle::random_field(s.free, gen, false);
  FemField one = FemField::zeros(s.p2);
  std::fill(one.coeffs.begin(), one.coeffs.end(), 1.0);
  CHECK(norm_inf(assemble_transport(u, *s.p2).multiply(one.coeffs)) <= 1e-13);
}
