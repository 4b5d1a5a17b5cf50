#include <cmath>
#include <random>

#include "bpoly.hpp"
#include "doctest.h"
#include "emacfem/errors.hpp"
#include "emacfem/field.hpp"
#include "emacfem/quadrature.hpp"

using namespace emacfem;

namespace {

double monomial_exact(int a, int b) {
  return oracle::factorial(a) * oracle::factorial(b) / oracle::factorial(a + b + 2);
}

double monomial_quadrature(const QuadratureRule& r, int a, int b) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][1], a) * std::pow(r.points[q][2], b);
  return s;
}

// structured mesh with interior vertices moved so elements are not all alike
std::shared_ptr<TriMesh> jittered_mesh(int n, unsigned seed) {
  const auto base = build_structured_square(n);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> jit(-0.2 / n, 0.2 / n);
  auto v = base.vertices();
  for (int i = 0; i < base.num_vertices(); ++i) {
    if (base.boundary_vertex_mask()[i]) continue;
    v[i].x += jit(gen);
    v[i].y += jit(gen);
  }
  return std::make_shared<TriMesh>(TriMesh::create(v, base.triangles(), base.boundary_tag_map()));
}

}  // namespace

TEST_CASE("rule table basics") {
  CHECK(rule(1).size() == 1);
  CHECK(rule(1).weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  for (int d = 1; d <= 10; ++d) {
    const auto& r = rule(d);
    CHECK(r.exact_degree >= d);
    double w = 0.0;
    for (int q = 0; q < r.size(); ++q) {
      w += r.weights[q];
      for (double b : r.points[q]) CHECK(b > 0.0);
      CHECK(std::abs(r.points[q][0] + r.points[q][1] + r.points[q][2] - 1.0) <= 1e-15);
    }
    CHECK(std::abs(w - 0.5) <= 1e-15);
  }
  CHECK_THROWS_AS(rule(0), InvalidArgument);
  CHECK_THROWS_AS(rule(11), InvalidArgument);
}

TEST_CASE("degree 6 rule on x^3 y^2") {
  CHECK(std::abs(monomial_quadrature(rule(6), 3, 2) - 12.0 / 5040.0) <= 1e-13 * 12.0 / 5040.0);
}

TEST_CASE("monomial exactness through each rule's degree") {
  for (int d = 1; d <= 10; ++d) {
    const auto& r = rule(d);
    for (int a = 0; a <= r.exact_degree; ++a) {
      for (int b = 0; a + b <= r.exact_degree; ++b) {
        const double exact = monomial_exact(a, b);
        CHECK(std::abs(monomial_quadrature(r, a, b) - exact) <= 1e-13 * exact);
      }
    }
  }
}

TEST_CASE("random polynomials match the monomial oracle") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int d = 1; d <= 10; ++d) {
    const auto& r = rule(d);
    for (int trial = 0; trial < 5; ++trial) {
      double exact = 0.0, quad = 0.0, scale = 0.0;
      for (int a = 0; a <= d; ++a) {
        for (int b = 0; a + b <= d; ++b) {
          const double c = coef(gen);
          exact += c * monomial_exact(a, b);
          quad += c * monomial_quadrature(r, a, b);
          scale += std::abs(c) * monomial_exact(a, b);
        }
      }
      CHECK(std::abs(quad - exact) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("gauss legendre") {
  for (int n = 1; n <= 4; ++n) {
    const auto& g = gauss_legendre(n);
    for (int p = 0; p < 2 * n; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.points.size(); ++i) s += g.weights[i] * std::pow(g.points[i], p);
      CHECK(std::abs(s - 1.0 / (p + 1)) <= 1e-15);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(5), InvalidArgument);
}

TEST_CASE("nodal basis") {
  const std::array<Barycentric, 6> nodes{Barycentric{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                         {0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}};
  for (int i = 0; i < 3; ++i) {
    const auto b = eval_basis(1, nodes[i]);
    CHECK(b.count == 3);
    for (int j = 0; j < 3; ++j) CHECK(b.values[j] == (i == j ? 1.0 : 0.0));
  }
  for (int i = 0; i < 6; ++i) {
    const auto b = eval_basis(2, nodes[i]);
    CHECK(b.count == 6);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(b.values[j] - (i == j ? 1.0 : 0.0)) <= 1e-15);
  }
  CHECK(eval_basis(SpaceKind::P2Vector, nodes[0]).count == 6);
  CHECK_THROWS_AS(eval_basis(3, nodes[0]), InvalidArgument);
}

TEST_CASE("partition of unity and gradients against the barycentric oracle") {
  const oracle::Tri ref({Point{0, 0}, Point{1, 0}, Point{0, 1}});
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(gen), b = u(gen);
    if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
    const Barycentric p{1.0 - a - b, a, b};
    for (int deg : {1, 2}) {
      const auto v = eval_basis(deg, p);
      double sum = 0.0;
      Vec2 gsum{0, 0};
      for (int i = 0; i < v.count; ++i) {
        sum += v.values[i];
        gsum[0] += v.gradients[i][0];
        gsum[1] += v.gradients[i][1];
        const auto phi = oracle::basis(deg, i);
        CHECK(std::abs(v.values[i] - phi.at(p)) <= 1e-14);
        CHECK(std::abs(v.gradients[i][0] - ref.d(phi, 0).at(p)) <= 1e-13);
        CHECK(std::abs(v.gradients[i][1] - ref.d(phi, 1).at(p)) <= 1e-13);
      }
      CHECK(std::abs(sum - 1.0) <= 1e-14);
      CHECK(std::abs(gsum[0]) <= 1e-13);
      CHECK(std::abs(gsum[1]) <= 1e-13);
    }
  }
}

TEST_CASE("element geometry") {
  const auto mesh = jittered_mesh(3, 11);
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const auto g = element_geometry(*mesh, t);
    CHECK(std::abs(g.det - 2.0 * mesh->signed_area(t)) <= 1e-15);
    CHECK(g.det > 0.0);
    const auto& tri = mesh->triangle(t);
    const Point p = g.map({0.0, 1.0, 0.0});
    CHECK(std::abs(p.x - mesh->vertex(tri[1]).x) <= 1e-15);
    CHECK(std::abs(p.y - mesh->vertex(tri[1]).y) <= 1e-15);
  }
}

TEST_CASE("field evaluation") {
  const auto mesh = jittered_mesh(4, 5);
  const auto p2 = build_dof_map(mesh, SpaceKind::P2Scalar);
  const auto v2 = build_dof_map(mesh, SpaceKind::P2Vector);
  const auto& r = rule(6);

  SUBCASE("constant") {
    FemField c = FemField::zeros(p2);
    std::fill(c.coeffs.begin(), c.coeffs.end(), 2.5);
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const auto s = eval_field(c, t, r.points[0]);
      CHECK(std::abs(s.value[0] - 2.5) <= 1e-14);
      CHECK(std::abs(s.gradient[0][0]) <= 1e-12);
      CHECK(std::abs(s.gradient[0][1]) <= 1e-12);
    }
    CHECK(std::abs(integrate(c) - 2.5) <= 1e-13);
  }

  SUBCASE("quadratic reproduced exactly") {
    const auto f = FemField::interpolate_scalar(p2, [](const Point& p) { return p.x * p.x - 0.5 * p.x * p.y + p.y; });
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const auto g = element_geometry(*mesh, t);
      for (int q = 0; q < r.size(); ++q) {
        const Point p = g.map(r.points[q]);
        const auto s = eval_field(f, t, r.points[q]);
        CHECK(std::abs(s.value[0] - (p.x * p.x - 0.5 * p.x * p.y + p.y)) <= 1e-13);
        CHECK(std::abs(s.gradient[0][0] - (2.0 * p.x - 0.5 * p.y)) <= 1e-12);
        CHECK(std::abs(s.gradient[0][1] - (-0.5 * p.x + 1.0)) <= 1e-12);
      }
    }
    // int_0^1 int_0^1 (x^2 - xy/2 + y) = 1/3 - 1/8 + 1/2
    CHECK(std::abs(integrate(f) - (1.0 / 3.0 - 0.125 + 0.5)) <= 1e-13);
  }

  SUBCASE("rigid rotation has zero symmetric gradient") {
    const auto u = FemField::interpolate(v2, [](const Point& p) { return Vec2{p.y, -p.x}; });
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      for (int q = 0; q < r.size(); ++q) {
        const auto s = eval_field(u, t, r.points[q]);
        const Mat2 d = symmetric_part(s.gradient);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) CHECK(std::abs(d[i][j]) <= 1e-12);
        CHECK(std::abs(s.gradient[0][1] - 1.0) <= 1e-12);
      }
    }
  }
}
