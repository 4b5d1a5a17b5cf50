#include "emacfem/balances.hpp"

#include <algorithm>

#include "emacfem/bdf.hpp"
#include "emacfem/errors.hpp"

namespace emacfem {

double recovered_pressure(NonlinearForm form, double p_hat, const Vec2& u) {
  switch (form) {
    case NonlinearForm::EMAC:
      return p_hat + 0.5 * dot(u, u);
    case NonlinearForm::ROT:
      return p_hat - 0.5 * dot(u, u);
    default:
      return p_hat;
  }
}

namespace {

const QuadratureRule& quadrature_of(const BalanceContext& ctx) {
  return ctx.quadrature ? *ctx.quadrature : rule(kDefaultQuadratureDegree);
}

/// Shared per-element evaluation: basis tables of P2 and P1 at the rule's points.
struct Tables {
  const QuadratureRule& q;
  BasisTable p2;
  BasisTable p1;

  explicit Tables(const QuadratureRule& rule) : q(rule), p2(2, rule), p1(1, rule) {}

  const BasisTable& of(int degree) const { return degree == 1 ? p1 : p2; }
};

struct ElementGrads {
  ElementGeometry geo;
  std::array<Vec2, 6> p2{};
  std::array<Vec2, 6> p1{};

  ElementGrads(const TriMesh& mesh, int t) : geo(element_geometry(mesh, t)) {}

  void at(const Tables& tab, int k) {
    for (int a = 0; a < 6; ++a) p2[a] = geo.physical_gradient(tab.p2.at[k].gradients[a]);
    for (int a = 0; a < 3; ++a) p1[a] = geo.physical_gradient(tab.p1.at[k].gradients[a]);
  }
  const std::array<Vec2, 6>& of(int degree) const { return degree == 1 ? p1 : p2; }
};

FieldSample sample(const FemField& f, const std::array<double, 12>& local, const Tables& tab,
                   const ElementGrads& g, int k) {
  const DofMap& m = f.dofs();
  return eval_local(m.components(), m.nodes_per_element(), local, tab.of(m.degree()).at[k], g.of(m.degree()));
}

/// Elements on which at least one of the scalar fields is not identically zero.
std::vector<int> support(const std::vector<const FemField*>& fields) {
  const TriMesh& mesh = fields.front()->dofs().mesh();
  std::vector<int> out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    bool any = false;
    for (const FemField* f : fields) {
      const auto dofs = f->dofs().element_dofs(t);
      for (int a = 0; a < f->dofs().dofs_per_element() && !any; ++a) any = f->coeffs[dofs[a]] != 0.0;
      if (any) break;
    }
    if (any) out.push_back(t);
  }
  return out;
}

int newest_order(const SolverHistory& history) {
  const int k = history.back(0).order;
  if (k < 1) throw InvalidState("newest state carries no BDF order");
  history.require(k + 1);
  return k;
}

Vec2 x_of(const Point& p) { return {p.x, p.y}; }

/// Momentum flux density for the weak forms tested with weight gradient g:
/// 2 nu D(u) g - p g - u (u . g).
Vec2 weak_flux(double nu, const FieldSample& u, double p, const Vec2& g) {
  const Vec2 dg = emacfem::apply(symmetric_part(u.gradient), g);
  const double ug = dot(u.value, g);
  return {2.0 * nu * dg[0] - p * g[0] - u.value[0] * ug, 2.0 * nu * dg[1] - p * g[1] - u.value[1] * ug};
}

}  // namespace

Vec2 eulerian_momentum_error(const SolverHistory& history, const FemField& phi, const BalanceContext& ctx) {
  const int k = newest_order(history);
  const auto scheme = bdf_coefficients(k);
  const Tables tab(quadrature_of(ctx));
  const FemField& p_hat = history.back(0).p_hat;
  const TriMesh& mesh = phi.dofs().mesh();
  std::vector<Vec2> moments(k + 1, Vec2{});
  Vec2 flux{};
  for (int t : support({&phi})) {
    ElementGrads g(mesh, t);
    const auto lphi = gather(phi, t);
    const auto lp = gather(p_hat, t);
    std::vector<std::array<double, 12>> lu(k + 1);
    for (int i = 0; i <= k; ++i) lu[i] = gather(history.back(i).u, t);
    for (int q = 0; q < tab.q.size(); ++q) {
      g.at(tab, q);
      const double w = tab.q.weights[q] * g.geo.det;
      const auto f = sample(phi, lphi, tab, g, q);
      for (int i = 0; i <= k; ++i) {
        const auto u = sample(history.back(i).u, lu[i], tab, g, q);
        moments[i][0] += w * f.value[0] * u.value[0];
        moments[i][1] += w * f.value[0] * u.value[1];
      }
      const auto u = sample(history.back(0).u, lu[0], tab, g, q);
      const double p = recovered_pressure(ctx.form, sample(p_hat, lp, tab, g, q).value[0], u.value);
      const Vec2 fl = weak_flux(ctx.nu, u, p, f.gradient[0]);
      flux[0] += w * fl[0];
      flux[1] += w * fl[1];
    }
  }
  Vec2 e{};
  for (int c = 0; c < 2; ++c) {
    std::vector<double> m(k + 1);
    for (int i = 0; i <= k; ++i) m[i] = moments[i][c];
    e[c] = bdf_apply(scheme, m, ctx.dt) + flux[c];
  }
  return e;
}

double eulerian_angular_error(const SolverHistory& history, const FemField& psi, const BalanceContext& ctx) {
  const int k = newest_order(history);
  const auto scheme = bdf_coefficients(k);
  const Tables tab(quadrature_of(ctx));
  const FemField& p_hat = history.back(0).p_hat;
  const TriMesh& mesh = psi.dofs().mesh();
  std::vector<double> moments(k + 1, 0.0);
  double flux = 0.0;
  for (int t : support({&psi})) {
    ElementGrads g(mesh, t);
    const auto lpsi = gather(psi, t);
    const auto lp = gather(p_hat, t);
    std::vector<std::array<double, 12>> lu(k + 1);
    for (int i = 0; i <= k; ++i) lu[i] = gather(history.back(i).u, t);
    for (int q = 0; q < tab.q.size(); ++q) {
      g.at(tab, q);
      const double w = tab.q.weights[q] * g.geo.det;
      const Vec2 x = x_of(g.geo.map(tab.q.points[q]));
      const auto s = sample(psi, lpsi, tab, g, q);
      for (int i = 0; i <= k; ++i) {
        const auto u = sample(history.back(i).u, lu[i], tab, g, q);
        moments[i] += w * s.value[0] * cross(u.value, x);
      }
      const auto u = sample(history.back(0).u, lu[0], tab, g, q);
      const double p = recovered_pressure(ctx.form, sample(p_hat, lp, tab, g, q).value[0], u.value);
      flux += w * cross(weak_flux(ctx.nu, u, p, s.gradient[0]), x);
    }
  }
  return bdf_apply(scheme, moments, ctx.dt) + flux;
}

namespace {

int indicator_order(const IndicatorPair& ind, double t) {
  if (ind.times.empty() || ind.times.front() != t) {
    throw InvalidState("indicator pair is not at the newest solver time");
  }
  const int j = ind.orders.front();
  if (j < 1) throw InvalidState("indicator pair has not been advanced");
  if (static_cast<int>(ind.times.size()) < j + 1) throw InvalidState("indicator history too short");
  return j;
}

}  // namespace

Vec2 lagrangian_momentum_error(const SolverHistory& history, const IndicatorPair& ind,
                               const BalanceContext& ctx) {
  const int k = newest_order(history);
  const int j = indicator_order(ind, history.back(0).t);
  const auto sk = bdf_coefficients(k);
  const auto sj = bdf_coefficients(j);
  const Tables tab(quadrature_of(ctx));
  const FemField& p_hat = history.back(0).p_hat;
  const TriMesh& mesh = p_hat.dofs().mesh();
  std::vector<const FemField*> phis;
  for (int i = 0; i <= j; ++i) phis.push_back(&ind.phi[i]);

  // a[i] = int phi^n u^{n-i}, b[i] = int phi^{n-i} u^n
  std::vector<Vec2> a(k + 1, Vec2{}), b(j + 1, Vec2{});
  Vec2 flux{};
  for (int t : support(phis)) {
    ElementGrads g(mesh, t);
    const auto lp = gather(p_hat, t);
    std::vector<std::array<double, 12>> lu(k + 1), lphi(j + 1);
    for (int i = 0; i <= k; ++i) lu[i] = gather(history.back(i).u, t);
    for (int i = 0; i <= j; ++i) lphi[i] = gather(*phis[i], t);
    for (int q = 0; q < tab.q.size(); ++q) {
      g.at(tab, q);
      const double w = tab.q.weights[q] * g.geo.det;
      const auto un = sample(history.back(0).u, lu[0], tab, g, q);
      const auto fn = sample(*phis[0], lphi[0], tab, g, q);
      for (int i = 0; i <= k; ++i) {
        const auto u = sample(history.back(i).u, lu[i], tab, g, q);
        a[i][0] += w * fn.value[0] * u.value[0];
        a[i][1] += w * fn.value[0] * u.value[1];
      }
      for (int i = 0; i <= j; ++i) {
        const auto f = sample(*phis[i], lphi[i], tab, g, q);
        b[i][0] += w * f.value[0] * un.value[0];
        b[i][1] += w * f.value[0] * un.value[1];
      }
      const double p = recovered_pressure(ctx.form, sample(p_hat, lp, tab, g, q).value[0], un.value);
      const Vec2 dg = emacfem::apply(symmetric_part(un.gradient), fn.gradient[0]);
      for (int c = 0; c < 2; ++c) flux[c] += w * (2.0 * ctx.nu * dg[c] - p * fn.gradient[0][c]);
    }
  }
  Vec2 e{};
  for (int c = 0; c < 2; ++c) {
    std::vector<double> va(k + 1), vb(j + 1);
    for (int i = 0; i <= k; ++i) va[i] = a[i][c];
    for (int i = 0; i <= j; ++i) vb[i] = b[i][c];
    e[c] = bdf_apply(sk, va, ctx.dt) + bdf_apply(sj, vb, ctx.dt) + flux[c];
  }
  return e;
}

double lagrangian_angular_error(const SolverHistory& history, const IndicatorPair& ind,
                                const BalanceContext& ctx) {
  const int k = newest_order(history);
  const int j = indicator_order(ind, history.back(0).t);
  const auto sk = bdf_coefficients(k);
  const auto sj = bdf_coefficients(j);
  const Tables tab(quadrature_of(ctx));
  const FemField& p_hat = history.back(0).p_hat;
  const TriMesh& mesh = p_hat.dofs().mesh();
  std::vector<const FemField*> psis;
  for (int i = 0; i <= j; ++i) psis.push_back(&ind.psi[i]);

  std::vector<double> a(k + 1, 0.0), b(j + 1, 0.0);
  double flux = 0.0;
  for (int t : support(psis)) {
    ElementGrads g(mesh, t);
    const auto lp = gather(p_hat, t);
    std::vector<std::array<double, 12>> lu(k + 1), lpsi(j + 1);
    for (int i = 0; i <= k; ++i) lu[i] = gather(history.back(i).u, t);
    for (int i = 0; i <= j; ++i) lpsi[i] = gather(*psis[i], t);
    for (int q = 0; q < tab.q.size(); ++q) {
      g.at(tab, q);
      const double w = tab.q.weights[q] * g.geo.det;
      const Vec2 x = x_of(g.geo.map(tab.q.points[q]));
      const auto un = sample(history.back(0).u, lu[0], tab, g, q);
      const auto sn = sample(*psis[0], lpsi[0], tab, g, q);
      for (int i = 0; i <= k; ++i) {
        const auto u = sample(history.back(i).u, lu[i], tab, g, q);
        a[i] += w * sn.value[0] * cross(u.value, x);
      }
      const double lx = cross(un.value, x);
      for (int i = 0; i <= j; ++i) b[i] += w * sample(*psis[i], lpsi[i], tab, g, q).value[0] * lx;
      const double p = recovered_pressure(ctx.form, sample(p_hat, lp, tab, g, q).value[0], un.value);
      const Vec2 dg = emacfem::apply(symmetric_part(un.gradient), sn.gradient[0]);
      const Vec2 fl{2.0 * ctx.nu * dg[0] - p * sn.gradient[0][0], 2.0 * ctx.nu * dg[1] - p * sn.gradient[0][1]};
      flux += w * cross(fl, x);
    }
  }
  return bdf_apply(sk, a, ctx.dt) + bdf_apply(sj, b, ctx.dt) + flux;
}

TraditionalErrors traditional_eulerian_errors(const SolverHistory& history, const SubdomainMarker& marker,
                                              const BalanceContext& ctx) {
  const int k = newest_order(history);
  const auto scheme = bdf_coefficients(k);
  const Tables tab(quadrature_of(ctx));
  const FemField& p_hat = history.back(0).p_hat;
  const FemField& un = history.back(0).u;
  const TriMesh& mesh = p_hat.dofs().mesh();

  std::vector<Vec2> mom(k + 1, Vec2{});
  std::vector<double> ang(k + 1, 0.0);
  for (int t : marker.element_set) {
    ElementGrads g(mesh, t);
    for (int i = 0; i <= k; ++i) {
      const auto lu = gather(history.back(i).u, t);
      for (int q = 0; q < tab.q.size(); ++q) {
        g.at(tab, q);
        const double w = tab.q.weights[q] * g.geo.det;
        const Vec2 x = x_of(g.geo.map(tab.q.points[q]));
        const auto u = sample(history.back(i).u, lu, tab, g, q);
        mom[i][0] += w * u.value[0];
        mom[i][1] += w * u.value[1];
        ang[i] += w * cross(u.value, x);
      }
    }
  }

  const LineRule& line = gauss_legendre(4);
  Vec2 flux{};
  double flux_ang = 0.0;
  for (const auto& be : marker.boundary) {
    const int t = be.inside_triangle;
    const auto& tri = mesh.triangle(t);
    const auto& ed = mesh.edge(be.edge);
    const int la = static_cast<int>(std::find(tri.begin(), tri.end(), ed[0]) - tri.begin());
    const int lb = static_cast<int>(std::find(tri.begin(), tri.end(), ed[1]) - tri.begin());
    const Point pa = mesh.vertex(ed[0]);
    const Point pb = mesh.vertex(ed[1]);
    const Vec2 d{pb.x - pa.x, pb.y - pa.y};
    const double len = std::sqrt(dot(d, d));
    Vec2 n{d[1] / len, -d[0] / len};
    const Point c = mesh.barycenter(t);
    if (n[0] * (0.5 * (pa.x + pb.x) - c.x) + n[1] * (0.5 * (pa.y + pb.y) - c.y) < 0.0) n = {-n[0], -n[1]};

    const auto geo = element_geometry(mesh, t);
    const auto lu = gather(un, t);
    const auto lp = gather(p_hat, t);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      Barycentric bary{0.0, 0.0, 0.0};
      bary[la] = 1.0 - s;
      bary[lb] = s;
      const BasisValues b2 = eval_basis(2, bary);
      const BasisValues b1 = eval_basis(1, bary);
      std::array<Vec2, 6> g2{}, g1{};
      for (int a = 0; a < 6; ++a) g2[a] = geo.physical_gradient(b2.gradients[a]);
      for (int a = 0; a < 3; ++a) g1[a] = geo.physical_gradient(b1.gradients[a]);
      const auto u = eval_local(2, 6, lu, b2, g2);
      const double p = recovered_pressure(ctx.form, eval_local(1, 3, lp, b1, g1).value[0], u.value);
      const Vec2 dn = emacfem::apply(symmetric_part(u.gradient), n);
      const double un_n = dot(u.value, n);
      const Vec2 f{2.0 * ctx.nu * dn[0] - p * n[0] - u.value[0] * un_n,
                   2.0 * ctx.nu * dn[1] - p * n[1] - u.value[1] * un_n};
      const Point xp = geo.map(bary);
      const double w = line.weights[q] * len;
      flux[0] += w * f[0];
      flux[1] += w * f[1];
      flux_ang += w * cross(f, x_of(xp));
    }
  }

  TraditionalErrors out;
  for (int c = 0; c < 2; ++c) {
    std::vector<double> m(k + 1);
    for (int i = 0; i <= k; ++i) m[i] = mom[i][c];
    out.momentum[c] = bdf_apply(scheme, m, ctx.dt) - flux[c];
  }
  out.angular = bdf_apply(scheme, ang, ctx.dt) - flux_ang;
  return out;
}

GlobalBalances global_balances(const SolverState& state) {
  const auto& q = rule(kDefaultQuadratureDegree);
  const BasisTable table(2, q);
  const TriMesh& mesh = state.u.dofs().mesh();
  GlobalBalances out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = element_geometry(mesh, t);
    const auto lu = gather(state.u, t);
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * geo.det;
      std::array<Vec2, 6> grads{};
      const auto u = eval_local(2, 6, lu, table.at[k], grads);
      const Vec2 x = x_of(geo.map(q.points[k]));
      out.energy += 0.5 * w * dot(u.value, u.value);
      out.momentum[0] += w * u.value[0];
      out.momentum[1] += w * u.value[1];
      out.angular += w * cross(u.value, x);
    }
  }
  return out;
}

}  // namespace emacfem
