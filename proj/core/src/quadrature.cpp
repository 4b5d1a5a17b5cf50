#include "emacfem/quadrature.hpp"

#include <cmath>
#include <string>

#include "emacfem/errors.hpp"

namespace emacfem {

namespace {

class RuleBuilder {
 public:
  explicit RuleBuilder(int degree) { rule_.exact_degree = degree; }

  RuleBuilder& centroid(double w) {
    add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, w);
    return *this;
  }
  /// Orbit of (a, a, 1 - 2a).
  RuleBuilder& orbit3(double a, double w) {
    const double c = 1.0 - 2.0 * a;
    add(a, a, c, w);
    add(a, c, a, w);
    add(c, a, a, w);
    return *this;
  }
  /// Orbit of (a, b, 1 - a - b).
  RuleBuilder& orbit6(double a, double b, double w) {
    const double c = 1.0 - a - b;
    add(a, b, c, w);
    add(b, a, c, w);
    add(a, c, b, w);
    add(c, a, b, w);
    add(b, c, a, w);
    add(c, b, a, w);
    return *this;
  }
  QuadratureRule build() { return std::move(rule_); }

 private:
  void add(double l0, double l1, double l2, double w) {
    rule_.points.push_back({l0, l1, l2});
    rule_.weights.push_back(w);
  }
  QuadratureRule rule_;
};

// Dunavant rules; weights already scaled to the reference area 1/2.
std::vector<QuadratureRule> make_rules() {
  std::vector<QuadratureRule> rules;
  rules.push_back(RuleBuilder(1).centroid(0.5).build());
  rules.push_back(RuleBuilder(2).orbit3(1.0 / 6.0, 1.0 / 6.0).build());
  rules.push_back(RuleBuilder(3).centroid(-9.0 / 32.0).orbit3(0.2, 25.0 / 96.0).build());
  rules.push_back(RuleBuilder(4)
                      .orbit3(0.44594849091596488631832925388305, 0.5 * 0.22338158967801146569500700843312)
                      .orbit3(0.09157621350977074345957146340220, 0.5 * 0.10995174365532186763832632490021)
                      .build());
  rules.push_back(RuleBuilder(5)
                      .centroid(0.5 * 0.225)
                      .orbit3(0.47014206410511508977044120951345, 0.5 * 0.13239415278850618073764938783315)
                      .orbit3(0.10128650732345633880098736191512, 0.5 * 0.12593918054482715259568394550018)
                      .build());
  rules.push_back(RuleBuilder(6)
                      .orbit3(0.24928674517091042129163855310702, 0.5 * 0.11678627572637936602528961138558)
                      .orbit3(0.06308901449150222834033160287082, 0.5 * 0.05084490637020681692093680910686)
                      .orbit6(0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
                              0.5 * 0.08285107561837357519355345642044)
                      .build());
  // Re-solved from the moment equations to full precision.
  rules.push_back(RuleBuilder(7)
                      .centroid(-0.07478502223384087531485562774)
                      .orbit3(0.2603459660790398269262424691, 0.08780762871660390587675970558)
                      .orbit3(0.06513010290221581153802590631, 0.02667361780441924563499364445)
                      .orbit6(0.3128654960048738614066444768, 0.6384441885698097268003339647,
                              0.03855688044512857012993259628)
                      .build());
  rules.push_back(RuleBuilder(8)
                      .centroid(0.5 * 0.14431560767778716825109111048906)
                      .orbit3(0.17056930775176020662229350149146, 0.5 * 0.10321737053471825028179155029212)
                      .orbit3(0.05054722831703097545842355059660, 0.5 * 0.03245849762319808031092592834178)
                      .orbit3(0.45929258829272315602881551449417, 0.5 * 0.09509163426728462479389610438858)
                      .orbit6(0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
                              0.5 * 0.02723031417443499426484469007390)
                      .build());
  rules.push_back(RuleBuilder(9)
                      .centroid(0.5 * 0.09713579628279609890744676309485)
                      .orbit3(0.48968251919873762778370692483619, 0.5 * 0.03133470022713983234393199080984)
                      .orbit3(0.43708959149293663726993036443535, 0.5 * 0.07782754100477543338465495857972)
                      .orbit3(0.18820353561903273024096128046733, 0.5 * 0.07964773892720910288013526957424)
                      .orbit3(0.04472951339445297061024247196780, 0.5 * 0.02557767565869810438673914467637)
                      .orbit6(0.22196298916076569567510252769319, 0.74119859878449802069007987352342,
                              0.5 * 0.04328353937728937728937728937729)
                      .build());
  // Re-solved from the moment equations to full precision.
  rules.push_back(RuleBuilder(10)
                      .centroid(0.0454089951913767900476433)
                      .orbit3(0.4855776333836573773675075, 0.01836297887823335235850304)
                      .orbit3(0.1094815754850370547954586, 0.02266052971776396739130282)
                      .orbit6(0.1417072194148799547566833, 0.307939838764120950165155,
                              0.03637895842271005430215759)
                      .orbit6(0.02500353476268638607398848, 0.2466725606399026939172765,
                              0.01416362126552874241836853)
                      .orbit6(0.00954081540029945758015281, 0.06680325101220026577354021,
                              0.004710833481866411729963735)
                      .build());
  return rules;
}

}  // namespace

const QuadratureRule& rule(int exact_degree) {
  static const std::vector<QuadratureRule> rules = make_rules();
  if (exact_degree < 1 || exact_degree > static_cast<int>(rules.size())) {
    throw InvalidArgument("quadrature degree must be in [1, 10], got " + std::to_string(exact_degree));
  }
  return rules[exact_degree - 1];
}

const LineRule& gauss_legendre(int npoints) {
  static const std::vector<LineRule> rules = [] {
    std::vector<LineRule> out;
    auto on_unit = [](std::vector<double> x, std::vector<double> w) {
      LineRule r;
      for (std::size_t i = 0; i < x.size(); ++i) {
        r.points.push_back(0.5 * (1.0 + x[i]));
        r.weights.push_back(0.5 * w[i]);
      }
      return r;
    };
    out.push_back(on_unit({0.0}, {2.0}));
    const double s3 = 1.0 / std::sqrt(3.0);
    out.push_back(on_unit({-s3, s3}, {1.0, 1.0}));
    const double s35 = std::sqrt(0.6);
    out.push_back(on_unit({-s35, 0.0, s35}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}));
    const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
    const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
    const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
    out.push_back(on_unit({-b, -a, a, b}, {wb, wa, wa, wb}));
    return out;
  }();
  if (npoints < 1 || npoints > static_cast<int>(rules.size())) {
    throw InvalidArgument("Gauss-Legendre rule needs 1..4 points, got " + std::to_string(npoints));
  }
  return rules[npoints - 1];
}

BasisValues eval_basis(int degree, const Barycentric& l) {
  // d(lambda_i)/d(xi, eta)
  static constexpr std::array<Vec2, 3> dl{Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  BasisValues out;
  if (degree == 1) {
    out.count = 3;
    for (int i = 0; i < 3; ++i) {
      out.values[i] = l[i];
      out.gradients[i] = dl[i];
    }
    return out;
  }
  if (degree != 2) throw InvalidArgument("basis degree must be 1 or 2");
  out.count = 6;
  for (int i = 0; i < 3; ++i) {
    out.values[i] = l[i] * (2.0 * l[i] - 1.0);
    const double s = 4.0 * l[i] - 1.0;
    out.gradients[i] = {s * dl[i][0], s * dl[i][1]};
  }
  for (int e = 0; e < 3; ++e) {
    const int i = e, j = (e + 1) % 3;
    out.values[3 + e] = 4.0 * l[i] * l[j];
    out.gradients[3 + e] = {4.0 * (l[i] * dl[j][0] + l[j] * dl[i][0]),
                            4.0 * (l[i] * dl[j][1] + l[j] * dl[i][1])};
  }
  return out;
}

BasisValues eval_basis(SpaceKind kind, const Barycentric& point) {
  return eval_basis(kind == SpaceKind::P1Scalar ? 1 : 2, point);
}

Point ElementGeometry::map(const Barycentric& b) const {
  return {origin.x + jacobian[0][0] * b[1] + jacobian[0][1] * b[2],
          origin.y + jacobian[1][0] * b[1] + jacobian[1][1] * b[2]};
}

ElementGeometry element_geometry(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  const Point& p0 = mesh.vertex(tri[0]);
  const Point& p1 = mesh.vertex(tri[1]);
  const Point& p2 = mesh.vertex(tri[2]);
  ElementGeometry g;
  g.origin = p0;
  g.jacobian = {Vec2{p1.x - p0.x, p2.x - p0.x}, Vec2{p1.y - p0.y, p2.y - p0.y}};
  g.det = g.jacobian[0][0] * g.jacobian[1][1] - g.jacobian[0][1] * g.jacobian[1][0];
  const double inv = 1.0 / g.det;
  // (J^{-1})^T
  g.inverse_transpose = {Vec2{g.jacobian[1][1] * inv, -g.jacobian[1][0] * inv},
                         Vec2{-g.jacobian[0][1] * inv, g.jacobian[0][0] * inv}};
  return g;
}

BasisTable::BasisTable(int deg, const QuadratureRule& r) : degree(deg), count(deg == 1 ? 3 : 6) {
  at.reserve(r.points.size());
  for (const auto& p : r.points) at.push_back(eval_basis(deg, p));
}

}  // namespace emacfem
