#pragma once

#include <array>
#include <cmath>

namespace emacfem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = std::array<double, 2>;
/// Row i holds the gradient of component i: m[i][j] = d(u_i)/d(x_j).
using Mat2 = std::array<Vec2, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

/// z-component of (a, 0) x (b, 0).
inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

inline Vec2 apply(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline Mat2 symmetric_part(const Mat2& g) {
  const double off = 0.5 * (g[0][1] + g[1][0]);
  return {Vec2{g[0][0], off}, Vec2{off, g[1][1]}};
}

inline double trace(const Mat2& g) { return g[0][0] + g[1][1]; }

inline Vec2 to_vec(const Point& p) { return {p.x, p.y}; }

}  // namespace emacfem
