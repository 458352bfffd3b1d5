#ifndef SIGOPT_VEC2_HPP
#define SIGOPT_VEC2_HPP

#include <cmath>

namespace sigopt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(const Vec2& a) {
  const double n = norm(a);
  return {a.x / n, a.y / n};
}
// Rotation by -90 degrees; maps a CCW edge tangent to the outward normal.
inline Vec2 perp_cw(const Vec2& a) { return {a.y, -a.x}; }

// Row-major 2x2 matrix, m[i][j] = entry (i,j).
struct Mat2 {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  Mat2() = default;
  Mat2(double a, double b, double c, double d) : m{{a, b}, {c, d}} {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
  }

  Mat2& operator+=(const Mat2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[i][j] -= o.m[i][j];
    return *this;
  }
  Mat2& operator*=(double s) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[i][j] *= s;
    return *this;
  }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}
inline Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y, a.m[1][0] * v.x + a.m[1][1] * v.y};
}
inline Mat2 transpose(const Mat2& a) {
  return {a.m[0][0], a.m[1][0], a.m[0][1], a.m[1][1]};
}
inline Mat2 sym(const Mat2& a) {
  const double off = 0.5 * (a.m[0][1] + a.m[1][0]);
  return {a.m[0][0], off, off, a.m[1][1]};
}
inline double trace(const Mat2& a) { return a.m[0][0] + a.m[1][1]; }
inline double det(const Mat2& a) {
  return a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
}
inline Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return {a.m[1][1] / d, -a.m[0][1] / d, -a.m[1][0] / d, a.m[0][0] / d};
}
// Frobenius scalar product B:C.
inline double ddot(const Mat2& a, const Mat2& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += a.m[i][j] * b.m[i][j];
  return s;
}

}  // namespace sigopt

#endif
