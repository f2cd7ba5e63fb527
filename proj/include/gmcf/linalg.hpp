#pragma once

#include <array>
#include <cmath>

// Small fixed-size linear algebra used throughout: 2-vectors on the base
// torus, m-vectors (m <= 2) on the target, symmetric 2x2 forms, and ambient
// vectors of the product T^2 x target.

namespace gmcf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// 2x2 matrix, row-major. For an m x 2 Jacobian with m = 1 the second row is
// kept at zero so the same storage serves both codimensions.
struct Mat2 {
  double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

inline Vec2 mat_vec(const Mat2& m, Vec2 v) {
  return {m.a[0][0] * v.x + m.a[0][1] * v.y, m.a[1][0] * v.x + m.a[1][1] * v.y};
}

// Symmetric 2x2 form.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

inline double quad_form(const Sym2& s, Vec2 u, Vec2 w) {
  return s.xx * u.x * w.x + s.xy * (u.x * w.y + u.y * w.x) + s.yy * u.y * w.y;
}

// Tangent vector of the ambient product: base component in T Sigma_1, fiber
// component in T Sigma_2. For codimension one the fiber y-slot stays zero.
struct Ambient {
  Vec2 base;
  Vec2 fiber;
};

inline double dot(const Ambient& a, const Ambient& b) {
  return dot(a.base, b.base) + dot(a.fiber, b.fiber);
}

inline Ambient operator+(const Ambient& a, const Ambient& b) {
  return {a.base + b.base, a.fiber + b.fiber};
}

inline Ambient operator*(double s, const Ambient& a) {
  return {s * a.base, s * a.fiber};
}

}  // namespace gmcf
