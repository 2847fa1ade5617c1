#pragma once

#include <array>
#include <cmath>

namespace dnp {

/// Points and gradient vectors live in R^2; 1-D problems leave the second slot at zero.
using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Row-major 2x2 matrix, used for the flux Jacobian.
using Mat2 = std::array<double, 4>;

}  // namespace dnp
