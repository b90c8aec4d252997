#pragma once

#include <cmath>

namespace triodflow {

/// A point (or displacement) of the plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point& operator-=(Point o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
constexpr double norm_sq(Point a) { return dot(a, a); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Counterclockwise rotation by pi/2.
constexpr Point rotate_ccw(Point a) { return {-a.y, a.x}; }

inline Point rotate(Point a, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

inline bool is_finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

}  // namespace triodflow
