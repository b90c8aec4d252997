#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "triodflow/junction.hpp"

namespace triodflow::testing {

inline std::vector<Point> segment_points(Point a, Point b, std::size_t n) {
  std::vector<Point> p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n - 1);
    p[j] = a + s * (b - a);
  }
  p.front() = a;
  p.back() = b;
  return p;
}

inline DiscreteCurve segment(Point a, Point b, std::size_t n) {
  return DiscreteCurve(segment_points(a, b, n));
}

/// Arc of the circle (center, r) from angle a0 to a1, uniform in angle.
inline DiscreteCurve arc(Point center, double r, double a0, double a1, std::size_t n) {
  std::vector<Point> p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = a0 + (a1 - a0) * static_cast<double>(j) / static_cast<double>(n - 1);
    p[j] = center + r * Point{std::cos(a), std::sin(a)};
  }
  return DiscreteCurve(std::move(p));
}

inline Point unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Unit rays at 90, 210 and 330 degrees from `o`.
inline Triod steiner_triod(std::size_t n, Point o = {}) {
  const double pi = std::numbers::pi;
  return Triod({segment(o, o + unit(pi / 2), n), segment(o, o + unit(pi / 2 + 2 * pi / 3), n),
                segment(o, o + unit(pi / 2 + 4 * pi / 3), n)});
}

/// Branch leaving the origin with unit tangent along `angle` on a circle of
/// signed curvature k (k > 0 turns left), of length `len`.
inline DiscreteCurve curved_branch(double angle, double k, double len, std::size_t n) {
  std::vector<Point> p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = len * static_cast<double>(j) / static_cast<double>(n - 1);
    if (k == 0.0) {
      p[j] = s * unit(angle);
    } else {
      // Rotate the arc (sin(ks)/k, (1-cos(ks))/k) onto the start direction.
      const Point local{std::sin(k * s) / k, (1.0 - std::cos(k * s)) / k};
      p[j] = rotate(local, angle);
    }
  }
  p.front() = {0.0, 0.0};
  return DiscreteCurve(std::move(p));
}

/// Triod at the origin with exact 120 degree tangents and branch curvatures k.
inline Triod arc_triod(const std::array<double, 3>& k, std::size_t n, double len = 1.0) {
  const double pi = std::numbers::pi;
  return Triod({curved_branch(pi / 2, k[0], len, n), curved_branch(pi / 2 + 2 * pi / 3, k[1], len, n),
                curved_branch(pi / 2 + 4 * pi / 3, k[2], len, n)});
}

}  // namespace triodflow::testing
