#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "triodflow/point.hpp"

namespace triodflow {

/// An open planar curve sampled on the uniform parameter grid x_j = j/(n-1).
///
/// The point list is fixed at construction; at least three points, all
/// finite, no two consecutive points equal.
class DiscreteCurve {
 public:
  explicit DiscreteCurve(std::vector<Point> points);

  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t j) const { return points_[j]; }
  const Point& front() const { return points_.front(); }
  const Point& back() const { return points_.back(); }

  /// Polyline length, cached at construction.
  double length() const { return length_; }
  /// Parameter spacing 1/(n-1).
  double dx() const { return 1.0 / static_cast<double>(points_.size() - 1); }

  friend bool operator==(const DiscreteCurve& a, const DiscreteCurve& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Point> points_;
  double length_ = 0.0;
};

/// Sum of segment lengths. Throws InvalidInput for fewer than two points.
double polyline_length(std::span<const Point> points);

double arclength(const DiscreteCurve& curve);

/// First and second parameter derivatives at node j.
///
/// Centered second-order differences in the interior; one-sided
/// second-order differences at the ends (three points for gamma_x, four
/// points for gamma_xx when n >= 4).
struct Derivatives {
  Point first;
  Point second;
};

Derivatives derivatives(const DiscreteCurve& curve, std::size_t j);

/// Everything the flow needs at one node.
struct LocalFrame {
  Point tangent;
  Point normal;
  double curvature = 0.0;
  double tangential_speed = 0.0;
  /// gamma_xx / |gamma_x|^2
  Point velocity;
  /// |gamma_x|
  double speed = 0.0;
};

/// Throws DegenerateGeometry when the stencil difference for gamma_x is
/// shorter than 1e-13 times the curve length.
LocalFrame local_frame(const DiscreteCurve& curve, std::size_t j);

Point tangent(const DiscreteCurve& curve, std::size_t j);
Point normal(const DiscreteCurve& curve, std::size_t j);
double curvature(const DiscreteCurve& curve, std::size_t j);
double tangential_speed(const DiscreteCurve& curve, std::size_t j);
Point velocity(const DiscreteCurve& curve, std::size_t j);

/// Resample to n points equally spaced in arclength along the polyline.
/// Endpoints are copied exactly.
DiscreteCurve resample_uniform(const DiscreteCurve& curve, std::size_t n);

/// A finite collection of curves. When `junction` is set the curves are the
/// three branches of a triod and share their first point; otherwise every
/// curve is independent and both of its ends are boundary points.
struct Network {
  std::vector<DiscreteCurve> curves;
  bool junction = false;
};

double total_length(const Network& network);

/// Apply p -> scale * (p - origin) to every node.
Network transform(const Network& network, Point origin, double scale);

}  // namespace triodflow
