#include "triodflow/geometry.hpp"

#include <algorithm>
#include <string>

#include "triodflow/errors.hpp"

namespace triodflow {

DiscreteCurve::DiscreteCurve(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw InvalidInput("a discrete curve needs at least 3 points, got " +
                       std::to_string(points_.size()));
  }
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (!is_finite(points_[j])) {
      throw InvalidInput("non-finite coordinate at node " + std::to_string(j));
    }
    if (j > 0 && points_[j] == points_[j - 1]) {
      throw DegenerateGeometry("consecutive nodes " + std::to_string(j - 1) + " and " +
                               std::to_string(j) + " coincide");
    }
  }
  length_ = polyline_length(points_);
}

double polyline_length(std::span<const Point> points) {
  if (points.size() < 2) {
    throw InvalidInput("arclength needs at least 2 points");
  }
  double total = 0.0;
  for (std::size_t j = 1; j < points.size(); ++j) total += distance(points[j], points[j - 1]);
  return total;
}

double arclength(const DiscreteCurve& curve) { return curve.length(); }

Derivatives derivatives(const DiscreteCurve& curve, std::size_t j) {
  const auto p = curve.points();
  const std::size_t n = p.size();
  if (j >= n) throw InvalidInput("node index out of range");
  const double h = curve.dx();
  const double inv2h = 1.0 / (2.0 * h);
  const double invh2 = 1.0 / (h * h);

  if (j == 0) {
    Point d2 = n >= 4 ? 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3] : p[0] - 2.0 * p[1] + p[2];
    return {(-3.0 * p[0] + 4.0 * p[1] - p[2]) * inv2h, d2 * invh2};
  }
  if (j == n - 1) {
    Point d2 = n >= 4 ? 2.0 * p[n - 1] - 5.0 * p[n - 2] + 4.0 * p[n - 3] - p[n - 4]
                      : p[n - 1] - 2.0 * p[n - 2] + p[n - 3];
    return {(3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) * inv2h, d2 * invh2};
  }
  return {(p[j + 1] - p[j - 1]) * inv2h, (p[j + 1] - 2.0 * p[j] + p[j - 1]) * invh2};
}

LocalFrame local_frame(const DiscreteCurve& curve, std::size_t j) {
  const Derivatives d = derivatives(curve, j);
  const double speed = norm(d.first);
  if (speed * curve.dx() < 1e-13 * curve.length()) {
    throw DegenerateGeometry("degenerate stencil at node " + std::to_string(j));
  }
  LocalFrame f;
  f.speed = speed;
  f.tangent = d.first / speed;
  f.normal = rotate_ccw(f.tangent);
  const double speed_sq = speed * speed;
  f.velocity = d.second / speed_sq;
  f.curvature = dot(f.velocity, f.normal);
  f.tangential_speed = dot(f.velocity, f.tangent);
  return f;
}

Point tangent(const DiscreteCurve& curve, std::size_t j) { return local_frame(curve, j).tangent; }
Point normal(const DiscreteCurve& curve, std::size_t j) { return local_frame(curve, j).normal; }
double curvature(const DiscreteCurve& curve, std::size_t j) {
  return local_frame(curve, j).curvature;
}
double tangential_speed(const DiscreteCurve& curve, std::size_t j) {
  return local_frame(curve, j).tangential_speed;
}
Point velocity(const DiscreteCurve& curve, std::size_t j) {
  return local_frame(curve, j).velocity;
}

DiscreteCurve resample_uniform(const DiscreteCurve& curve, std::size_t n) {
  if (n < 3) throw InvalidInput("resample_uniform needs n >= 3");
  const auto p = curve.points();
  std::vector<double> cumulative(p.size(), 0.0);
  for (std::size_t j = 1; j < p.size(); ++j) {
    cumulative[j] = cumulative[j - 1] + distance(p[j], p[j - 1]);
  }
  const double total = cumulative.back();

  std::vector<Point> out;
  out.reserve(n);
  out.push_back(p.front());
  std::size_t seg = 1;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 1 < p.size() && cumulative[seg] < target) ++seg;
    const double a = cumulative[seg - 1];
    const double b = cumulative[seg];
    const double u = b > a ? std::clamp((target - a) / (b - a), 0.0, 1.0) : 0.0;
    out.push_back(p[seg - 1] + u * (p[seg] - p[seg - 1]));
  }
  out.push_back(p.back());
  return DiscreteCurve(std::move(out));
}

double total_length(const Network& network) {
  double total = 0.0;
  for (const auto& c : network.curves) total += c.length();
  return total;
}

Network transform(const Network& network, Point origin, double scale) {
  Network out;
  out.junction = network.junction;
  out.curves.reserve(network.curves.size());
  for (const auto& c : network.curves) {
    std::vector<Point> pts;
    pts.reserve(c.size());
    for (const Point& q : c.points()) pts.push_back(scale * (q - origin));
    out.curves.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace triodflow
