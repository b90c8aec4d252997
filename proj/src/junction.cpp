#include "triodflow/junction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "triodflow/errors.hpp"

namespace triodflow {
namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double angle_of(Point v) {
  double a = std::atan2(v.y, v.x);
  return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

int orientation_of(const std::array<Point, 3>& tangents) {
  const double base = angle_of(tangents[0]);
  auto rel = [&](Point t) {
    double a = angle_of(t) - base;
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
  };
  return rel(tangents[1]) < rel(tangents[2]) ? 1 : -1;
}

Point one_sided_gradient(Point p0, Point p1, Point p2) { return -3.0 * p0 + 4.0 * p1 - p2; }

}  // namespace

Triod::Triod(std::array<DiscreteCurve, 3> curves) : curves_(std::move(curves)) {
  const Point o = curves_[0].front();
  if (!(curves_[1].front() == o) || !(curves_[2].front() == o)) {
    throw InvalidInput("triod branches must share their first point");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (endpoint(i) == endpoint(j)) throw InvalidInput("triod endpoints must be distinct");
    }
  }
}

int Triod::orientation() const {
  return orientation_of({tangent(curves_[0], 0), tangent(curves_[1], 0), tangent(curves_[2], 0)});
}

Network Triod::network() const {
  return Network{{curves_[0], curves_[1], curves_[2]}, true};
}

Triod to_triod(const Network& network) {
  if (!network.junction || network.curves.size() != 3) {
    throw InvalidInput("network is not a triod");
  }
  return Triod({network.curves[0], network.curves[1], network.curves[2]});
}

Triple junction_curvatures(const Triod& triod) {
  Triple k{};
  for (int i = 0; i < 3; ++i) k[static_cast<std::size_t>(i)] = curvature(triod.curve(i), 0);
  return k;
}

Triple lambda_from_k(const Triple& k) {
  // 1-based superscripts i-1, i+1 taken mod 3.
  return {(k[2] - k[1]) / kSqrt3, (k[0] - k[2]) / kSqrt3, (k[1] - k[0]) / kSqrt3};
}

Triple junction_lambdas(const Triod& triod, const Triple& k) {
  Triple lambda = lambda_from_k(k);
  if (triod.orientation() < 0) {
    for (double& l : lambda) l = -l;
  }
  return lambda;
}

double angle_defect(const Triod& triod) {
  Point sum{};
  for (int i = 0; i < 3; ++i) sum += tangent(triod.curve(i), 0);
  return norm(sum);
}

JunctionReport junction_identities(const Triod& triod) {
  JunctionReport r;
  r.k = junction_curvatures(triod);
  r.lambda = junction_lambdas(triod, r.k);
  double sk2 = 0.0;
  double sl2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    r.sum_k += r.k[i];
    r.sum_lambda += r.lambda[i];
    sk2 += r.k[i] * r.k[i];
    sl2 += r.lambda[i] * r.lambda[i];
    r.sum_k_lambda += r.k[i] * r.lambda[i];
  }
  r.sum_sq_difference = sk2 - sl2;
  r.angle_defect = angle_defect(triod);
  return r;
}

std::array<Point, 3> junction_velocities(const Triod& triod) {
  std::array<LocalFrame, 3> frames{local_frame(triod.curve(0), 0), local_frame(triod.curve(1), 0),
                                   local_frame(triod.curve(2), 0)};
  const Triple k{frames[0].curvature, frames[1].curvature, frames[2].curvature};
  const int sign = orientation_of({frames[0].tangent, frames[1].tangent, frames[2].tangent});
  Triple lambda = lambda_from_k(k);
  std::array<Point, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) {
    v[i] = k[i] * frames[i].normal + (sign * lambda[i]) * frames[i].tangent;
  }
  return v;
}

CompatibilityReport compatibility_report(const std::array<DiscreteCurve, 3>& curves, double tol) {
  CompatibilityReport r;
  r.tolerance = tol;
  const Point o = curves[0].front();
  r.concurrent = curves[1].front() == o && curves[2].front() == o;
  r.distinct_endpoints = !(curves[0].back() == curves[1].back()) &&
                         !(curves[1].back() == curves[2].back()) &&
                         !(curves[0].back() == curves[2].back());

  Point tangent_sum{};
  std::array<Point, 3> v0{};
  for (std::size_t i = 0; i < 3; ++i) {
    const LocalFrame head = local_frame(curves[i], 0);
    tangent_sum += head.tangent;
    v0[i] = head.velocity;
    const LocalFrame tail = local_frame(curves[i], curves[i].size() - 1);
    r.max_endpoint_velocity = std::max(r.max_endpoint_velocity, norm(tail.velocity));
  }
  r.angle_defect = norm(tangent_sum);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      r.max_junction_velocity_mismatch =
          std::max(r.max_junction_velocity_mismatch, distance(v0[i], v0[j]));
    }
  }
  return r;
}

CompatibilityReport compatibility_report(const Triod& triod, double tol) {
  return compatibility_report(triod.curves(), tol);
}

Triple endpoint_conditions(const Triod& triod) {
  Triple out{};
  for (int i = 0; i < 3; ++i) {
    const auto& c = triod.curve(i);
    const LocalFrame f = local_frame(c, c.size() - 1);
    out[static_cast<std::size_t>(i)] = std::max(std::abs(f.curvature), std::abs(f.tangential_speed));
  }
  return out;
}

JunctionEnforcement enforce_junction(const Triod& triod, Point new_junction,
                                     const AngleRelaxation& options) {
  std::array<std::vector<Point>, 3> pts;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto src = triod.curves()[i].points();
    pts[i].assign(src.begin(), src.end());
    pts[i][0] = new_junction;
  }
  const Point o = new_junction;

  auto defect_of = [&](const std::array<Point, 3>& first) {
    Point sum{};
    for (std::size_t i = 0; i < 3; ++i) {
      const Point g = one_sided_gradient(o, first[i], pts[i][2]);
      sum += g / norm(g);
    }
    return sum;
  };

  std::array<Point, 3> first{pts[0][1], pts[1][1], pts[2][1]};
  Point defect = defect_of(first);
  double defect_norm = norm(defect);

  JunctionEnforcement result{triod, defect_norm, defect_norm, 0, true};

  while (defect_norm > options.tolerance && result.sweeps < options.max_sweeps) {
    ++result.sweeps;
    // Jacobian of the tangent sum with respect to the polar angle of each
    // first interior node about the junction.
    std::array<Point, 3> column{};
    for (std::size_t i = 0; i < 3; ++i) {
      const Point g = one_sided_gradient(o, first[i], pts[i][2]);
      const double gn = norm(g);
      const Point t = g / gn;
      const Point dg = 4.0 * rotate_ccw(first[i] - o);
      column[i] = (dg - dot(dg, t) * t) / gn;
    }
    double m00 = 0.0, m01 = 0.0, m11 = 0.0;
    for (const Point& c : column) {
      m00 += c.x * c.x;
      m01 += c.x * c.y;
      m11 += c.y * c.y;
    }
    const double reg = 1e-14 * (m00 + m11) + 1e-300;
    m00 += reg;
    m11 += reg;
    const double det = m00 * m11 - m01 * m01;
    const Point y{(m11 * defect.x - m01 * defect.y) / det, (m00 * defect.y - m01 * defect.x) / det};
    std::array<double, 3> step{};
    for (std::size_t i = 0; i < 3; ++i) step[i] = -dot(column[i], y);

    bool accepted = false;
    double alpha = 1.0;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt, alpha *= 0.5) {
      std::array<Point, 3> trial{};
      for (std::size_t i = 0; i < 3; ++i) trial[i] = o + rotate(first[i] - o, alpha * step[i]);
      const Point trial_defect = defect_of(trial);
      const double trial_norm = norm(trial_defect);
      if (trial_norm < defect_norm) {
        first = trial;
        defect = trial_defect;
        defect_norm = trial_norm;
        accepted = true;
      }
    }
    if (!accepted) break;
  }

  for (std::size_t i = 0; i < 3; ++i) pts[i][1] = first[i];
  result.triod = Triod({DiscreteCurve(std::move(pts[0])), DiscreteCurve(std::move(pts[1])),
                        DiscreteCurve(std::move(pts[2]))});
  result.final_defect = defect_norm;
  result.converged = defect_norm <= 10.0 * options.tolerance;
  return result;
}

}  // namespace triodflow
