#include "triodflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "triodflow/errors.hpp"

namespace triodflow {
namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double ssr = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.ssr += r * r;
  }
  return f;
}

// Power law max k^2 = C (T - t)^-alpha: for a given T the fit is linear in
// log-log coordinates.
struct PowerFit {
  double T = 0.0;
  double alpha = 0.0;
  double C = 0.0;
  double ssr = 0.0;
};

PowerFit fit_power_law(std::span<const CurvatureSample> s, double T) {
  std::vector<double> x(s.size()), y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    x[i] = std::log(T - s[i].t);
    y[i] = std::log(s[i].max_k_sq);
  }
  const LineFit f = fit_line(x, y);
  return {T, -f.slope, std::exp(f.intercept), f.ssr};
}

PowerFit best_power_law(std::span<const CurvatureSample> s) {
  const double t_last = s.back().t;
  const double span = t_last - s.front().t;
  // Search over log(T - t_last): coarse grid, then golden section.
  const double lo0 = std::log(1e-8 * span);
  const double hi0 = std::log(50.0 * span);
  auto cost = [&](double u) { return fit_power_law(s, t_last + std::exp(u)).ssr; };
  constexpr int kGrid = 400;
  double best_u = lo0;
  double best_c = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= kGrid; ++g) {
    const double u = lo0 + (hi0 - lo0) * g / kGrid;
    const double c = cost(u);
    if (c < best_c) {
      best_c = c;
      best_u = u;
    }
  }
  const double du = (hi0 - lo0) / kGrid;
  double a = best_u - du, b = best_u + du;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
  double f1 = cost(c1), f2 = cost(c2);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (f1 < f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - phi * (b - a);
      f1 = cost(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + phi * (b - a);
      f2 = cost(c2);
    }
  }
  return fit_power_law(s, t_last + std::exp(0.5 * (a + b)));
}

double trend_of(std::span<const CurvatureSample> s, double T) {
  const double first = s.front().max_k_sq * (T - s.front().t);
  const double last = s.back().max_k_sq * (T - s.back().t);
  return last / first;
}

struct MarkedPoint {
  int curve = 0;
  std::size_t node = 0;
  double k = 0.0;
};

MarkedPoint max_curvature_point(const Network& net) {
  MarkedPoint m;
  for (std::size_t c = 0; c < net.curves.size(); ++c) {
    const auto& curve = net.curves[c];
    for (std::size_t j = 0; j < curve.size(); ++j) {
      const double k = std::abs(curvature(curve, j));
      if (k > m.k) m = {static_cast<int>(c), j, k};
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(BlowupClass c) {
  switch (c) {
    case BlowupClass::type_i:
      return "TypeI";
    case BlowupClass::type_ii:
      return "TypeII";
    case BlowupClass::no_blowup:
      return "NoBlowup";
  }
  return "unknown";
}

BlowupFit estimate_blowup(std::span<const CurvatureSample> series, const BlowupOptions& options) {
  if (series.size() < 8) throw InvalidInput("blow-up fit needs at least 8 samples");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].t > series[i - 1].t)) throw InvalidInput("sample times must increase");
  }
  BlowupFit fit;
  fit.T = std::numeric_limits<double>::infinity();
  const double first = series.front().max_k_sq;
  const double last = series.back().max_k_sq;
  if (!(first > 0.0) || last / first < options.growth_floor) return fit;

  std::vector<double> t(series.size()), inv(series.size());
  double mean_inv = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    t[i] = series[i].t;
    inv[i] = 1.0 / series[i].max_k_sq;
    mean_inv += inv[i];
  }
  mean_inv /= static_cast<double>(series.size());
  const LineFit line = fit_line(t, inv);
  fit.fit_residual = std::sqrt(line.ssr / static_cast<double>(series.size())) / mean_inv;
  if (line.slope < 0.0) {
    fit.T = -line.intercept / line.slope;
    fit.C = -1.0 / line.slope;
    if (fit.fit_residual < options.fit_tolerance && fit.C > 0.0 && fit.T > series.back().t) {
      fit.trend = trend_of(series, fit.T);
      fit.classification = BlowupClass::type_i;
      return fit;
    }
  }

  const PowerFit power = best_power_law(series);
  const double trend = trend_of(series, power.T);
  if (trend > options.trend_factor) {
    fit.T = power.T;
    fit.C = power.C;
    fit.exponent = power.alpha;
    fit.trend = trend;
    fit.classification = BlowupClass::type_ii;
  }
  return fit;
}

std::vector<CurvatureSample> curvature_series(std::span<const TrajectorySample> trajectory) {
  std::vector<CurvatureSample> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) {
    const double k = s.record.max_abs_curvature;
    out.push_back({s.t, k * k});
  }
  return out;
}

RescaledState rescale_huisken(const Network& geometry, double t, Point x0, double T) {
  if (!(T > t)) throw InvalidInput("Huisken rescaling needs T > t");
  const double scale = 1.0 / std::sqrt(2.0 * (T - t));
  return RescaledState{transform(geometry, x0, scale), -0.5 * std::log(T - t), x0, scale};
}

namespace {

// Node-wise linear interpolation between two samples; absent when the
// discretizations differ.
std::optional<Network> interpolate(const TrajectorySample& a, const TrajectorySample& b,
                                   double t) {
  if (a.geometry.curves.size() != b.geometry.curves.size()) return std::nullopt;
  const double w = (t - a.t) / (b.t - a.t);
  Network out{{}, a.geometry.junction};
  for (std::size_t i = 0; i < a.geometry.curves.size(); ++i) {
    const auto& ca = a.geometry.curves[i];
    const auto& cb = b.geometry.curves[i];
    if (ca.size() != cb.size()) return std::nullopt;
    std::vector<Point> pts(ca.size());
    for (std::size_t j = 0; j < ca.size(); ++j) pts[j] = ca[j] + w * (cb[j] - ca[j]);
    out.curves.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace

std::vector<HamiltonSnapshot> hamilton_rescale(std::span<const TrajectorySample> trajectory,
                                               double T, const HamiltonOptions& options) {
  if (trajectory.size() < 2) throw InvalidInput("Hamilton rescaling needs a trajectory");
  if (options.first_rung < 1 || options.max_rungs < 1) throw InvalidInput("bad rung ladder");

  std::vector<MarkedPoint> marks;
  marks.reserve(trajectory.size());
  for (const auto& s : trajectory) marks.push_back(max_curvature_point(s.geometry));
  if (!(marks.back().k > 0.0) || !(marks.back().k > marks.front().k)) {
    throw InvalidInput("trajectory shows no curvature growth");
  }

  const double t_first = trajectory.front().t;
  const double t_last = trajectory.back().t;
  std::vector<HamiltonSnapshot> out;
  long long n = options.first_rung;
  for (int rung = 0; rung < options.max_rungs; ++rung, n *= 2) {
    const double limit = T - 1.0 / static_cast<double>(n);
    if (limit < t_first) continue;

    std::size_t best = trajectory.size();
    double best_value = -1.0;
    for (std::size_t s = 0; s < trajectory.size() && trajectory[s].t <= limit; ++s) {
      const double v = marks[s].k * marks[s].k * (limit - trajectory[s].t);
      if (v > best_value) {
        best_value = v;
        best = s;
      }
    }
    if (best == trajectory.size() || !(marks[best].k > 0.0)) continue;

    const MarkedPoint& mark = marks[best];
    const Network& geom = trajectory[best].geometry;
    const Point base = geom.curves[static_cast<std::size_t>(mark.curve)][mark.node];
    HamiltonSnapshot snap;
    snap.n = static_cast<int>(n);
    snap.sample = best;
    snap.t = trajectory[best].t;
    snap.curve = mark.curve;
    snap.node = mark.node;
    snap.curvature = mark.k;
    snap.geometry = transform(geom, base, mark.k);
    snap.marked_curvature =
        std::abs(curvature(snap.geometry.curves[static_cast<std::size_t>(mark.curve)], mark.node));
    snap.max_abs_curvature = max_abs_curvature(snap.geometry);
    std::size_t s = best + 1;
    for (; s < trajectory.size() && trajectory[s].t <= limit; ++s) {
      snap.frames.emplace_back(mark.k * mark.k * (trajectory[s].t - snap.t),
                               transform(trajectory[s].geometry, base, mark.k));
    }
    // Close the window at t = limit by linear interpolation in time.
    if (s < trajectory.size() && trajectory[s - 1].t < limit) {
      if (auto mid = interpolate(trajectory[s - 1], trajectory[s], limit)) {
        snap.frames.emplace_back(mark.k * mark.k * (limit - snap.t),
                                 transform(*mid, base, mark.k));
      }
    }
    out.push_back(std::move(snap));
    if (limit >= t_last) break;
  }
  if (out.empty()) throw InvalidInput("no ladder rung is supported by the trajectory");
  return out;
}

double shrinker_residual(const Network& geometry) {
  double worst = 0.0;
  for (const auto& c : geometry.curves) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const LocalFrame f = local_frame(c, j);
      worst = std::max(worst, std::abs(f.curvature + dot(c[j], f.normal)));
    }
  }
  return worst;
}

double translator_residual(const Network& geometry, Point w) {
  double worst = 0.0;
  for (const auto& c : geometry.curves) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const LocalFrame f = local_frame(c, j);
      worst = std::max(worst, std::abs(f.curvature - dot(w, f.normal)));
    }
  }
  return worst;
}

DiscreteCurve grim_reaper(Point w, std::size_t n, double y_max) {
  if (!(y_max > 0.0 && y_max < std::numbers::pi / 2.0)) {
    throw InvalidInput("grim reaper needs 0 < y_max < pi/2");
  }
  if (n < 3) throw InvalidInput("grim reaper needs n >= 3");
  const double speed = norm(w);
  if (!(speed > 0.0)) throw InvalidInput("translation velocity must be nonzero");
  const double angle = std::atan2(w.y, w.x);

  // Arclength s from the vertex: y = atan(sinh s), x = log(cosh s).
  const double s_max = std::asinh(std::tan(y_max));
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = s_max - 2.0 * s_max * static_cast<double>(j) / static_cast<double>(n - 1);
    const Point p{std::log(std::cosh(s)), std::atan(std::sinh(s))};
    pts.push_back(rotate(p / speed, angle));
  }
  return DiscreteCurve(std::move(pts));
}

std::string_view to_string(DensityClass c) {
  switch (c) {
    case DensityClass::half:
      return "1/2";
    case DensityClass::one:
      return "1";
    case DensityClass::three_halves:
      return "3/2";
    case DensityClass::unclassified:
      return "unclassified";
  }
  return "unknown";
}

DensityClass classify_density(double theta, double tol) {
  constexpr std::array<std::pair<double, DensityClass>, 3> values{
      {{0.5, DensityClass::half}, {1.0, DensityClass::one}, {1.5, DensityClass::three_halves}}};
  DensityClass best = DensityClass::unclassified;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& [v, c] : values) {
    const double gap = std::abs(theta - v);
    if (gap < best_gap) {
      best_gap = gap;
      best = c;
    }
  }
  return best_gap <= tol ? best : DensityClass::unclassified;
}

std::optional<Point> steiner_point(Point a, Point b, Point c) {
  const std::array<Point, 3> v{a, b, c};
  const double scale = std::max({distance(a, b), distance(b, c), distance(a, c)});
  if (!(scale > 0.0) || a == b || b == c || a == c) throw InvalidInput("points must be distinct");
  if (std::abs(cross(b - a, c - a)) <= 1e-12 * scale * scale) {
    throw InvalidInput("points are collinear");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const Point e1 = v[(i + 1) % 3] - v[i];
    const Point e2 = v[(i + 2) % 3] - v[i];
    const double angle = std::atan2(std::abs(cross(e1, e2)), dot(e1, e2));
    if (angle >= 2.0 * std::numbers::pi / 3.0) return std::nullopt;
  }

  const Point centroid = (a + b + c) / 3.0;
  Point x = centroid;
  for (int it = 0; it < 10000; ++it) {
    Point num{};
    double den = 0.0;
    bool at_vertex = false;
    for (const Point& p : v) {
      const double d = distance(x, p);
      if (d < 1e-15 * scale) {
        at_vertex = true;
        break;
      }
      num += p / d;
      den += 1.0 / d;
    }
    if (at_vertex) {
      x = x + 1e-9 * (centroid - x) / norm(centroid - x) * scale;
      continue;
    }
    const Point next = num / den;
    const double moved = distance(next, x);
    x = next;
    if (moved < 1e-13 * scale) break;
  }
  return x;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len_sq = norm_sq(ab);
  const double u = len_sq > 0.0 ? std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0) : 0.0;
  return distance(p, a + u * ab);
}

double directed_hausdorff(const std::vector<std::vector<Point>>& from,
                          const std::vector<std::vector<Point>>& to, double spacing) {
  double worst = 0.0;
  auto dist_to_set = [&](Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& line : to) {
      if (line.size() == 1) best = std::min(best, distance(p, line[0]));
      for (std::size_t j = 1; j < line.size(); ++j) {
        best = std::min(best, point_segment_distance(p, line[j - 1], line[j]));
      }
    }
    return best;
  };
  for (const auto& line : from) {
    if (line.size() == 1) worst = std::max(worst, dist_to_set(line[0]));
    for (std::size_t j = 1; j < line.size(); ++j) {
      const Point a = line[j - 1];
      const Point b = line[j];
      const auto pieces =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance(a, b) / spacing)));
      for (std::size_t k = 0; k <= pieces; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(pieces);
        worst = std::max(worst, dist_to_set(a + u * (b - a)));
      }
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<std::vector<Point>>& a,
                          const std::vector<std::vector<Point>>& b) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = hi_x;
  for (const auto* set : {&a, &b}) {
    for (const auto& line : *set) {
      for (const Point& p : line) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
      }
    }
  }
  const double diag = std::hypot(hi_x - lo_x, hi_y - lo_y);
  if (!(diag > 0.0)) return 0.0;
  // Sampling the source polylines at this spacing underestimates the exact
  // value by at most half the spacing.
  const double spacing = 1e-5 * diag;
  return std::max(directed_hausdorff(a, b, spacing), directed_hausdorff(b, a, spacing));
}

SteinerDistance steiner_distance(const Network& geometry, Point a, Point b, Point c) {
  const auto fermat = steiner_point(a, b, c);
  if (!fermat) throw InvalidInput("no Steiner point: a triangle angle is at least 120 degrees");
  std::vector<std::vector<Point>> tree{{*fermat, a}, {*fermat, b}, {*fermat, c}};
  std::vector<std::vector<Point>> lines;
  for (const auto& curve : geometry.curves) lines.emplace_back(curve.points().begin(), curve.points().end());
  SteinerDistance d;
  d.fermat_point = *fermat;
  d.hausdorff = hausdorff_distance(lines, tree);
  d.length_gap =
      total_length(geometry) - (distance(*fermat, a) + distance(*fermat, b) + distance(*fermat, c));
  return d;
}

}  // namespace triodflow
