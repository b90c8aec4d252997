#include "triodflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "triodflow/errors.hpp"
#include "triodflow/junction.hpp"

namespace triodflow {
namespace {

void require_window(std::size_t size) {
  if (size < 3) throw InvalidInput("a residual window needs at least 3 samples");
}

void require_probe(double t, const DensityProbe& probe) {
  if (!(probe.T > t)) throw InvalidProbe("density probe needs T > t");
}

}  // namespace

double curvature_l2(const Network& network) {
  double total = 0.0;
  for (const auto& c : network.curves) {
    total += integrate_nodes(c, [&](std::size_t j) {
      const double k = curvature(c, j);
      return k * k;
    });
  }
  return total;
}

double max_abs_curvature(const Network& network) {
  double m = 0.0;
  for (const auto& c : network.curves) {
    for (std::size_t j = 0; j < c.size(); ++j) m = std::max(m, std::abs(curvature(c, j)));
  }
  return m;
}

double centered_derivative(double t0, double t1, double t2, double f0, double f1, double f2) {
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw InvalidInput("sample times must be increasing");
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

double length_dissipation_residual(std::span<const MonitorRecord> window) {
  require_window(window.size());
  const double dl = centered_derivative(window[0].t, window[1].t, window[2].t,
                                        window[0].total_length, window[1].total_length,
                                        window[2].total_length);
  return std::abs(dl + window[1].curvature_l2);
}

double length_dissipation_residual(std::span<const TrajectorySample> window) {
  require_window(window.size());
  const std::array<MonitorRecord, 3> records{window[0].record, window[1].record, window[2].record};
  return length_dissipation_residual(records);
}

SmoothBump::SmoothBump(Point center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw InvalidInput("bump radius must be positive");
}

double SmoothBump::value(Point x, double) const {
  const double u = norm_sq(x - center_) / (radius_ * radius_);
  if (u >= 1.0) return 0.0;
  const double w = 1.0 - u;
  return w * w * w;
}

Point SmoothBump::gradient(Point x, double) const {
  const Point d = x - center_;
  const double u = norm_sq(d) / (radius_ * radius_);
  if (u >= 1.0) return {};
  const double w = 1.0 - u;
  return (-6.0 * w * w / (radius_ * radius_)) * d;
}

double integrate_test_function(const Network& network, double t, const TestFunction& phi) {
  double total = 0.0;
  for (const auto& c : network.curves) {
    total += integrate_nodes(c, [&](std::size_t j) { return phi.value(c[j], t); });
  }
  return total;
}

double brakke_rate(const Network& network, double t, const TestFunction& phi) {
  double dissipation = 0.0;
  double transport = 0.0;
  double explicit_time = 0.0;
  for (const auto& c : network.curves) {
    std::vector<LocalFrame> frames;
    frames.reserve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) frames.push_back(local_frame(c, j));
    dissipation += integrate_nodes(c, [&](std::size_t j) {
      const double k = frames[j].curvature;
      return phi.value(c[j], t) * (k * k);
    });
    transport += integrate_nodes(c, [&](std::size_t j) {
      return dot(phi.gradient(c[j], t), frames[j].curvature * frames[j].normal);
    });
    explicit_time += integrate_nodes(c, [&](std::size_t j) { return phi.time_derivative(c[j], t); });
  }
  return -dissipation + transport + explicit_time;
}

double brakke_residual(std::span<const TrajectorySample> window, const TestFunction& phi) {
  require_window(window.size());
  std::array<double, 3> mass{};
  for (std::size_t s = 0; s < 3; ++s) {
    mass[s] = integrate_test_function(window[s].geometry, window[s].t, phi);
  }
  const double d_mass =
      centered_derivative(window[0].t, window[1].t, window[2].t, mass[0], mass[1], mass[2]);
  return std::abs(d_mass - brakke_rate(window[1].geometry, window[1].t, phi));
}

double embeddedness_ratio(const Network& network) {
  if (network.curves.empty()) throw InvalidInput("empty network");
  const Point origin = network.curves.front().front();
  const double scale = total_length(network);
  const double area_floor = 1e-14 * scale * scale;

  // rel[c][j] = node j of curve c relative to origin; prefix[c][m] = twice the
  // signed area swept from node 0 to node m.
  std::vector<std::vector<Point>> rel;
  std::vector<std::vector<double>> prefix;
  for (const auto& c : network.curves) {
    std::vector<Point> r;
    r.reserve(c.size());
    for (const Point& p : c.points()) r.push_back(p - origin);
    std::vector<double> s(c.size(), 0.0);
    for (std::size_t m = 1; m < c.size(); ++m) s[m] = s[m - 1] + cross(r[m - 1], r[m]);
    rel.push_back(std::move(r));
    prefix.push_back(std::move(s));
  }

  double best = network.junction ? 4.0 * std::numbers::sqrt3
                                 : std::numeric_limits<double>::infinity();
  auto consider = [&](Point p, Point q, double twice_area) {
    const double area = 0.5 * std::abs(twice_area);
    if (area < area_floor) return;
    best = std::min(best, norm_sq(p - q) / area);
  };

  for (std::size_t c = 0; c < rel.size(); ++c) {
    const auto& r = rel[c];
    const auto& s = prefix[c];
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = a + 1; b < r.size(); ++b) {
        consider(r[a], r[b], s[b] - s[a] + cross(r[b], r[a]));
      }
    }
  }
  if (network.junction) {
    for (std::size_t ci = 0; ci < rel.size(); ++ci) {
      for (std::size_t cj = ci + 1; cj < rel.size(); ++cj) {
        const auto& ri = rel[ci];
        const auto& rj = rel[cj];
        for (std::size_t a = 1; a < ri.size(); ++a) {
          for (std::size_t b = 1; b < rj.size(); ++b) {
            consider(ri[a], rj[b], -prefix[ci][a] + prefix[cj][b] + cross(rj[b], ri[a]));
          }
        }
      }
    }
  }
  return best;
}

double heat_kernel(Point x, double t, const DensityProbe& probe) {
  require_probe(t, probe);
  const double tau = probe.T - t;
  return std::exp(-norm_sq(x - probe.x0) / (4.0 * tau)) / std::sqrt(4.0 * std::numbers::pi * tau);
}

double gaussian_density(const Network& network, double t, const DensityProbe& probe) {
  require_probe(t, probe);
  double total = 0.0;
  for (const auto& c : network.curves) {
    total += integrate_nodes(c, [&](std::size_t j) { return heat_kernel(c[j], t, probe); });
  }
  return total;
}

double monotonicity_dissipation(const Network& network, double t, const DensityProbe& probe) {
  require_probe(t, probe);
  const double two_tau = 2.0 * (probe.T - t);
  double total = 0.0;
  for (const auto& c : network.curves) {
    total += integrate_nodes(c, [&](std::size_t j) {
      const LocalFrame f = local_frame(c, j);
      const double w = f.curvature + dot(c[j] - probe.x0, f.normal) / two_tau;
      return w * w * heat_kernel(c[j], t, probe);
    });
  }
  return total;
}

std::vector<double> monotonicity_boundary_terms(const Network& network, double t,
                                                const DensityProbe& probe) {
  require_probe(t, probe);
  const double two_tau = 2.0 * (probe.T - t);
  auto term = [&](Point p, Point outward) {
    return dot(p - probe.x0, outward) / two_tau * heat_kernel(p, t, probe);
  };
  std::vector<double> out;
  for (const auto& c : network.curves) {
    const std::size_t last = c.size() - 1;
    if (!network.junction) out.push_back(term(c.front(), -tangent(c, 0)));
    out.push_back(term(c.back(), tangent(c, last)));
  }
  return out;
}

MonotonicityResidual monotonicity_residual(std::span<const TrajectorySample> window,
                                           const DensityProbe& probe) {
  require_window(window.size());
  std::array<double, 3> theta{};
  for (std::size_t s = 0; s < 3; ++s) {
    theta[s] = gaussian_density(window[s].geometry, window[s].t, probe);
  }
  MonotonicityResidual r;
  r.dtheta_dt =
      centered_derivative(window[0].t, window[1].t, window[2].t, theta[0], theta[1], theta[2]);
  r.dissipation = monotonicity_dissipation(window[1].geometry, window[1].t, probe);
  r.boundary_terms = monotonicity_boundary_terms(window[1].geometry, window[1].t, probe);
  double boundary = 0.0;
  for (double b : r.boundary_terms) boundary += b;
  r.residual = r.dtheta_dt + r.dissipation - boundary;
  return r;
}

std::vector<double> boundary_term_integrals(std::span<const TrajectorySample> trajectory,
                                            const DensityProbe& probe) {
  if (trajectory.empty()) return {};
  std::vector<double> prev = monotonicity_boundary_terms(trajectory[0].geometry, trajectory[0].t, probe);
  std::vector<double> acc(prev.size(), 0.0);
  for (std::size_t s = 1; s < trajectory.size(); ++s) {
    std::vector<double> cur =
        monotonicity_boundary_terms(trajectory[s].geometry, trajectory[s].t, probe);
    const double dt = trajectory[s].t - trajectory[s - 1].t;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * (prev[i] + cur[i]) * dt;
    prev = std::move(cur);
  }
  return acc;
}

MonitorRecord compute_monitor(const Network& network, double t,
                              std::span<const DensityProbe> probes, bool with_embeddedness) {
  MonitorRecord r;
  r.t = t;
  for (std::size_t i = 0; i < network.curves.size() && i < 3; ++i) {
    r.lengths[i] = network.curves[i].length();
  }
  r.total_length = total_length(network);
  r.curvature_l2 = curvature_l2(network);
  r.max_abs_curvature = max_abs_curvature(network);
  r.embeddedness = with_embeddedness ? embeddedness_ratio(network)
                                     : std::numeric_limits<double>::quiet_NaN();
  if (network.junction && network.curves.size() == 3) {
    const Triod triod = to_triod(network);
    const JunctionReport jr = junction_identities(triod);
    r.sum_k = jr.sum_k;
    r.sum_lambda = jr.sum_lambda;
    r.angle_defect = jr.angle_defect;
    const auto v = junction_velocities(triod);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        r.junction_velocity_spread = std::max(r.junction_velocity_spread, distance(v[i], v[j]));
      }
    }
  }
  r.theta.reserve(probes.size());
  for (const auto& probe : probes) {
    // Probes whose singular time has passed are recorded as NaN.
    r.theta.push_back(probe.T > t ? gaussian_density(network, t, probe)
                                  : std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

}  // namespace triodflow
