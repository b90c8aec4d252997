#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "triodflow/geometry.hpp"
#include "triodflow/point.hpp"

namespace triodflow {

/// Base point and estimated singular time for the backward heat kernel.
struct DensityProbe {
  Point x0;
  double T = 1.0;
};

/// One time sample of every tracked quantity.
struct MonitorRecord {
  double t = 0.0;
  std::array<double, 3> lengths{};
  double total_length = 0.0;
  /// integral of k^2 ds over the network
  double curvature_l2 = 0.0;
  double max_abs_curvature = 0.0;
  /// embeddedness ratio; +inf when not computed or unbounded
  double embeddedness = 0.0;
  double sum_k = 0.0;
  double sum_lambda = 0.0;
  double angle_defect = 0.0;
  double junction_velocity_spread = 0.0;
  std::vector<double> theta;
};

struct TrajectorySample {
  double t = 0.0;
  std::int64_t step = 0;
  Network geometry;
  MonitorRecord record;
};

/// Composite trapezoid rule of a nodal quantity against arclength.
template <typename F>
double integrate_nodes(const DiscreteCurve& curve, F&& value) {
  const auto p = curve.points();
  double prev = value(std::size_t{0});
  double sum = 0.0;
  for (std::size_t j = 1; j < p.size(); ++j) {
    const double cur = value(j);
    sum += 0.5 * (prev + cur) * distance(p[j], p[j - 1]);
    prev = cur;
  }
  return sum;
}

/// Integral of k^2 ds, summed over curves.
double curvature_l2(const Network& network);

double max_abs_curvature(const Network& network);

/// |dL/dt + int k^2 ds| at the middle of three consecutive records, with a
/// three-point derivative valid for uneven time spacing.
double length_dissipation_residual(std::span<const MonitorRecord> window);
double length_dissipation_residual(std::span<const TrajectorySample> window);

/// Three-point derivative at the middle node of unevenly spaced samples.
double centered_derivative(double t0, double t1, double t2, double f0, double f1, double f2);

/// Time-dependent scalar test function on the plane.
class TestFunction {
 public:
  virtual ~TestFunction() = default;
  virtual double value(Point x, double t) const = 0;
  virtual Point gradient(Point x, double t) const = 0;
  virtual double time_derivative(Point x, double t) const = 0;
};

/// phi = 1 everywhere.
class UnitTestFunction final : public TestFunction {
 public:
  double value(Point, double) const override { return 1.0; }
  Point gradient(Point, double) const override { return {}; }
  double time_derivative(Point, double) const override { return 0.0; }
};

/// C^2 radial bump (1 - |x-c|^2/r^2)^3 supported in the disc of radius r.
class SmoothBump final : public TestFunction {
 public:
  SmoothBump(Point center, double radius);
  double value(Point x, double t) const override;
  Point gradient(Point x, double t) const override;
  double time_derivative(Point, double) const override { return 0.0; }

 private:
  Point center_;
  double radius_;
};

/// Residual of the weak (Brakke) form of the flow with equality,
/// |d/dt int phi ds - (-int phi k^2 + int <grad phi, k nu> + int phi_t)|,
/// at the middle of three consecutive samples.
double brakke_residual(std::span<const TrajectorySample> window, const TestFunction& phi);

/// Brakke right-hand side terms at one time.
double brakke_rate(const Network& network, double t, const TestFunction& phi);
double integrate_test_function(const Network& network, double t, const TestFunction& phi);

/// Minimum over node pairs of |p - q|^2 / A(p, q), where A is the absolute
/// shoelace area of the polygon formed by the in-network path from p to q
/// and the chord [q, p]. For triods the junction self-pair contributes
/// 4 sqrt(3). Near-collinear pairs (relative area below 1e-14) are skipped.
double embeddedness_ratio(const Network& network);

/// Backward heat kernel e^{-|x-x0|^2 / 4(T-t)} / sqrt(4 pi (T-t)). Throws
/// InvalidProbe when probe.T <= t.
double heat_kernel(Point x, double t, const DensityProbe& probe);

/// Trapezoid integral of the heat kernel over the network. Throws
/// InvalidProbe when probe.T <= t.
double gaussian_density(const Network& network, double t, const DensityProbe& probe);

/// Integral of |k nu + (x - x0)^perp / 2(T-t)|^2 rho ds.
double monotonicity_dissipation(const Network& network, double t, const DensityProbe& probe);

/// Boundary terms <(P - x0) / 2(T-t), tau_out> rho(P, t) at each fixed
/// endpoint, tau_out the outward unit tangent. One entry per triod branch, or
/// two per standalone curve (first end, last end).
std::vector<double> monotonicity_boundary_terms(const Network& network, double t,
                                                const DensityProbe& probe);

struct MonotonicityResidual {
  /// dTheta/dt + dissipation - sum of boundary terms; zero for an exact flow.
  double residual = 0.0;
  double dtheta_dt = 0.0;
  double dissipation = 0.0;
  std::vector<double> boundary_terms;
};

MonotonicityResidual monotonicity_residual(std::span<const TrajectorySample> window,
                                           const DensityProbe& probe);

/// Time integral (trapezoid) of each boundary term over a trajectory.
std::vector<double> boundary_term_integrals(std::span<const TrajectorySample> trajectory,
                                            const DensityProbe& probe);

/// Build a monitor record. Junction quantities are filled for triods only.
MonitorRecord compute_monitor(const Network& network, double t,
                              std::span<const DensityProbe> probes, bool with_embeddedness = true);

}  // namespace triodflow
