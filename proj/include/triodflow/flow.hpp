#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "triodflow/functionals.hpp"
#include "triodflow/junction.hpp"

namespace triodflow {

struct FlowConfig {
  /// Safety factor in (0, 1]; explicit Heun is stable up to about 0.5.
  double cfl = 0.25;
  /// Resample every this many steps; 0 disables resampling.
  int resample_every = 50;
  /// Points per curve after resampling; 0 keeps the current count.
  std::size_t points_per_curve = 0;
  double angle_tol = 1e-8;
  double t_end = 1.0;
  double max_curvature = 1e4;
  double min_curve_length = 1e-3;
  /// Record a monitor sample every this many steps (the first and last
  /// states are always recorded).
  int monitor_every = 10;
  bool monitor_embeddedness = true;
  std::int64_t max_steps = 50'000'000;

  void validate() const;
};

/// A triod at simulation time t.
struct FlowState {
  Triod triod;
  double t = 0.0;
  std::int64_t step_count = 0;
  /// Branch lengths at the start of the run; the pinch-off threshold is
  /// relative to these.
  std::array<double, 3> initial_lengths{};
};

FlowState make_flow_state(Triod triod, double t = 0.0);

/// A single open curve for the strip problem and translator checks.
struct CurveFlowState {
  DiscreteCurve curve;
  double t = 0.0;
  std::int64_t step_count = 0;
  double initial_length = 0.0;
};

CurveFlowState make_curve_state(DiscreteCurve curve, double t = 0.0);

/// Positions of the first and last node at time t. An empty path keeps both
/// endpoints fixed.
using EndpointPath = std::function<std::array<Point, 2>(double t)>;

/// cfl * min over interior nodes of |gamma_x|^2 dx^2.
double adaptive_dt(const FlowState& state, double cfl);
double adaptive_dt(const CurveFlowState& state, double cfl);

/// Velocity of every node of a triod under the discrete flow: interior nodes
/// gamma_xx/|gamma_x|^2, the junction the mean of k^i nu^i + lambda^i tau^i,
/// fixed endpoints zero.
std::array<std::vector<Point>, 3> triod_velocities(const Triod& triod);

/// One explicit Heun step followed by junction angle enforcement.
/// Throws PinchOff when a segment falls below 1e-6 of its branch's initial
/// length.
FlowState step(const FlowState& state, double dt, const AngleRelaxation& relaxation = {});

CurveFlowState step(const CurveFlowState& state, double dt, const EndpointPath& path = {});

enum class StopReason { t_end, curvature_blowup, min_length, max_steps };

std::string_view to_string(StopReason reason);

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StopReason reason = StopReason::t_end;
  double final_t = 0.0;
  std::int64_t steps = 0;
  /// Number of steps whose angle relaxation ended above 10x tolerance.
  std::int64_t relaxation_warnings = 0;
};

Trajectory evolve(FlowState state, const FlowConfig& config,
                  std::span<const DensityProbe> probes = {});

/// Single-curve driver: the same stepper without junction logic.
Trajectory evolve(CurveFlowState state, const FlowConfig& config,
                  std::span<const DensityProbe> probes = {}, const EndpointPath& path = {});

}  // namespace triodflow
