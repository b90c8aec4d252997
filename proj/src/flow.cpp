#include "triodflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "triodflow/errors.hpp"

namespace triodflow {
namespace {

constexpr double kPinchFraction = 1e-6;

double min_segment(std::span<const Point> p) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < p.size(); ++j) m = std::min(m, distance(p[j], p[j - 1]));
  return m;
}

void check_pinch(std::span<const Point> p, double reference, int curve, double t) {
  if (min_segment(p) < kPinchFraction * reference) {
    throw PinchOff("pinch-off on curve " + std::to_string(curve) + " at t=" + std::to_string(t),
                   curve, t);
  }
}

DiscreteCurve make_curve(std::vector<Point> pts, double reference, int curve, double t) {
  check_pinch(pts, reference, curve, t);
  try {
    return DiscreteCurve(std::move(pts));
  } catch (const DegenerateGeometry&) {
    throw PinchOff("node collision on curve " + std::to_string(curve), curve, t);
  }
}

double min_interior_metric(const DiscreteCurve& c) {
  const auto p = c.points();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < p.size(); ++j) m = std::min(m, 0.25 * norm_sq(p[j + 1] - p[j - 1]));
  return m;
}

std::vector<Point> interior_velocities(const DiscreteCurve& c) {
  std::vector<Point> v(c.size());
  for (std::size_t j = 1; j + 1 < c.size(); ++j) v[j] = local_frame(c, j).velocity;
  return v;
}

Triod advance(const Triod& base, const std::array<std::vector<Point>, 3>& v, double dt,
              const std::array<double, 3>& reference, double t) {
  const Point o = base.junction() + dt * v[0][0];
  std::array<std::vector<Point>, 3> pts;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto src = base.curves()[i].points();
    pts[i].resize(src.size());
    pts[i].front() = o;
    for (std::size_t j = 1; j + 1 < src.size(); ++j) pts[i][j] = src[j] + dt * v[i][j];
    pts[i].back() = src.back();
  }
  return Triod({make_curve(std::move(pts[0]), reference[0], 0, t),
                make_curve(std::move(pts[1]), reference[1], 1, t),
                make_curve(std::move(pts[2]), reference[2], 2, t)});
}

double max_curvature_of(const Network& network) { return max_abs_curvature(network); }

}  // namespace

void FlowConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("cfl must lie in (0, 1]");
  if (resample_every < 0) throw InvalidInput("resample_every must be >= 0");
  if (points_per_curve != 0 && points_per_curve < 3) {
    throw InvalidInput("points_per_curve must be >= 3");
  }
  if (monitor_every < 1) throw InvalidInput("monitor_every must be >= 1");
  if (!(angle_tol > 0.0)) throw InvalidInput("angle_tol must be positive");
  if (!(max_curvature > 0.0)) throw InvalidInput("max_curvature must be positive");
  if (!(min_curve_length >= 0.0)) throw InvalidInput("min_curve_length must be >= 0");
  if (max_steps < 0) throw InvalidInput("max_steps must be >= 0");
}

FlowState make_flow_state(Triod triod, double t) {
  std::array<double, 3> lengths{triod.curve(0).length(), triod.curve(1).length(),
                                triod.curve(2).length()};
  return FlowState{std::move(triod), t, 0, lengths};
}

CurveFlowState make_curve_state(DiscreteCurve curve, double t) {
  const double length = curve.length();
  return CurveFlowState{std::move(curve), t, 0, length};
}

double adaptive_dt(const FlowState& state, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("cfl must lie in (0, 1]");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : state.triod.curves()) m = std::min(m, min_interior_metric(c));
  if (!(m > 0.0)) throw DegenerateGeometry("zero interior stencil");
  return cfl * m;
}

double adaptive_dt(const CurveFlowState& state, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("cfl must lie in (0, 1]");
  const double m = min_interior_metric(state.curve);
  if (!(m > 0.0)) throw DegenerateGeometry("zero interior stencil");
  return cfl * m;
}

std::array<std::vector<Point>, 3> triod_velocities(const Triod& triod) {
  std::array<std::vector<Point>, 3> v;
  for (std::size_t i = 0; i < 3; ++i) v[i] = interior_velocities(triod.curves()[i]);
  const auto per_branch = junction_velocities(triod);
  const Point mean = (per_branch[0] + per_branch[1] + per_branch[2]) / 3.0;
  for (auto& vi : v) vi.front() = mean;
  return v;
}

namespace {

// Heun step; the flag reports whether angle relaxation converged.
std::pair<FlowState, bool> heun_step(const FlowState& state, double dt,
                                     const AngleRelaxation& relaxation) {
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  const auto v1 = triod_velocities(state.triod);
  const Triod predictor = advance(state.triod, v1, dt, state.initial_lengths, state.t + dt);
  const auto v2 = triod_velocities(predictor);

  std::array<std::vector<Point>, 3> mean_v;
  for (std::size_t i = 0; i < 3; ++i) {
    mean_v[i].resize(v1[i].size());
    for (std::size_t j = 0; j < v1[i].size(); ++j) mean_v[i][j] = 0.5 * (v1[i][j] + v2[i][j]);
  }
  const Triod corrected = advance(state.triod, mean_v, dt, state.initial_lengths, state.t + dt);
  JunctionEnforcement enforced = enforce_junction(corrected, corrected.junction(), relaxation);

  const bool converged = enforced.converged;
  FlowState next{std::move(enforced.triod), state.t + dt, state.step_count + 1,
                 state.initial_lengths};
  for (int i = 0; i < 3; ++i) {
    check_pinch(next.triod.curve(i).points(), state.initial_lengths[static_cast<std::size_t>(i)], i,
                next.t);
  }
  return {std::move(next), converged};
}

}  // namespace

FlowState step(const FlowState& state, double dt, const AngleRelaxation& relaxation) {
  return heun_step(state, dt, relaxation).first;
}

CurveFlowState step(const CurveFlowState& state, double dt, const EndpointPath& path) {
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  const double t_next = state.t + dt;
  const std::array<Point, 2> ends =
      path ? path(t_next) : std::array<Point, 2>{state.curve.front(), state.curve.back()};

  auto advance_curve = [&](const DiscreteCurve& base, const std::vector<Point>& v) {
    const auto src = base.points();
    std::vector<Point> pts(src.size());
    pts.front() = ends[0];
    for (std::size_t j = 1; j + 1 < src.size(); ++j) pts[j] = src[j] + dt * v[j];
    pts.back() = ends[1];
    return make_curve(std::move(pts), state.initial_length, 0, t_next);
  };

  const auto v1 = interior_velocities(state.curve);
  const DiscreteCurve predictor = advance_curve(state.curve, v1);
  const auto v2 = interior_velocities(predictor);
  std::vector<Point> mean_v(v1.size());
  for (std::size_t j = 0; j < v1.size(); ++j) mean_v[j] = 0.5 * (v1[j] + v2[j]);
  return CurveFlowState{advance_curve(state.curve, mean_v), t_next, state.step_count + 1,
                        state.initial_length};
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::t_end:
      return "t_end";
    case StopReason::curvature_blowup:
      return "curvature_blowup";
    case StopReason::min_length:
      return "min_length";
    case StopReason::max_steps:
      return "max_steps";
  }
  return "unknown";
}

namespace {

// Shared driver loop. `Ops` supplies network(), dt(), advance(dt) and
// resample() for the concrete state type.
template <typename State, typename Ops>
Trajectory run_loop(State state, const FlowConfig& config, std::span<const DensityProbe> probes,
                    Ops ops) {
  config.validate();
  Trajectory traj;
  auto record = [&](const State& s) {
    Network net = ops.network(s);
    MonitorRecord rec = compute_monitor(net, s.t, probes, config.monitor_embeddedness);
    traj.samples.push_back(TrajectorySample{s.t, s.step_count, std::move(net), std::move(rec)});
  };
  record(state);

  while (true) {
    if (state.t >= config.t_end) {
      traj.reason = StopReason::t_end;
      break;
    }
    if (state.step_count >= config.max_steps) {
      traj.reason = StopReason::max_steps;
      break;
    }
    const Network net = ops.network(state);
    if (max_curvature_of(net) > config.max_curvature) {
      traj.reason = StopReason::curvature_blowup;
      break;
    }
    bool too_short = false;
    for (const auto& c : net.curves) too_short = too_short || c.length() < config.min_curve_length;
    if (too_short) {
      traj.reason = StopReason::min_length;
      break;
    }

    double dt = ops.dt(state, config.cfl);
    const bool last = dt >= config.t_end - state.t;
    if (last) dt = config.t_end - state.t;
    state = ops.advance(state, dt, traj);
    if (last) state.t = config.t_end;

    if (config.resample_every > 0 && state.step_count % config.resample_every == 0) {
      state = ops.resample(state, config, traj);
    }
    if (state.step_count % config.monitor_every == 0) record(state);
  }
  if (traj.samples.back().step != state.step_count) record(state);
  traj.final_t = state.t;
  traj.steps = state.step_count;
  return traj;
}

}  // namespace

Trajectory evolve(FlowState state, const FlowConfig& config, std::span<const DensityProbe> probes) {
  const AngleRelaxation relaxation{config.angle_tol, 8};
  struct Ops {
    AngleRelaxation relaxation;
    Network network(const FlowState& s) const { return s.triod.network(); }
    double dt(const FlowState& s, double cfl) const { return adaptive_dt(s, cfl); }
    FlowState advance(const FlowState& s, double dt, Trajectory& traj) const {
      auto [next, converged] = heun_step(s, dt, relaxation);
      if (!converged) ++traj.relaxation_warnings;
      return next;
    }
    FlowState resample(const FlowState& s, const FlowConfig& cfg, Trajectory& traj) const {
      std::array<std::vector<Point>, 3> pts;
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& c = s.triod.curves()[i];
        const std::size_t n = cfg.points_per_curve ? cfg.points_per_curve : c.size();
        const DiscreteCurve r = resample_uniform(c, n);
        pts[i].assign(r.points().begin(), r.points().end());
      }
      const Triod resampled({DiscreteCurve(std::move(pts[0])), DiscreteCurve(std::move(pts[1])),
                             DiscreteCurve(std::move(pts[2]))});
      JunctionEnforcement e = enforce_junction(resampled, resampled.junction(), relaxation);
      if (!e.converged) ++traj.relaxation_warnings;
      return FlowState{std::move(e.triod), s.t, s.step_count, s.initial_lengths};
    }
  };
  return run_loop(std::move(state), config, probes, Ops{relaxation});
}

Trajectory evolve(CurveFlowState state, const FlowConfig& config,
                  std::span<const DensityProbe> probes, const EndpointPath& path) {
  struct Ops {
    const EndpointPath& path;
    Network network(const CurveFlowState& s) const { return Network{{s.curve}, false}; }
    double dt(const CurveFlowState& s, double cfl) const { return adaptive_dt(s, cfl); }
    CurveFlowState advance(const CurveFlowState& s, double dt, Trajectory&) const {
      return step(s, dt, path);
    }
    CurveFlowState resample(const CurveFlowState& s, const FlowConfig& cfg, Trajectory&) const {
      const std::size_t n = cfg.points_per_curve ? cfg.points_per_curve : s.curve.size();
      return CurveFlowState{resample_uniform(s.curve, n), s.t, s.step_count, s.initial_length};
    }
  };
  return run_loop(std::move(state), config, probes, Ops{path});
}

}  // namespace triodflow
