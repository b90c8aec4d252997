#include "triodflow/scenarios.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "triodflow/analysis.hpp"
#include "triodflow/errors.hpp"

namespace triodflow {
namespace {

using nlohmann::json;

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T param(const json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<T>();
}

Point point_param(const json& params, const char* key, Point fallback) {
  return params.contains(key) ? point_from(params.at(key)) : fallback;
}

std::array<Point, 3> unit_rays() {
  std::array<Point, 3> p{};
  for (int i = 0; i < 3; ++i) {
    const double a = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / 3.0;
    p[static_cast<std::size_t>(i)] = {std::cos(a), std::sin(a)};
  }
  return p;
}

std::array<Point, 3> endpoints_param(const json& params) {
  if (!params.contains("endpoints")) return unit_rays();
  const json& e = params.at("endpoints");
  if (!e.is_array() || e.size() != 3) throw InvalidInput("endpoints must list 3 points");
  return {point_from(e[0]), point_from(e[1]), point_from(e[2])};
}

std::size_t points_param(const json& params, std::size_t fallback) {
  const auto n = param<std::int64_t>(params, "points", static_cast<std::int64_t>(fallback));
  if (n < 3) throw InvalidInput("points must be >= 3");
  return static_cast<std::size_t>(n);
}

std::vector<Point> segment(Point a, Point b, std::size_t n) {
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(n - 1);
    pts[j] = a + s * (b - a);
  }
  pts.front() = a;
  pts.back() = b;
  return pts;
}

Triod straight_triod(Point o, const std::array<Point, 3>& ends, std::size_t n) {
  return Triod({DiscreteCurve(segment(o, ends[0], n)), DiscreteCurve(segment(o, ends[1], n)),
                DiscreteCurve(segment(o, ends[2], n))});
}

// Portable uniform draw in [-1, 1).
double symmetric_uniform(std::mt19937_64& gen) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

Triod perturbed_triod(const std::array<Point, 3>& ends, double amplitude, int modes,
                      std::size_t n, std::uint64_t seed, double angle_tol) {
  const auto fermat = steiner_point(ends[0], ends[1], ends[2]);
  Point base;
  std::array<Point, 3> dirs{};
  if (fermat) {
    base = *fermat;
    for (std::size_t i = 0; i < 3; ++i) dirs[i] = (ends[i] - base) / distance(ends[i], base);
  } else {
    base = (ends[0] + ends[1] + ends[2]) / 3.0;
    const double sign = cross(ends[1] - ends[0], ends[2] - ends[0]) > 0.0 ? 1.0 : -1.0;
    dirs[0] = (ends[0] - base) / distance(ends[0], base);
    dirs[1] = rotate(dirs[0], sign * 2.0 * std::numbers::pi / 3.0);
    dirs[2] = rotate(dirs[0], -sign * 2.0 * std::numbers::pi / 3.0);
  }
  double mean_ray = 0.0;
  for (const Point& e : ends) mean_ray += distance(e, base) / 3.0;

  std::mt19937_64 gen(seed);
  const Point offset{symmetric_uniform(gen), symmetric_uniform(gen)};
  const Point o = base + (amplitude * mean_ray) * offset;

  std::array<std::vector<Point>, 3> pts;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> coeff(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
      coeff[static_cast<std::size_t>(m)] = symmetric_uniform(gen) / (m + 1);
    }
    const Point chord = ends[i] - o;
    const double len = norm(chord);
    const Point across = rotate_ccw(chord / len);
    const Point m0 = len * dirs[i];
    const Point m1 = chord;
    pts[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = static_cast<double>(j) / static_cast<double>(n - 1);
      const double s2 = s * s;
      const double s3 = s2 * s;
      // Cubic Hermite from o (leaving along dirs[i]) to the endpoint.
      Point p = (2 * s3 - 3 * s2 + 1) * o + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * ends[i] +
                (s3 - s2) * m1;
      double bump = 0.0;
      for (int m = 0; m < modes; ++m) {
        bump += coeff[static_cast<std::size_t>(m)] * std::sin((m + 1) * std::numbers::pi * s);
      }
      p += (amplitude * len * std::sin(std::numbers::pi * s) * bump) * across;
      pts[i][j] = p;
    }
    pts[i].front() = o;
    pts[i].back() = ends[i];
  }
  const Triod raw({DiscreteCurve(std::move(pts[0])), DiscreteCurve(std::move(pts[1])),
                   DiscreteCurve(std::move(pts[2]))});
  return enforce_junction(raw, o, {angle_tol, 50}).triod;
}

EndpointPath translating_path(const DiscreteCurve& curve, Point w) {
  const Point a = curve.front();
  const Point b = curve.back();
  return [a, b, w](double t) { return std::array<Point, 2>{translate(a, w, t), translate(b, w, t)}; };
}

}  // namespace

Network Scenario::network() const {
  if (const auto* s = std::get_if<FlowState>(&state)) return s->triod.network();
  return Network{{std::get<CurveFlowState>(state).curve}, false};
}

double Scenario::time() const {
  return std::visit([](const auto& s) { return s.t; }, state);
}

Scenario build_scenario(std::string_view family, const json& params, std::uint64_t seed,
                        std::string_view endpoint_motion) {
  if (!params.is_object()) throw InvalidInput("scenario params must be an object");
  std::optional<std::variant<FlowState, CurveFlowState>> state;
  EndpointPath path;
  std::string motion(endpoint_motion);

  try {
    if (family == "steiner") {
      const auto ends = endpoints_param(params);
      const auto fermat = steiner_point(ends[0], ends[1], ends[2]);
      if (!fermat) throw InvalidInput("steiner: endpoints admit no 120-degree junction");
      state = make_flow_state(straight_triod(*fermat, ends, points_param(params, 64)));
    } else if (family == "perturbed_steiner") {
      const double amplitude = param<double>(params, "amplitude", 0.05);
      const int modes = param<int>(params, "modes", 3);
      if (modes < 1) throw InvalidInput("modes must be >= 1");
      state = make_flow_state(perturbed_triod(endpoints_param(params), amplitude, modes,
                                                 points_param(params, 64), seed,
                                                 param<double>(params, "angle_tol", 1e-10)));
    } else if (family == "straight_triod") {
      if (!params.contains("junction")) throw InvalidInput("straight_triod needs a junction");
      state = make_flow_state(straight_triod(point_from(params.at("junction")),
                                                endpoints_param(params), points_param(params, 64)));
    } else if (family == "three_halflines") {
      const Point c = point_param(params, "center", {});
      const double extent = param<double>(params, "extent", 1.0);
      const Point d = point_param(params, "direction", {1.0, 0.0});
      const Point u = d / norm(d);
      std::array<Point, 3> ends{};
      for (int i = 0; i < 3; ++i) {
        ends[static_cast<std::size_t>(i)] = c + extent * rotate(u, 2.0 * std::numbers::pi * i / 3.0);
      }
      state = make_flow_state(straight_triod(c, ends, points_param(params, 1001)));
    } else if (family == "grim_reaper") {
      const Point w = point_param(params, "w", {1.0, 0.0});
      DiscreteCurve curve =
          grim_reaper(w, points_param(params, 257), param<double>(params, "y_max", 1.3));
      if (motion.empty()) motion = "translate";
      if (motion == "translate") path = translating_path(curve, w);
      state = make_curve_state(std::move(curve));
    } else if (family == "bowed_curve") {
      const Point a = point_param(params, "start", {0.0, 0.0});
      const Point b = point_param(params, "end", {1.0, 0.0});
      const double amplitude = param<double>(params, "amplitude", 0.2);
      const std::size_t n = points_param(params, 129);
      const Point across = rotate_ccw(b - a);
      std::vector<Point> pts(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double s = static_cast<double>(j) / static_cast<double>(n - 1);
        pts[j] = a + s * (b - a) + (amplitude * std::sin(std::numbers::pi * s)) * across;
      }
      pts.front() = a;
      pts.back() = b;
      state = make_curve_state(DiscreteCurve(std::move(pts)));
    } else if (family == "line" || family == "halfline") {
      const Point c = point_param(params, "center", {});
      const double extent = param<double>(params, "extent", 1.0);
      const Point d = point_param(params, "direction", {1.0, 0.0});
      const Point u = d / norm(d);
      const Point start = family == "line" ? c - extent * u : c;
      state = make_curve_state(DiscreteCurve(segment(start, c + extent * u, points_param(params, 1001))));
    } else if (family == "snapshot") {
      if (!params.contains("file")) throw InvalidInput("snapshot family needs a file");
      const Snapshot snap = load_snapshot(params.at("file").get<std::string>());
      if (snap.geometry.junction) {
        state = make_flow_state(to_triod(snap.geometry), snap.t);
      } else {
        if (snap.geometry.curves.size() != 1) throw InvalidInput("snapshot needs 1 or 3 curves");
        state = make_curve_state(snap.geometry.curves.front(), snap.t);
      }
    } else {
      throw InvalidInput("unknown scenario family '" + std::string(family) + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad scenario parameter: ") + e.what());
  }
  if (!motion.empty() && motion != "fixed" && motion != "translate") {
    throw InvalidInput("endpoint_motion must be 'fixed' or 'translate'");
  }
  if (motion == "translate" && !path) {
    throw InvalidInput("endpoint_motion 'translate' is only defined for grim_reaper");
  }
  return Scenario{std::string(family), seed, std::move(*state), std::move(path)};
}

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig cfg;
  try {
    cfg.family = doc.at("family").get<std::string>();
    if (doc.contains("params")) cfg.params = doc.at("params");
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.endpoint_motion = doc.value("endpoint_motion", std::string{});
    cfg.validation_tol = doc.value("validation_tol", 1e-6);
    if (doc.contains("flow")) {
      const json& f = doc.at("flow");
      FlowConfig& fc = cfg.flow;
      fc.cfl = f.value("cfl", fc.cfl);
      fc.resample_every = f.value("resample_every", fc.resample_every);
      fc.points_per_curve = f.value("points_per_curve", fc.points_per_curve);
      fc.angle_tol = f.value("angle_tol", fc.angle_tol);
      fc.t_end = f.value("t_end", fc.t_end);
      fc.max_curvature = f.value("max_curvature", fc.max_curvature);
      fc.min_curve_length = f.value("min_curve_length", fc.min_curve_length);
      fc.monitor_every = f.value("monitor_every", fc.monitor_every);
      fc.monitor_embeddedness = f.value("monitor_embeddedness", fc.monitor_embeddedness);
      fc.max_steps = f.value("max_steps", fc.max_steps);
    }
    if (doc.contains("probes")) {
      for (const json& p : doc.at("probes")) {
        cfg.probes.push_back({point_from(p.at("x0")), p.at("T").get<double>()});
      }
    }
    if (doc.contains("output")) {
      const json& o = doc.at("output");
      cfg.output.series = o.value("series", cfg.output.series);
      cfg.output.snapshot = o.value("snapshot", cfg.output.snapshot);
      cfg.output.trajectory = o.value("trajectory", cfg.output.trajectory);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad config: ") + e.what());
  }
  cfg.flow.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("config " + path.string() + " is not valid JSON: " + e.what());
  }
  ScenarioConfig cfg = parse_config(doc);
  // Relative snapshot paths resolve against the config's directory.
  if (cfg.family == "snapshot" && cfg.params.contains("file")) {
    std::filesystem::path file = cfg.params.at("file").get<std::string>();
    if (file.is_relative()) cfg.params["file"] = (path.parent_path() / file).string();
  }
  return cfg;
}

Scenario build_scenario(const ScenarioConfig& config) {
  return build_scenario(config.family, config.params, config.seed, config.endpoint_motion);
}

Trajectory run_scenario(const Scenario& scenario, const FlowConfig& flow,
                        std::span<const DensityProbe> probes) {
  if (const auto* s = std::get_if<FlowState>(&scenario.state)) return evolve(*s, flow, probes);
  return evolve(std::get<CurveFlowState>(scenario.state), flow, probes, scenario.endpoint_path);
}

ValidationResult validate_scenario(const Scenario& scenario, double tol) {
  ValidationResult r;
  std::ostringstream out;
  const auto* s = std::get_if<FlowState>(&scenario.state);
  if (!s) {
    out << "single curve: " << std::get<CurveFlowState>(scenario.state).curve.size()
        << " nodes, order 0 ok\n";
    r.report = out.str();
    return r;
  }
  const CompatibilityReport c = compatibility_report(s->triod, tol);
  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  out << "order 0 (concurrency, distinct endpoints): " << verdict(c.order0()) << "\n";
  out << "order 1 (120-degree angles): " << verdict(c.order1())
      << "  angle_defect=" << format_double(c.angle_defect) << "\n";
  out << "order 2a (zero endpoint velocity): " << verdict(c.order2_endpoints())
      << "  max=" << format_double(c.max_endpoint_velocity) << "\n";
  out << "order 2b (matching junction velocity): " << verdict(c.order2_junction())
      << "  max=" << format_double(c.max_junction_velocity_mismatch) << "\n";
  out << "tolerance " << format_double(tol) << "\n";
  r.ok = c.order0() && c.order1();
  r.report = out.str();
  return r;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string series_header(std::size_t probe_count) {
  std::string h =
      "t,L1,L2,L3,L_total,k_l2_sq,k_max_abs,E,sum_k,sum_lambda,angle_defect,junction_vel_spread";
  for (std::size_t i = 0; i < probe_count; ++i) h += ",theta_" + std::to_string(i);
  return h;
}

std::string series_csv(const Trajectory& trajectory, std::size_t probe_count) {
  std::string out = series_header(probe_count) + "\n";
  for (const auto& s : trajectory.samples) {
    const MonitorRecord& r = s.record;
    const double cols[] = {r.t,           r.lengths[0],  r.lengths[1],     r.lengths[2],
                           r.total_length, r.curvature_l2, r.max_abs_curvature, r.embeddedness,
                           r.sum_k,       r.sum_lambda,  r.angle_defect,   r.junction_velocity_spread};
    bool first = true;
    for (double c : cols) {
      if (!first) out += ',';
      out += format_double(c);
      first = false;
    }
    for (std::size_t i = 0; i < probe_count; ++i) {
      out += ',';
      out += format_double(i < r.theta.size() ? r.theta[i] : std::nan(""));
    }
    out += '\n';
  }
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_series(const Trajectory& trajectory, std::size_t probe_count,
                  const std::filesystem::path& path) {
  write_text(path, series_csv(trajectory, probe_count));
}

std::string snapshot_json(const Snapshot& snapshot) {
  nlohmann::ordered_json doc;
  doc["t"] = snapshot.t;
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const auto& c : snapshot.geometry.curves) {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const Point& p : c.points()) pts.push_back({p.x, p.y});
    curves.push_back(std::move(pts));
  }
  doc["curves"] = std::move(curves);
  doc["meta"] = {{"family", snapshot.family}, {"seed", snapshot.seed}};
  return doc.dump();
}

Snapshot parse_snapshot(std::string_view text) {
  Snapshot snap;
  try {
    const json doc = json::parse(text);
    snap.t = doc.at("t").get<double>();
    for (const json& c : doc.at("curves")) {
      std::vector<Point> pts;
      for (const json& p : c) pts.push_back(point_from(p));
      snap.geometry.curves.emplace_back(std::move(pts));
    }
    const json& meta = doc.at("meta");
    snap.family = meta.at("family").get<std::string>();
    snap.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad snapshot: ") + e.what());
  }
  const auto& cs = snap.geometry.curves;
  snap.geometry.junction = cs.size() == 3 && cs[0].front() == cs[1].front() &&
                           cs[0].front() == cs[2].front();
  return snap;
}

void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  write_text(path, snapshot_json(snapshot) + "\n");
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_text(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_trajectory(const Trajectory& trajectory, std::string_view family, std::uint64_t seed,
                      const std::filesystem::path& path) {
  std::string text;
  for (const auto& s : trajectory.samples) {
    text += snapshot_json(Snapshot{s.t, s.geometry, std::string(family), seed});
    text += '\n';
  }
  write_text(path, text);
}

std::vector<TrajectorySample> load_trajectory(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<TrajectorySample> out;
  std::string line;
  std::int64_t index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Snapshot snap = parse_snapshot(line);
    MonitorRecord rec = compute_monitor(snap.geometry, snap.t, {}, false);
    out.push_back(TrajectorySample{snap.t, index++, std::move(snap.geometry), std::move(rec)});
  }
  return out;
}

}  // namespace triodflow
