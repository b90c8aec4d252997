#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "triodflow/analysis.hpp"
#include "triodflow/errors.hpp"
#include "triodflow/scenarios.hpp"

namespace triodflow {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts.config, "scenario config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--seed", opts.seed, "override the config seed");
}

ScenarioConfig load(const CommonOptions& opts) {
  ScenarioConfig cfg = load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

fs::path output_path(const CommonOptions& opts, const std::string& name) {
  fs::create_directories(opts.out);
  return fs::path(opts.out) / name;
}

double min_embeddedness(const Trajectory& traj) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples) {
    if (!std::isnan(s.record.embeddedness)) m = std::min(m, s.record.embeddedness);
  }
  return m;
}

void print_summary(const Trajectory& traj) {
  const MonitorRecord& first = traj.samples.front().record;
  const MonitorRecord& last = traj.samples.back().record;
  std::cout << "stop: " << to_string(traj.reason) << "\n"
            << "t_final: " << format_double(traj.final_t) << "\n"
            << "steps: " << traj.steps << "\n"
            << "samples: " << traj.samples.size() << "\n"
            << "length: " << format_double(first.total_length) << " -> "
            << format_double(last.total_length) << "\n"
            << "k_max_abs: " << format_double(first.max_abs_curvature) << " -> "
            << format_double(last.max_abs_curvature) << "\n"
            << "E_min: " << format_double(min_embeddedness(traj)) << "\n";
  if (traj.relaxation_warnings > 0) {
    std::cout << "warning: angle relaxation missed tolerance " << traj.relaxation_warnings
              << " times\n";
  }
}

void write_outputs(const ScenarioConfig& cfg, const CommonOptions& opts, const Scenario& sc,
                   const Trajectory& traj) {
  write_series(traj, cfg.probes.size(), output_path(opts, cfg.output.series));
  const auto& last = traj.samples.back();
  write_snapshot(Snapshot{last.t, last.geometry, sc.family, sc.seed},
                 output_path(opts, cfg.output.snapshot));
  if (!cfg.output.trajectory.empty()) {
    write_trajectory(traj, sc.family, sc.seed, output_path(opts, cfg.output.trajectory));
  }
}

int cmd_run(const CommonOptions& opts) {
  const ScenarioConfig cfg = load(opts);
  const Scenario sc = build_scenario(cfg);
  const ValidationResult v = validate_scenario(sc, cfg.validation_tol);
  if (!v.ok) {
    std::cout << v.report << "validation failed\n";
    return 1;
  }
  const Trajectory traj = run_scenario(sc, cfg.flow, cfg.probes);
  write_outputs(cfg, opts, sc, traj);
  print_summary(traj);
  return 0;
}

int cmd_validate(const CommonOptions& opts) {
  const ScenarioConfig cfg = load(opts);
  const Scenario sc = build_scenario(cfg);
  const ValidationResult v = validate_scenario(sc, cfg.validation_tol);
  std::cout << v.report << (v.ok ? "valid\n" : "validation failed\n");
  return v.ok ? 0 : 1;
}

int report_analysis(const std::vector<TrajectorySample>& samples, const CommonOptions& opts,
                    const std::string& family, std::uint64_t seed) {
  if (samples.size() < 8) {
    std::cout << "too few samples for a blow-up fit (" << samples.size() << ")\n";
    return 1;
  }
  const auto series = curvature_series(samples);
  const BlowupFit fit = estimate_blowup(series);
  std::cout << "classification: " << to_string(fit.classification) << "\n"
            << "T_est: " << format_double(fit.T) << "\n"
            << "C_est: " << format_double(fit.C) << "\n"
            << "fit_residual: " << format_double(fit.fit_residual) << "\n"
            << "trend: " << format_double(fit.trend) << "\n";
  if (fit.classification == BlowupClass::no_blowup) return 0;
  const auto ladder = hamilton_rescale(samples, fit.T);
  for (const auto& rung : ladder) {
    std::cout << "rung n=" << rung.n << " t=" << format_double(rung.t) << " curve=" << rung.curve
              << " node=" << rung.node << " k=" << format_double(rung.curvature)
              << " rescaled_max_k=" << format_double(rung.max_abs_curvature) << "\n";
    write_snapshot(Snapshot{0.0, rung.geometry, family, seed},
                   output_path(opts, "hamilton_" + std::to_string(rung.n) + ".json"));
  }
  return 0;
}

int cmd_analyze(const CommonOptions& opts, const std::string& trajectory_path) {
  if (!trajectory_path.empty()) {
    return report_analysis(load_trajectory(trajectory_path), opts, "trajectory", 0);
  }
  if (opts.config.empty()) {
    std::cerr << "analyze needs --config or --trajectory\n";
    return 2;
  }
  const ScenarioConfig cfg = load(opts);
  const Scenario sc = build_scenario(cfg);
  const Trajectory traj = run_scenario(sc, cfg.flow, cfg.probes);
  write_outputs(cfg, opts, sc, traj);
  print_summary(traj);
  return report_analysis(traj.samples, opts, sc.family, sc.seed);
}

int cmd_steiner(const CommonOptions& opts, double hausdorff_tol, double gap_tol) {
  const ScenarioConfig cfg = load(opts);
  const Scenario sc = build_scenario(cfg);
  if (!sc.is_triod()) {
    std::cerr << "steiner needs a triod scenario\n";
    return 2;
  }
  const ValidationResult v = validate_scenario(sc, cfg.validation_tol);
  if (!v.ok) {
    std::cout << v.report << "validation failed\n";
    return 1;
  }
  const Triod& initial = std::get<FlowState>(sc.state).triod;
  const Point a = initial.endpoint(0), b = initial.endpoint(1), c = initial.endpoint(2);
  const Trajectory traj = run_scenario(sc, cfg.flow, cfg.probes);
  write_outputs(cfg, opts, sc, traj);
  print_summary(traj);
  const auto fermat = steiner_point(a, b, c);
  if (!fermat) {
    std::cout << "steiner_point: absent (a triangle angle is at least 120 degrees)\n";
    return 0;
  }
  const SteinerDistance d = steiner_distance(traj.samples.back().geometry, a, b, c);
  std::cout << "fermat_point: " << format_double(fermat->x) << " " << format_double(fermat->y)
            << "\n"
            << "hausdorff: " << format_double(d.hausdorff) << "\n"
            << "length_gap: " << format_double(d.length_gap) << "\n"
            << "converged: "
            << (d.hausdorff < hausdorff_tol && std::abs(d.length_gap) < gap_tol ? "yes" : "no")
            << "\n";
  return 0;
}

int cmd_selfsimilar(const CommonOptions& opts, const std::string& family,
                    const std::vector<double>& w, double y_max, std::size_t n, bool write) {
  Network geometry;
  double residual = 0.0;
  std::string label;
  if (family == "grim_reaper") {
    if (w.size() != 2) throw InvalidInput("--w needs two components");
    const Point wp{w[0], w[1]};
    geometry = Network{{grim_reaper(wp, n, y_max)}, false};
    residual = translator_residual(geometry, wp);
    label = "translator_residual";
  } else if (family == "three_halflines") {
    geometry = std::get<FlowState>(
                   build_scenario("three_halflines",
                                  {{"extent", 1.0}, {"points", static_cast<std::int64_t>(n)}})
                       .state)
                   .triod.network();
    residual = shrinker_residual(geometry);
    label = "shrinker_residual";
  } else if (family == "circle") {
    std::vector<Point> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n - 1);
      pts[j] = {std::cos(a), std::sin(a)};
    }
    pts.back() = pts.front();
    geometry = Network{{DiscreteCurve(std::move(pts))}, false};
    residual = shrinker_residual(geometry);
    label = "shrinker_residual";
  } else {
    throw InvalidInput("unknown self-similar family '" + family + "'");
  }
  std::cout << "family: " << family << "\n" << label << ": " << format_double(residual) << "\n";
  if (write) {
    write_snapshot(Snapshot{0.0, geometry, family, opts.seed.value_or(0)},
                   output_path(opts, family + ".json"));
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Curvature flow of planar triods"};
  app.require_subcommand(1);

  CommonOptions run_opts, validate_opts, analyze_opts, steiner_opts, self_opts;
  auto* run = app.add_subcommand("run", "evolve a scenario and write the monitor series");
  add_common(run, run_opts, true);
  auto* validate = app.add_subcommand("validate", "check compatibility conditions");
  add_common(validate, validate_opts, true);
  auto* analyze = app.add_subcommand("analyze", "blow-up fit and Hamilton ladder");
  add_common(analyze, analyze_opts, false);
  std::string trajectory_path;
  analyze->add_option("--trajectory", trajectory_path, "recorded trajectory (JSON lines)");
  auto* steiner = app.add_subcommand("steiner", "flow a triod and compare to the Steiner tree");
  add_common(steiner, steiner_opts, true);
  double hausdorff_tol = 1e-3, gap_tol = 1e-6;
  steiner->add_option("--hausdorff-tol", hausdorff_tol);
  steiner->add_option("--gap-tol", gap_tol);
  auto* self = app.add_subcommand("selfsimilar", "generate a self-similar curve and its residual");
  add_common(self, self_opts, false);
  std::string family = "grim_reaper";
  std::vector<double> w{1.0, 0.0};
  double y_max = 1.3;
  std::size_t n = 257;
  self->add_option("--family", family, "grim_reaper | three_halflines | circle");
  self->add_option("--w", w, "translation velocity")->expected(2);
  self->add_option("--ymax", y_max);
  self->add_option("--n", n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*validate) return cmd_validate(validate_opts);
    if (*analyze) return cmd_analyze(analyze_opts, trajectory_path);
    if (*steiner) return cmd_steiner(steiner_opts, hausdorff_tol, gap_tol);
    if (*self) {
      return cmd_selfsimilar(self_opts, family, w, y_max, n,
                             self->count("--out") > 0);
    }
  } catch (const PinchOff& e) {
    std::cerr << "pinch-off: " << e.what() << " (curve " << e.curve().value_or(-1) << ", t="
              << format_double(e.time()) << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace triodflow
