#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "triodflow/flow.hpp"

namespace triodflow {

/// Initial data for one run: either a triod or a single open curve.
struct Scenario {
  std::string family;
  std::uint64_t seed = 0;
  std::variant<FlowState, CurveFlowState> state;
  /// Prescribed endpoint motion for single curves; empty means fixed.
  EndpointPath endpoint_path;

  bool is_triod() const { return std::holds_alternative<FlowState>(state); }
  Network network() const;
  double time() const;
};

/// Families: steiner, perturbed_steiner, straight_triod, three_halflines,
/// grim_reaper, bowed_curve, line, halfline, snapshot. Throws InvalidInput
/// for unknown families or bad parameters.
Scenario build_scenario(std::string_view family, const nlohmann::json& params,
                        std::uint64_t seed = 0, std::string_view endpoint_motion = "");

struct OutputPaths {
  std::string series = "series.csv";
  std::string snapshot = "snapshot.json";
  /// One snapshot per recorded sample, JSON lines; empty disables.
  std::string trajectory;
};

struct ScenarioConfig {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  /// "fixed" or "translate"; empty picks the family default.
  std::string endpoint_motion;
  FlowConfig flow;
  std::vector<DensityProbe> probes;
  double validation_tol = 1e-6;
  OutputPaths output;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

Scenario build_scenario(const ScenarioConfig& config);

Trajectory run_scenario(const Scenario& scenario, const FlowConfig& flow,
                        std::span<const DensityProbe> probes = {});

/// Compatibility report for triods; single curves always pass orders 0-1.
struct ValidationResult {
  bool ok = true;
  std::string report;
};

ValidationResult validate_scenario(const Scenario& scenario, double tol);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

std::string series_header(std::size_t probe_count);
std::string series_csv(const Trajectory& trajectory, std::size_t probe_count);
void write_series(const Trajectory& trajectory, std::size_t probe_count,
                  const std::filesystem::path& path);

struct Snapshot {
  double t = 0.0;
  Network geometry;
  std::string family;
  std::uint64_t seed = 0;
};

std::string snapshot_json(const Snapshot& snapshot);
Snapshot parse_snapshot(std::string_view text);
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

/// One snapshot per line.
void write_trajectory(const Trajectory& trajectory, std::string_view family, std::uint64_t seed,
                      const std::filesystem::path& path);
/// Reload a trajectory; monitors are recomputed without embeddedness.
std::vector<TrajectorySample> load_trajectory(const std::filesystem::path& path);

/// Dispatch the command line. Returns 0 on success, 1 on validation
/// failure, 2 on usage or runtime errors.
int run_cli(int argc, const char* const* argv);

}  // namespace triodflow
