#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "triodflow/analysis.hpp"
#include "triodflow/errors.hpp"
#include "triodflow/scenarios.hpp"

namespace triodflow {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::steiner_triod;

const fs::path kConfigs = TRIODFLOW_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "triodflow_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "triodflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

TEST(BuildScenario, Steiner) {
  const Scenario sc = build_scenario("steiner", json::object());
  ASSERT_TRUE(sc.is_triod());
  const Triod& t = std::get<FlowState>(sc.state).triod;
  EXPECT_LT(norm(t.junction()), 1e-12);
  EXPECT_LT(angle_defect(t), 1e-12);
  EXPECT_TRUE(compatibility_report(t).order2());
  EXPECT_EQ(t.curve(0).size(), 64u);
}

TEST(BuildScenario, PerturbedSteinerSeedSeven) {
  const Scenario sc = build_scenario("perturbed_steiner", json{{"amplitude", 0.05}}, 7);
  const Triod& t = std::get<FlowState>(sc.state).triod;
  const CompatibilityReport r = compatibility_report(t);
  EXPECT_TRUE(r.order0());
  EXPECT_TRUE(r.order1());
  EXPECT_GT(embeddedness_ratio(t.network()), 5.0);
  EXPECT_GT(norm(t.junction()), 1e-4);
}

TEST(BuildScenario, SeedChangesPerturbation) {
  const Scenario a = build_scenario("perturbed_steiner", json::object(), 7);
  const Scenario b = build_scenario("perturbed_steiner", json::object(), 7);
  const Scenario c = build_scenario("perturbed_steiner", json::object(), 8);
  EXPECT_EQ(std::get<FlowState>(a.state).triod, std::get<FlowState>(b.state).triod);
  EXPECT_FALSE(std::get<FlowState>(a.state).triod == std::get<FlowState>(c.state).triod);
}

TEST(BuildScenario, GrimReaper) {
  const Scenario sc = build_scenario("grim_reaper", json{{"y_max", 1.3}, {"points", 257}});
  ASSERT_FALSE(sc.is_triod());
  EXPECT_LT(translator_residual(sc.network(), {1, 0}), 1e-3);
  ASSERT_TRUE(sc.endpoint_path);
  const auto ends = sc.endpoint_path(0.25);
  const auto& c = std::get<CurveFlowState>(sc.state).curve;
  EXPECT_EQ(ends[0], (c.front() + Point{0.25, 0}));
  EXPECT_FALSE(build_scenario("grim_reaper", json::object(), 0, "fixed").endpoint_path);
}

TEST(BuildScenario, Errors) {
  EXPECT_THROW(build_scenario("hexagon", json::object()), InvalidInput);
  EXPECT_THROW(build_scenario("steiner", json{{"points", 2}}), InvalidInput);
  EXPECT_THROW(build_scenario("steiner", json{{"points", "many"}}), InvalidInput);
  EXPECT_THROW(build_scenario("straight_triod", json::object()), InvalidInput);
  EXPECT_THROW(build_scenario("bowed_curve", json::object(), 0, "translate"), InvalidInput);
  EXPECT_THROW(build_scenario("steiner", json{{"endpoints", {{-1, 0}, {1, 0}, {0, 0.1}}}}), InvalidInput);
}

TEST(BuildScenario, StraightTriodWithBadAnglesValidatesFalse) {
  const ScenarioConfig cfg = load_config(kConfigs / "bad_angles.json");
  const ValidationResult v = validate_scenario(build_scenario(cfg), cfg.validation_tol);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.report.find("order 1 (120-degree angles): FAIL"), std::string::npos);
}

TEST(ParseConfig, ReadsEverything) {
  const json doc = json::parse(R"({
    "family": "bowed_curve", "params": {"points": 40}, "seed": 12,
    "endpoint_motion": "fixed", "validation_tol": 1e-5,
    "flow": {"cfl": 0.2, "resample_every": 0, "t_end": 0.3, "monitor_every": 3,
             "monitor_embeddedness": false, "max_steps": 99, "points_per_curve": 50},
    "probes": [{"x0": [0.5, 0], "T": 1.0}],
    "output": {"series": "a.csv", "snapshot": "b.json", "trajectory": "c.jsonl"}})");
  const ScenarioConfig cfg = parse_config(doc);
  EXPECT_EQ(cfg.family, "bowed_curve");
  EXPECT_EQ(cfg.seed, 12u);
  EXPECT_EQ(cfg.flow.cfl, 0.2);
  EXPECT_EQ(cfg.flow.max_steps, 99);
  EXPECT_EQ(cfg.flow.points_per_curve, 50u);
  EXPECT_FALSE(cfg.flow.monitor_embeddedness);
  ASSERT_EQ(cfg.probes.size(), 1u);
  EXPECT_EQ(cfg.probes[0].x0, (Point{0.5, 0}));
  EXPECT_EQ(cfg.output.trajectory, "c.jsonl");
  EXPECT_EQ(cfg.validation_tol, 1e-5);
  EXPECT_THROW(parse_config(json{{"params", json::object()}}), InvalidInput);
  EXPECT_THROW(parse_config(json{{"family", "steiner"}, {"flow", {{"cfl", 2.0}}}}), InvalidInput);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Series, HeaderAndRows) {
  FlowConfig cfg;
  cfg.t_end = 3 * adaptive_dt(make_flow_state(steiner_triod(16)), cfg.cfl) * 0.999;
  cfg.monitor_every = 100;
  const std::vector<DensityProbe> probes{{{0, 0}, 5.0}, {{0.1, 0}, 5.0}};
  const Trajectory tr = evolve(make_flow_state(steiner_triod(16)), cfg, probes);
  ASSERT_EQ(tr.samples.size(), 2u);
  const std::string csv = series_csv(tr, probes.size());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "t,L1,L2,L3,L_total,k_l2_sq,k_max_abs,E,sum_k,sum_lambda,angle_defect,"
            "junction_vel_spread,theta_0,theta_1");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
    ASSERT_EQ(cols.size(), 14u);
    EXPECT_NEAR(cols[4], cols[1] + cols[2] + cols[3], 1e-12);
  }
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
}

TEST(Series, ThreeSamples) {
  FlowConfig cfg;
  cfg.monitor_every = 1;
  cfg.max_steps = 2;
  const Trajectory tr = evolve(make_flow_state(steiner_triod(11)), cfg);
  const std::string csv = series_csv(tr, 0);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Snapshot, ElevenPointTriod) {
  const Triod t = steiner_triod(11);
  const std::string text = snapshot_json(Snapshot{0.5, t.network(), "steiner", 3});
  const json doc = json::parse(text);
  EXPECT_EQ(doc.at("t").get<double>(), 0.5);
  ASSERT_EQ(doc.at("curves").size(), 3u);
  for (const auto& c : doc.at("curves")) {
    ASSERT_EQ(c.size(), 11u);
    EXPECT_EQ(c[0], doc.at("curves")[0][0]);
  }
  EXPECT_EQ(doc.at("meta").at("family"), "steiner");
  EXPECT_EQ(doc.at("meta").at("seed"), 3);
  EXPECT_EQ(text.find(" "), std::string::npos);
  EXPECT_EQ(text.substr(0, 5), "{\"t\":");
}

TEST(Snapshot, RoundTripIsByteIdentical) {
  const Scenario sc = build_scenario("perturbed_steiner", json{{"points", 20}}, 7);
  const fs::path dir = scratch("roundtrip");
  const Snapshot snap{0.125, sc.network(), "perturbed_steiner", 7};
  write_snapshot(snap, dir / "a.json");
  const Snapshot back = load_snapshot(dir / "a.json");
  EXPECT_TRUE(back.geometry.junction);
  EXPECT_EQ(to_triod(back.geometry), std::get<FlowState>(sc.state).triod);
  write_snapshot(back, dir / "b.json");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(Snapshot, LoadsAsScenario) {
  const fs::path dir = scratch("snapshot_family");
  const Triod t = steiner_triod(9);
  write_snapshot(Snapshot{0.25, t.network(), "steiner", 0}, dir / "s.json");
  const Scenario sc = build_scenario("snapshot", json{{"file", (dir / "s.json").string()}});
  EXPECT_EQ(std::get<FlowState>(sc.state).triod, t);
  EXPECT_EQ(sc.time(), 0.25);
  EXPECT_THROW(parse_snapshot("{\"t\": 1}"), InvalidInput);
  EXPECT_THROW(load_snapshot(dir / "missing.json"), std::runtime_error);
}

TEST(Trajectory, WriteAndReload) {
  FlowConfig cfg;
  cfg.t_end = 0.01;
  cfg.monitor_every = 5;
  const Scenario sc = build_scenario("bowed_curve", json{{"points", 33}});
  const Trajectory tr = run_scenario(sc, cfg);
  const fs::path dir = scratch("trajectory");
  write_trajectory(tr, "bowed_curve", 0, dir / "t.jsonl");
  const auto back = load_trajectory(dir / "t.jsonl");
  ASSERT_EQ(back.size(), tr.samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].t, tr.samples[i].t);
    EXPECT_EQ(back[i].geometry.curves[0], tr.samples[i].geometry.curves[0]);
    EXPECT_EQ(back[i].record.max_abs_curvature, tr.samples[i].record.max_abs_curvature);
  }
}

TEST(Cli, RunSteinerIsFlat) {
  const fs::path out = scratch("cli_run");
  ASSERT_EQ(cli({"run", "--config", (kConfigs / "steiner.json").string(), "--out", out.string()}), 0);
  const std::string csv = slurp(out / "series.csv");
  EXPECT_EQ(csv.substr(0, 2), "t,");
  const Snapshot snap = load_snapshot(out / "snapshot.json");
  EXPECT_EQ(snap.t, 1.0);
  EXPECT_LT(steiner_distance(snap.geometry, {0, 1}, {-0.8660254037844386, -0.5},
                             {0.8660254037844386, -0.5})
                .hausdorff,
            1e-9);
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(cli({"validate", "--config", (kConfigs / "steiner.json").string()}), 0);
  EXPECT_EQ(cli({"validate", "--config", (kConfigs / "bad_angles.json").string()}), 1);
  EXPECT_EQ(cli({"run", "--config", (kConfigs / "bad_angles.json").string(), "--out",
                 scratch("cli_bad").string()}),
            1);
}

TEST(Cli, UsageAndRuntimeErrors) {
  EXPECT_EQ(cli({}), 2);
  EXPECT_EQ(cli({"frobnicate"}), 2);
  EXPECT_EQ(cli({"run"}), 2);
  EXPECT_EQ(cli({"run", "--config", "/nonexistent/config.json"}), 2);
  EXPECT_EQ(cli({"run", "--config", (kConfigs / "steiner.json").string(), "--seed", "x"}), 2);
  EXPECT_EQ(cli({"analyze"}), 2);
  EXPECT_EQ(cli({"selfsimilar", "--family", "hexagon"}), 2);
}

TEST(Cli, SelfSimilar) {
  ::testing::internal::CaptureStdout();
  const int code = cli({"selfsimilar", "--family", "grim_reaper", "--w", "1", "0", "--ymax", "1.3"});
  const std::string out = ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(code, 0);
  const auto pos = out.find("translator_residual: ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(out.substr(pos + 21)), 1e-3);
}

TEST(Cli, SeedOverrideIsRecorded) {
  const fs::path out = scratch("cli_seed");
  const fs::path cfg = out / "cfg.json";
  std::ofstream(cfg) << R"({"family": "perturbed_steiner", "params": {"points": 16},
                           "flow": {"t_end": 0.001}})";
  ASSERT_EQ(cli({"run", "--config", cfg.string(), "--out", out.string(), "--seed", "42"}), 0);
  EXPECT_EQ(load_snapshot(out / "snapshot.json").seed, 42u);
}

TEST(Cli, AnalyzeRecordedTrajectory) {
  const fs::path out = scratch("cli_analyze");
  const fs::path cfg = out / "cfg.json";
  std::ofstream(cfg) << R"({"family": "bowed_curve", "params": {"points": 17},
                           "flow": {"t_end": 0.05, "monitor_every": 5},
                           "output": {"trajectory": "traj.jsonl"}})";
  ASSERT_EQ(cli({"run", "--config", cfg.string(), "--out", out.string()}), 0);
  ::testing::internal::CaptureStdout();
  const int code = cli({"analyze", "--trajectory", (out / "traj.jsonl").string(), "--out", out.string()});
  const std::string text = ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(code, 0);
  EXPECT_NE(text.find("classification: NoBlowup"), std::string::npos);
}

TEST(Cli, DeterministicOutputs) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const fs::path cfg = a / "cfg.json";
  std::ofstream(cfg) << R"({"family": "perturbed_steiner", "params": {"points": 24}, "seed": 5,
                           "flow": {"t_end": 0.02, "monitor_every": 10},
                           "probes": [{"x0": [0, 0], "T": 1}]})";
  ASSERT_EQ(cli({"run", "--config", cfg.string(), "--out", (a / "out").string()}), 0);
  ASSERT_EQ(cli({"run", "--config", cfg.string(), "--out", (b / "out").string()}), 0);
  EXPECT_EQ(slurp(a / "out" / "series.csv"), slurp(b / "out" / "series.csv"));
  EXPECT_EQ(slurp(a / "out" / "snapshot.json"), slurp(b / "out" / "snapshot.json"));
}

}  // namespace
}  // namespace triodflow
