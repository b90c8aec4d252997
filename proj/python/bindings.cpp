#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "triodflow/analysis.hpp"
#include "triodflow/errors.hpp"
#include "triodflow/scenarios.hpp"

namespace py = pybind11;
using namespace triodflow;
using nlohmann::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DiscreteCurve to_curve(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidInput("curve must be an (n, 2) array");
  auto r = a.unchecked<2>();
  std::vector<Point> pts(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t j = 0; j < a.shape(0); ++j) pts[static_cast<std::size_t>(j)] = {r(j, 0), r(j, 1)};
  return DiscreteCurve(std::move(pts));
}

Array to_array(const DiscreteCurve& c) {
  Array out({static_cast<py::ssize_t>(c.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t j = 0; j < c.size(); ++j) {
    w(static_cast<py::ssize_t>(j), 0) = c[j].x;
    w(static_cast<py::ssize_t>(j), 1) = c[j].y;
  }
  return out;
}

Network to_network(const std::vector<Array>& curves, bool junction) {
  Network net{{}, junction};
  for (const auto& c : curves) net.curves.push_back(to_curve(c));
  if (junction) to_triod(net);
  return net;
}

py::list curves_of(const Network& net) {
  py::list out;
  for (const auto& c : net.curves) out.append(to_array(c));
  return out;
}

Point to_point(const std::array<double, 2>& p) { return {p[0], p[1]}; }

py::dict run_config(const std::string& config_json) {
  const ScenarioConfig cfg = parse_config(json::parse(config_json));
  const Scenario sc = build_scenario(cfg);
  Trajectory tr;
  {
    py::gil_scoped_release release;
    tr = run_scenario(sc, cfg.flow, cfg.probes);
  }
  py::dict out;
  out["reason"] = std::string(to_string(tr.reason));
  out["final_t"] = tr.final_t;
  out["steps"] = tr.steps;
  out["relaxation_warnings"] = tr.relaxation_warnings;
  out["csv"] = series_csv(tr, cfg.probes.size());
  out["curves"] = curves_of(tr.samples.back().geometry);
  out["junction"] = tr.samples.back().geometry.junction;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curvature flow of planar triods";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<InvalidProbe>(m, "InvalidProbe", PyExc_ValueError);
  py::register_exception<DegenerateGeometry>(m, "DegenerateGeometry", PyExc_RuntimeError);

  m.def("polyline_length", [](const Array& c) { return to_curve(c).length(); });
  m.def("curvature", [](const Array& a) {
    const DiscreteCurve c = to_curve(a);
    std::vector<double> k(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) k[j] = curvature(c, j);
    return k;
  });
  m.def("resample_uniform", [](const Array& a, std::size_t n) { return to_array(resample_uniform(to_curve(a), n)); });

  m.def("lambda_from_k", &lambda_from_k, py::arg("k"));
  m.def("angle_defect", [](const std::vector<Array>& curves) {
    return angle_defect(to_triod(to_network(curves, true)));
  });
  m.def("junction_curvatures", [](const std::vector<Array>& curves) {
    return junction_curvatures(to_triod(to_network(curves, true)));
  });

  m.def("embeddedness_ratio", [](const std::vector<Array>& curves, bool junction) {
    return embeddedness_ratio(to_network(curves, junction));
  }, py::arg("curves"), py::arg("junction"));
  m.def("gaussian_density",
        [](const std::vector<Array>& curves, bool junction, double t, std::array<double, 2> x0, double T) {
          return gaussian_density(to_network(curves, junction), t, {to_point(x0), T});
        },
        py::arg("curves"), py::arg("junction"), py::arg("t"), py::arg("x0"), py::arg("T"));

  m.def("steiner_point", [](std::array<double, 2> a, std::array<double, 2> b, std::array<double, 2> c)
            -> std::optional<std::array<double, 2>> {
    const auto p = steiner_point(to_point(a), to_point(b), to_point(c));
    if (!p) return std::nullopt;
    return std::array<double, 2>{p->x, p->y};
  });
  m.def("grim_reaper", [](std::array<double, 2> w, std::size_t n, double y_max) {
    return to_array(grim_reaper(to_point(w), n, y_max));
  }, py::arg("w"), py::arg("n"), py::arg("y_max"));
  m.def("translator_residual", [](const Array& c, std::array<double, 2> w) {
    return translator_residual(Network{{to_curve(c)}, false}, to_point(w));
  });
  m.def("shrinker_residual", [](const std::vector<Array>& curves, bool junction) {
    return shrinker_residual(to_network(curves, junction));
  });
  m.def("estimate_blowup", [](const std::vector<double>& t, const std::vector<double>& k_sq) {
    if (t.size() != k_sq.size()) throw InvalidInput("t and k_sq differ in length");
    std::vector<CurvatureSample> s;
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back({t[i], k_sq[i]});
    const BlowupFit f = estimate_blowup(s);
    py::dict out;
    out["T"] = f.T;
    out["C"] = f.C;
    out["fit_residual"] = f.fit_residual;
    out["trend"] = f.trend;
    out["exponent"] = f.exponent;
    out["classification"] = std::string(to_string(f.classification));
    return out;
  });

  m.def("build_scenario", [](const std::string& family, const std::string& params_json, std::uint64_t seed) {
    const Scenario sc = build_scenario(family, json::parse(params_json), seed);
    return py::make_tuple(curves_of(sc.network()), sc.is_triod());
  }, py::arg("family"), py::arg("params_json") = "{}", py::arg("seed") = 0);
  m.def("validate", [](const std::string& config_json) {
    const ScenarioConfig cfg = parse_config(json::parse(config_json));
    const ValidationResult v = validate_scenario(build_scenario(cfg), cfg.validation_tol);
    return py::make_tuple(v.ok, v.report);
  });
  m.def("run", &run_config, py::arg("config_json"));
  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "triodflow");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  });
}
