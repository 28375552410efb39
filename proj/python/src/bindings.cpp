#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyfluct/experiments.hpp"
#include "levyfluct/fluctuation.hpp"
#include "levyfluct/model_json.hpp"
#include "levyfluct/scale_functions.hpp"
#include "levyfluct/simulator.hpp"

namespace py = pybind11;
using namespace levyfluct;

namespace {

py::dict report_to_dict(const ExperimentReport& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["label"] = row.label;
    d["x"] = row.x;
    d["analytic"] = row.analytic;
    d["empirical"] = row.empirical;
    d["count"] = row.count;
    d["gap"] = row.gap;
    d["tolerance"] = row.tolerance;
    d["gating"] = row.gating;
    d["passed"] = row.passed();
    rows.append(d);
  }
  py::dict out;
  out["id"] = r.id;
  out["passed"] = r.passed();
  out["max_gap"] = r.max_gap();
  out["rows"] = rows;
  out["csv"] = report_csv(r);
  out["summary"] = report_summary(r);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fluctuation identities for spectrally negative Levy processes";

  py::class_<LevyModel>(m, "LevyModel")
      .def_static("brownian", &LevyModel::brownian, py::arg("drift"), py::arg("sigma"))
      .def_static("cp_exp", &LevyModel::cp_exp, py::arg("drift"), py::arg("sigma"), py::arg("rate"),
                  py::arg("eta"))
      .def_property_readonly("drift", &LevyModel::drift)
      .def_property_readonly("sigma", &LevyModel::gaussian)
      .def_property_readonly("jump_rate", &LevyModel::jump_rate)
      .def_property_readonly("jump_eta", &LevyModel::jump_eta)
      .def("psi", py::overload_cast<double>(&LevyModel::psi, py::const_), py::arg("lam"))
      .def("psi_prime", &LevyModel::psi_prime, py::arg("lam"))
      .def("phi", &LevyModel::phi, py::arg("gamma"))
      .def("to_json", [](const LevyModel& self) { return model_to_json(self).dump(); })
      .def_static("from_json", [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); })
      .def("__eq__", &LevyModel::operator==)
      .def("__repr__", &LevyModel::describe);

  m.def("esscher_tilt", [](const LevyModel& model, double gamma) { return esscher_tilt(model, KillingRate(gamma)); },
        py::arg("model"), py::arg("gamma"));

  py::class_<ScaleEvaluator>(m, "ScaleEvaluator")
      .def(py::init([](const LevyModel& model, double gamma, double x_max, double h_grid, const std::string& method) {
             std::optional<ScaleMethod> forced;
             if (method == "closed_form") forced = ScaleMethod::ClosedForm;
             else if (method == "inversion") forced = ScaleMethod::Inversion;
             else if (method != "auto") throw std::invalid_argument("method must be auto, closed_form or inversion");
             return ScaleEvaluator::build(model, KillingRate(gamma), x_max, h_grid, forced);
           }),
           py::arg("model"), py::arg("gamma"), py::arg("x_max"), py::arg("h_grid") = 1e-3,
           py::arg("method") = "auto")
      .def("w", &ScaleEvaluator::w)
      .def("w_prime", &ScaleEvaluator::w_prime)
      .def("z", &ScaleEvaluator::z)
      .def("z_prime", &ScaleEvaluator::z_prime)
      .def_property_readonly("phi", &ScaleEvaluator::phi)
      .def_property_readonly("gamma", &ScaleEvaluator::gamma)
      .def_property_readonly("x_max", &ScaleEvaluator::x_max)
      .def_property_readonly("method", [](const ScaleEvaluator& ev) { return to_string(ev.method()); });

  m.def("exit_up_lt", &exit_up_lt, py::arg("ev"), py::arg("x"), py::arg("b"));
  m.def("exit_down_lt", &exit_down_lt, py::arg("ev"), py::arg("x"), py::arg("b"));
  m.def("one_sided_down_lt", &one_sided_down_lt, py::arg("ev"), py::arg("x"));
  m.def("joint_sup_inf_cdf", [](const ScaleEvaluator& ev, double a, double b) { return joint_sup_inf_cdf(ev, Window(a, b)); },
        py::arg("ev"), py::arg("a"), py::arg("b"));
  m.def("post_inf_sup_cdf", &post_inf_sup_cdf, py::arg("ev"), py::arg("a"), py::arg("b"));
  m.def("max_loss_post_sup_cdf", &max_loss_post_sup_cdf, py::arg("ev"), py::arg("d"), py::arg("a"), py::arg("b"));
  m.def("h_tilde", &h_tilde, py::arg("ev"), py::arg("x"));
  m.def("h_post_sup", &h_post_sup, py::arg("ev"), py::arg("z"));
  m.def("h_intermediate", &h_intermediate, py::arg("ev"), py::arg("z"), py::arg("a"), py::arg("b"));

  m.def(
      "simulate_path",
      [](const LevyModel& model, double gamma, double dt, std::uint64_t seed, std::uint64_t index,
         std::optional<double> stop_above) {
        const SimConfig cfg{model, KillingRate(gamma), dt, index + 1, seed, 0.0};
        SimulateOptions opts;
        opts.stop_above = stop_above;
        const auto p = simulate_path(cfg, index, opts);
        py::dict out;
        out["times"] = p.times();
        out["values"] = p.values;
        out["kill_time"] = p.kill_time;
        out["truncated"] = p.truncated;
        return out;
      },
      py::arg("model"), py::arg("gamma"), py::arg("dt"), py::arg("seed"), py::arg("index") = 0,
      py::arg("stop_above") = std::nullopt);

  m.def("default_experiments", [] {
    std::vector<std::string> ids;
    for (const auto& s : default_specs()) ids.push_back(s.id);
    return ids;
  });
  m.def("default_spec", [](const std::string& id) {
    const auto spec = find_default_spec(id);
    if (!spec) throw std::invalid_argument("no default experiment named '" + id + "'");
    return spec_to_json(*spec).dump();
  });
  m.def(
      "run_experiment",
      [](const std::string& spec_json, int workers) {
        const auto spec = spec_from_json(nlohmann::json::parse(spec_json));
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(spec, workers);
        }
        return report_to_dict(report);
      },
      py::arg("spec_json"), py::arg("workers") = 1);

  py::register_exception<InsufficientSampleError>(m, "InsufficientSampleError", PyExc_RuntimeError);
  py::register_exception<ScaleBuildError>(m, "ScaleBuildError", PyExc_RuntimeError);
}
