#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gml/morphism.hpp"
#include "gml/scenario.hpp"
#include "gml/witness.hpp"

namespace py = pybind11;

namespace {

py::dict drift_dict(const gml::DriftReport& r) {
  py::dict out;
  out["violations"] = r.violations;
  out["bound"] = r.bound;
  out["final_w"] = r.final_w;
  out["final_bound_ok"] = r.final_bound_ok;
  out["passed"] = r.passed();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regime-variation learning kernel";

  py::register_exception<gml::Error>(m, "KernelError");

  m.def(
      "theorem_bound",
      [](double alpha, double delta, double beta, double w0, const std::vector<double>& costs) {
        return gml::theorem_bound(gml::DriftParams(alpha, delta, beta), w0, costs);
      },
      py::arg("alpha"), py::arg("delta"), py::arg("beta"), py::arg("w0"), py::arg("costs"));

  m.def(
      "verify_drift",
      [](double alpha, double delta, double beta, const std::vector<double>& w_values,
         const std::vector<double>& costs) {
        gml::TrajectoryRecord traj;
        traj.w_values = w_values;
        traj.costs = costs;
        return drift_dict(gml::verify_drift(gml::DriftParams(alpha, delta, beta), traj));
      },
      py::arg("alpha"), py::arg("delta"), py::arg("beta"), py::arg("w_values"), py::arg("costs"));

  m.def("epsilon_range", [](double alpha) {
    auto r = gml::epsilon_range(alpha);
    return py::make_tuple(r.lower, r.unbounded ? py::object(py::none()) : py::cast(r.upper));
  });
  m.def("default_epsilon", &gml::default_epsilon);
  m.def("effective_contraction", &gml::effective_contraction);
  m.def(
      "contractive_step",
      [](const gml::Vec& s, const gml::Vec& anchor, double alpha) {
        return gml::contractive_step(s, {"r", anchor, alpha});
      },
      py::arg("state"), py::arg("anchor"), py::arg("alpha"));
  m.def("transport_overhead", &gml::transport_overhead, py::arg("eps"), py::arg("mu_src"),
        py::arg("mu_dst"));

  m.def(
      "simulate_witness",
      [](const std::vector<std::pair<gml::Vec, double>>& regimes,
         const std::vector<std::size_t>& switches, const gml::Vec& s0, std::size_t steps) {
        std::vector<gml::AnchoredRegime> anchored;
        for (std::size_t i = 0; i < regimes.size(); ++i) {
          anchored.push_back({"r" + std::to_string(i), regimes[i].first, regimes[i].second});
        }
        gml::WitnessRun run = gml::simulate_witness(anchored, switches, s0, steps);
        py::dict out;
        out["w_values"] = run.trajectory.w_values;
        out["costs"] = run.trajectory.costs;
        out["effective_alpha"] = run.effective_alpha;
        return out;
      },
      py::arg("regimes"), py::arg("switches"), py::arg("s0"), py::arg("steps"));

  m.def(
      "gradient_transport",
      [](const gml::Vec& w, const gml::Mat& design, const gml::Vec& target, double step) {
        return gml::gradient_transport(w, {design, target, step, gml::Vec::Zero(w.size()), 1.0, 1.0});
      },
      py::arg("w"), py::arg("design"), py::arg("target"), py::arg("step"));

  m.def(
      "toy_admissible",
      [](double w, double eta) {
        gml::Mat design(1, 1);
        design << 1.0;
        gml::RegressionRegime r{design, gml::Vec::Zero(1), eta, gml::Vec::Zero(1), 1.0, 1.0};
        gml::Vec w0(1);
        w0 << w;
        return gml::toy_admissible(w0, r).admissible;
      },
      py::arg("w"), py::arg("eta"),
      "Scalar trust-region instance: unit design, zero target, unit radius.");

  m.def(
      "scalarization_obstruction",
      [](double utility_slope, double boundary, double penalty, const std::vector<double>& grid) {
        auto r = gml::scalarization_obstruction(utility_slope, boundary, penalty, grid);
        py::dict out;
        out["penalty_maximizer"] = r.penalty_maximizer;
        out["penalty_value"] = r.penalty_value;
        out["gated_maximizer"] = r.gated_maximizer;
        out["gated_value"] = r.gated_value;
        out["divergence"] = r.divergence;
        return out;
      },
      py::arg("utility_slope"), py::arg("boundary"), py::arg("penalty"), py::arg("grid"));

  m.def(
      "covering_bound",
      [](int dimension, double diameter, double resolution, double transport_regularity,
         double innovation) {
        return gml::covering_bound(
            {dimension, diameter, resolution, transport_regularity, innovation});
      },
      py::arg("dimension"), py::arg("diameter"), py::arg("resolution"),
      py::arg("transport_regularity") = 1.0, py::arg("innovation") = 0.0);

  m.def(
      "pac_chain_bound",
      [](const std::vector<double>& deltas) {
        auto b = gml::pac_chain_bound(deltas);
        return py::make_tuple(b.product_bound, b.union_bound);
      },
      py::arg("deltas"));
  m.def("pac_chain_simulate", &gml::pac_chain_simulate, py::arg("deltas"), py::arg("trials"),
        py::arg("seed"));

  m.def(
      "entails",
      [](const std::string& theory_text, const std::string& goal_text) {
        return gml::symbolic::entails(gml::symbolic::parse_theory_text(theory_text),
                                      gml::symbolic::parse_goal(goal_text));
      },
      py::arg("theory"), py::arg("goal"));
  m.def(
      "forward_chain",
      [](const std::string& theory_text) {
        return gml::symbolic::forward_chain(gml::symbolic::parse_theory_text(theory_text));
      },
      py::arg("theory"));

  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& format) {
        gml::RunReport report = gml::run_scenario(gml::parse_scenario_text(text));
        auto fmt = format == "csv" ? gml::ReportFormat::Csv : gml::ReportFormat::Json;
        py::dict out;
        out["report"] = gml::emit_report(report, fmt);
        out["completed"] = report.completed;
        out["terminated_at"] = report.terminated_at;
        return out;
      },
      py::arg("scenario_text"), py::arg("format") = "json");

  m.def(
      "mitchell_collapse",
      [](const std::string& text) {
        gml::Scenario s = gml::parse_scenario_text(text);
        if (auto issues = gml::validate_scenario(s); !issues.empty()) {
          throw gml::InvalidScenario("scenario validation failed", std::move(issues));
        }
        auto [tuple, report] = gml::mitchell_collapse(gml::build_system(s));
        py::dict out;
        out["experience"] = tuple.experience;
        out["task"] = tuple.task;
        out["degeneration"] = report.degeneration;
        out["reducibility"] = report.reducibility;
        out["faithful"] = report.faithful;
        out["obstructions"] = report.obstructions;
        return out;
      },
      py::arg("scenario_text"));
}
