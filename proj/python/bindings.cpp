/*
 Copyright 2026 The dualmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Python bindings: scenarios, closed-loop runs, comparisons, the QP solver
// and the acceptance checks.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dualmpc/error.hpp"
#include "dualmpc/qp.hpp"
#include "dualmpc/runner.hpp"
#include "dualmpc/verify.hpp"

namespace py = pybind11;
using namespace dualmpc;

namespace {

PyObject* error_type = nullptr;

py::dict timing_dict(const TimingStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["std"] = s.std;
  d["max"] = s.max;
  d["count"] = s.count;
  return d;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  const auto& names = tracked_state_names();
  py::dict mse, mean, sd;
  for (int i = 0; i < MetricsReport::kTracked; ++i) {
    mse[names[i]] = m.mse[i];
    mean[names[i]] = m.error_mean[i];
    sd[names[i]] = m.error_std[i];
  }
  d["mse"] = mse;
  d["error_mean"] = mean;
  d["error_std"] = sd;
  d["grf_mean"] = m.grf_mean;
  d["grf_std"] = m.grf_std;
  d["force_ratio"] = m.force_ratio;
  d["slip_distance"] = m.slip_distance;
  d["total_slip"] = m.total_slip;
  d["grf_time_ms"] = timing_dict(m.grf_time);
  d["footstep_time_ms"] = timing_dict(m.footstep_time);
  d["tick_time_ms"] = timing_dict(m.tick_time);
  d["ticks"] = m.ticks;
  d["samples"] = m.samples;
  d["fallbacks"] = m.fallbacks;
  d["fell"] = m.fell;
  d["fall_time"] = m.fall_time;
  return d;
}

// One row per sample of a per-sample vector quantity.
template <typename F>
MatrixXd sample_matrix(const RunResult& r, int cols, F&& row) {
  MatrixXd out(static_cast<Eigen::Index>(r.samples.size()), cols);
  for (std::size_t i = 0; i < r.samples.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = row(r.samples[i]);
  return out;
}

Eigen::RowVectorXd state_row(const BodyState& b) {
  return b.to_vector().head<12>().transpose();
}

template <typename Legs>
Eigen::RowVectorXd legs_row(const Legs& v) {
  Eigen::RowVectorXd out(3 * kNumLegs);
  for (int i = 0; i < kNumLegs; ++i) out.segment<3>(3 * i) = v[i].transpose();
  return out;
}

py::dict solution_dict(const QPSolution& s) {
  py::dict d;
  d["u"] = s.u_star;
  d["eq_duals"] = s.eq_duals;
  d["ineq_duals"] = s.ineq_duals;
  d["objective"] = s.objective;
  d["kkt_residual"] = s.kkt_residual;
  d["iterations"] = s.iterations;
  d["polished"] = s.polished;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dual-MPC quadruped locomotion core";

  // Leaked on purpose: the type must outlive every translated exception.
  error_type = py::exception<Error>(m, "DualMpcError", PyExc_RuntimeError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_spec", &resolve_scenario, py::arg("spec"),
                  "Preset name, 'name:mode', or scenario file path")
      .def_static(
          "from_text",
          [](const std::string& text) { return parse_scenario(KeyValueConfig::parse(text)); },
          py::arg("text"))
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("metrics_start", &Scenario::metrics_start)
      .def_property(
          "mode", [](const Scenario& s) { return std::string(to_string(s.mode)); },
          [](Scenario& s, const std::string& v) { s.mode = parse_arm_mode(v); })
      .def("text", &scenario_text)
      .def("validate", &Scenario::validate)
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario " + s.name + " [" + to_string(s.mode) + "]>";
      });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("scenario", &RunResult::scenario)
      .def_property_readonly("metrics", [](const RunResult& r) { return metrics_dict(r.metrics); })
      .def("metrics_table",
           [](const RunResult& r) {
             return metrics_table(r.metrics, r.scenario.name + " [" + to_string(r.scenario.mode) + "]");
           })
      .def("trace_csv", [](const RunResult& r) { return trace_csv(r.samples); })
      .def_property_readonly("t",
                             [](const RunResult& r) {
                               VectorXd t(static_cast<Eigen::Index>(r.samples.size()));
                               for (std::size_t i = 0; i < r.samples.size(); ++i) t[static_cast<Eigen::Index>(i)] = r.samples[i].t;
                               return t;
                             })
      .def_property_readonly(
          "state", [](const RunResult& r) { return sample_matrix(r, 12, [](const TickSample& s) { return state_row(s.state); }); },
          "p, p_dot, theta, omega per tick")
      .def_property_readonly("desired", [](const RunResult& r) {
        return sample_matrix(r, 12, [](const TickSample& s) { return state_row(s.desired); });
      })
      .def_property_readonly("forces", [](const RunResult& r) {
        return sample_matrix(r, 12, [](const TickSample& s) { return legs_row(s.forces); });
      })
      .def_property_readonly("footsteps", [](const RunResult& r) {
        return sample_matrix(r, 12, [](const TickSample& s) { return legs_row(s.footsteps); });
      })
      .def("write_outputs", &write_run_outputs, py::arg("dir"), py::arg("trace") = true);

  m.def("preset_names", &preset_names);
  m.def("run", [](const Scenario& s) { return run_scenario(s); }, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "compare",
      [](const Scenario& a, const Scenario& b) {
        check_comparable(a, b);
        const MetricsReport ma = run_scenario(a).metrics, mb = run_scenario(b).metrics;
        std::vector<py::tuple> rows;
        for (const ComparisonRow& r : compare_metrics(ma, mb)) {
          rows.push_back(py::make_tuple(r.metric, r.a, r.b, r.defined ? py::cast(r.delta) : py::none()));
        }
        return rows;
      },
      py::arg("a"), py::arg("b"), "Rows (metric, a, b, (a - b) / b or None)");
  m.def(
      "bench",
      [](const Scenario& s, int reps) {
        const BenchReport r = bench_scenario(s, reps);
        py::dict d;
        d["repetitions"] = r.repetitions;
        d["horizon"] = r.horizon;
        d["grf_ms"] = timing_dict(r.grf);
        d["footstep_ms"] = timing_dict(r.footstep);
        d["tick_ms"] = timing_dict(r.tick);
        return d;
      },
      py::arg("scenario"), py::arg("reps") = 100);

  py::class_<CondensedQP>(m, "CondensedQP")
      .def(py::init([](MatrixXd P, VectorXd q, std::optional<MatrixXd> E, std::optional<VectorXd> c,
                       std::optional<MatrixXd> G, std::optional<VectorXd> h) {
             CondensedQP qp = CondensedQP::unconstrained(P, q);
             if (E) qp.E = *E;
             if (c) qp.c = *c;
             if (G) qp.G = *G;
             if (h) qp.h = *h;
             qp.validate();
             return qp;
           }),
           py::arg("P"), py::arg("q"), py::arg("E") = py::none(), py::arg("c") = py::none(),
           py::arg("G") = py::none(), py::arg("h") = py::none())
      .def_static("load_csv", &load_csv, py::arg("dir"), py::arg("stem"))
      .def("dump_csv", &dump_csv, py::arg("dir"), py::arg("stem"))
      .def("objective", &CondensedQP::objective)
      .def_readwrite("P", &CondensedQP::P)
      .def_readwrite("q", &CondensedQP::q)
      .def_readwrite("E", &CondensedQP::E)
      .def_readwrite("c", &CondensedQP::c)
      .def_readwrite("G", &CondensedQP::G)
      .def_readwrite("h", &CondensedQP::h);

  m.def("solve_qp", [](const CondensedQP& qp, double tol) { return solution_dict(solve(qp, tol)); },
        py::arg("qp"), py::arg("tol") = 1e-6);
  m.def("check_positive_definite", &check_positive_definite, py::arg("P"));

  m.def(
      "check",
      [](const std::vector<int>& ids) {
        std::vector<py::dict> out;
        std::vector<verify::CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = verify::run_all(ids);
        }
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          d["line"] = verify::format(r);
          out.push_back(d);
        }
        return out;
      },
      py::arg("ids") = std::vector<int>{});
}
