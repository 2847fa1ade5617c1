#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dnp/errors.hpp"
#include "dnp/monotone_graph.hpp"
#include "dnp/report.hpp"
#include "dnp/study.hpp"

namespace py = pybind11;
using namespace dnp;

namespace {

ScenarioConfig config_from(const std::string& text_or_preset) {
    for (const auto& name : preset_names())
        if (name == text_or_preset) return preset(name);
    auto cfg = parse_scenario(text_or_preset, "<string>");
    validate_scenario(cfg);
    return cfg;
}

py::array_t<double> levels_array(const std::vector<GridField>& fields) {
    const py::ssize_t rows = static_cast<py::ssize_t>(fields.size());
    const py::ssize_t cols = fields.empty() ? 0 : fields.front().size();
    py::array_t<double> out({rows, cols});
    auto m = out.mutable_unchecked<2>();
    for (py::ssize_t n = 0; n < rows; ++n)
        for (py::ssize_t k = 0; k < cols; ++k) m(n, k) = fields[n][static_cast<int>(k)];
    return out;
}

py::list monitor_list(const std::vector<MonitorReport>& ms) {
    py::list out;
    for (const auto& m : ms) {
        py::dict d;
        d["name"] = m.name;
        d["statement"] = m.statement;
        d["passed"] = m.passed();
        d["violations"] = m.violations;
        d["worst_slack"] = m.worst_slack;
        d["tolerance"] = m.tolerance;
        d["slack"] = m.slack;
        out.append(d);
    }
    return out;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    d["tau"] = t.tau;
    d["steps"] = t.steps();
    d["M"] = t.M;
    d["status"] = to_string(t.status);
    d["u"] = levels_array(t.u);
    d["beta_u"] = levels_array(t.beta_u);
    d["residuals"] = t.residuals;
    d["iterations"] = t.iterations;
    d["extinction_time"] = t.extinction_time();
    d["validity_horizon"] = t.validity_horizon;
    return d;
}

py::dict run(const std::string& source, const std::optional<std::string>& output_dir) {
    const auto cfg = config_from(source);
    RunResult r;
    {
        py::gil_scoped_release release;
        r = run_scenario(cfg);
    }
    if (output_dir) emit_report(r, *output_dir);
    py::dict d;
    d["name"] = cfg.output.name;
    d["exit_code"] = r.exit_code();
    d["failure"] = r.failure;
    d["trajectory"] = trajectory_dict(r.trajectory);
    d["monitors"] = monitor_list(r.monitors);
    d["comparison"] = monitor_list(r.comparison);
    if (r.pair) {
        d["second"] = trajectory_dict(r.pair->second);
        d["lipschitz"] = r.pair->L;
        d["l1_distance"] = r.pair->l1_distance;
    }
    d["report"] = render_report(r);
    return d;
}

py::dict study(const std::string& source, int levels, const std::string& target) {
    StudyTarget t;
    if (target == "time") t = StudyTarget::time;
    else if (target == "space") t = StudyTarget::space;
    else throw ConfigError("study target must be 'time' or 'space'");
    const auto cfg = config_from(source);
    StudyResult s;
    {
        py::gil_scoped_release release;
        s = refinement_study(cfg, levels, t);
    }
    py::list rows;
    for (const auto& r : s.rows) {
        py::dict d;
        d["level"] = r.level;
        d["N"] = r.N;
        d["cells"] = r.cells;
        d["tau"] = r.tau;
        d["h"] = r.h;
        d["status"] = r.status;
        d["extinction_time"] = r.extinction_time;
        d["monitors_failed"] = r.monitors_failed;
        d["successive_difference"] = r.successive_difference;
        d["analytic_error"] = r.analytic_error;
        rows.append(d);
    }
    py::dict d;
    d["rows"] = rows;
    d["orders"] = s.orders;
    d["observed_order"] = s.observed_order();
    d["report"] = render_study(s);
    return d;
}

MonotoneGraph graph_by_name(const std::string& kind, double q) {
    if (kind == "power") return MonotoneGraph::power(q);
    if (kind == "tan") return MonotoneGraph::tangent();
    if (kind == "log1p") return MonotoneGraph::log1p();
    if (kind == "rational") return MonotoneGraph::rational();
    throw InvalidParameter("unknown graph kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Implicit Euler solver for doubly nonlinear parabolic problems";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<OutOfRangeError>(m, "OutOfRangeError", base.ptr());

    m.def("preset_names", &preset_names);
    m.def("preset_text", &preset_text, py::arg("name"));
    m.def("run", &run, py::arg("source"), py::arg("output_dir") = std::nullopt,
          "Run a preset (by name) or an INI scenario (as text).");
    m.def("study", &study, py::arg("source"), py::arg("levels") = 3, py::arg("target") = "time");

    py::class_<MonotoneGraph>(m, "Graph")
        .def(py::init(&graph_by_name), py::arg("kind"), py::arg("q") = 2.0)
        .def("beta", py::vectorize(&MonotoneGraph::beta))
        .def("j", py::vectorize(&MonotoneGraph::primitive))
        .def("conjugate", py::vectorize(&MonotoneGraph::conjugate))
        .def("inverse", py::vectorize(&MonotoneGraph::inverse))
        .def_property_readonly("domain", [](const MonotoneGraph& g) {
            return py::make_tuple(g.domain_lo(), g.domain_hi());
        })
        .def("__repr__", [](const MonotoneGraph& g) { return "Graph(" + g.describe() + ")"; });
}
