#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>

#include "trivirus/equilibria.hpp"
#include "trivirus/examples.hpp"
#include "trivirus/monotonicity.hpp"
#include "trivirus/pipeline.hpp"
#include "trivirus/report.hpp"
#include "trivirus/scenario.hpp"
#include "trivirus/simulator.hpp"
#include "trivirus/spectral.hpp"
#include "trivirus/stability.hpp"

namespace py = pybind11;
using namespace trivirus;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string dump(const Json& doc) { return doc.dump(); }

SystemState state_of(const MultiVirusSystem& s, const Vector& x) {
    return {s.node_count(), s.virus_count(), x};
}

py::dict trajectory_dict(const Trajectory& t) {
    Matrix states(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(t.n) * t.m);
    for (std::size_t i = 0; i < t.size(); ++i) states.row(static_cast<Eigen::Index>(i)) = t.states[i].transpose();
    py::dict out;
    out["times"] = Vector(Eigen::Map<const Vector>(t.times.data(), static_cast<Eigen::Index>(t.size())));
    out["states"] = states;
    out["n"] = t.n;
    out["m"] = t.m;
    out["termination"] = to_string(t.terminated_reason);
    out["domain_violation_max"] = t.domain_violation_max;
    out["accepted_steps"] = t.accepted_steps;
    out["rejected_steps"] = t.rejected_steps;
    out["csv"] = trajectory_csv(t);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Tri-virus SIS network model: spectral analysis, equilibria, stability and simulation";
    mod.attr("__version__") = kSoftwareVersion;

    static py::exception<Error> error_type(mod, "TrivirusError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = static_cast<const py::object&>(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("exit_code") = exit_code_for(e.code());
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<MultiVirusSystem>(mod, "System")
        .def(py::init([](std::vector<Vector> healing, std::vector<Matrix> infection) {
                 return build_system(std::move(healing), std::move(infection));
             }),
             py::arg("healing"), py::arg("infection"))
        .def_property_readonly("n", &MultiVirusSystem::node_count)
        .def_property_readonly("m", &MultiVirusSystem::virus_count)
        .def("healing", [](const MultiVirusSystem& s, int k) { return Vector(s.healing(k)); }, py::arg("k"))
        .def("infection", [](const MultiVirusSystem& s, int k) { return Matrix(s.infection(k)); }, py::arg("k"))
        .def(
            "vector_field", [](const MultiVirusSystem& s, const Vector& x) { return vector_field(s, state_of(s, x)); },
            py::arg("x"))
        .def(
            "jacobian", [](const MultiVirusSystem& s, const Vector& x) { return jacobian(s, state_of(s, x)); },
            py::arg("x"))
        .def("__repr__", [](const MultiVirusSystem& s) {
            return "System(n=" + std::to_string(s.node_count()) + ", m=" + std::to_string(s.virus_count()) + ")";
        });

    mod.def("example_system", py::overload_cast<int>(&example_system), py::arg("example"));
    mod.def("random_initial_condition",
            [](int n, int m, std::uint64_t seed) { return random_initial_condition(n, m, seed).x; }, py::arg("n"),
            py::arg("m"), py::arg("seed"));

    mod.def(
        "perron",
        [](const Matrix& a, double tol) {
            const auto p = perron(a, tol);
            py::dict out;
            out["rho"] = p.rho;
            out["right"] = p.right;
            out["left"] = p.left;
            return out;
        },
        py::arg("a"), py::arg("tol") = kDefaultSpectralTol);
    mod.def("spectral_radius", &spectral_radius_nonnegative, py::arg("a"), py::arg("tol") = kDefaultSpectralTol);
    mod.def("spectral_abscissa", &spectral_abscissa_metzler, py::arg("m"), py::arg("tol") = kDefaultSpectralTol);
    mod.def(
        "single_virus_endemic", [](const Vector& d, const Matrix& b) { return single_virus_endemic(d, b); },
        py::arg("healing"), py::arg("infection"));

    mod.def(
        "_dfe_report", [](const MultiVirusSystem& s) { return dump(to_json(dfe_report(s))); }, py::arg("system"));
    mod.def(
        "_boundary_stability",
        [](const MultiVirusSystem& s, int virus) { return dump(to_json(boundary_stability(s, virus))); },
        py::arg("system"), py::arg("virus"));
    mod.def(
        "_line_stability",
        [](const MultiVirusSystem& s) {
            const auto c = line_construction_of(s);
            return dump(to_json(line_stability(s, c), c));
        },
        py::arg("system"));
    mod.def(
        "_lyapunov_certificate",
        [](const Vector& d, const Matrix& b) { return dump(to_json(lyapunov_certificate(d, b))); },
        py::arg("healing"), py::arg("infection"));
    mod.def(
        "_monotonicity",
        [](const MultiVirusSystem& s) {
            const auto g = signed_jacobian_graph(s);
            return dump(to_json(is_consistent(g), g, s.node_count()));
        },
        py::arg("system"));
    mod.def(
        "_analyze", [](const MultiVirusSystem& s) { return dump(analysis_report(scenario_for(s))); },
        py::arg("system"));
    mod.def(
        "_analyze_scenario", [](const std::string& text) { return dump(analysis_report(parse_scenario_text(text))); },
        py::arg("text"));

    mod.def(
        "simulate",
        [](const MultiVirusSystem& s, const Vector& x0, double t_end, double rel_tol, double abs_tol, double max_step,
           double steady_state_tol) {
            IntegratorOptions opts;
            opts.rel_tol = rel_tol;
            opts.abs_tol = abs_tol;
            opts.max_step = max_step;
            opts.steady_state_tol = steady_state_tol;
            Trajectory t;
            {
                py::gil_scoped_release release;
                t = integrate(s, state_of(s, x0), t_end, opts);
            }
            return trajectory_dict(t);
        },
        py::arg("system"), py::arg("x0"), py::arg("t_end"), py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10,
        py::arg("max_step") = 1.0, py::arg("steady_state_tol") = 0.0);
    mod.def(
        "_simulate_scenario",
        [](const std::string& text, const std::string& csv_name) {
            const Scenario scenario = parse_scenario_text(text);
            const auto start = std::chrono::steady_clock::now();
            SimulationOutcome outcome;
            {
                py::gil_scoped_release release;
                outcome = run_simulation(scenario);
            }
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            py::dict out = trajectory_dict(outcome.trajectory);
            out["report"] = dump(simulation_report(scenario, outcome, seconds, csv_name));
            return out;
        },
        py::arg("text"), py::arg("csv_name") = "trajectory.csv");
    mod.def(
        "_example_scenario", [](int example, std::uint64_t seed) { return dump(scenario_to_json(example_scenario(example, seed))); },
        py::arg("example"), py::arg("seed") = 1);
}
