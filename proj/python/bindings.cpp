#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emitcorr/correlations.hpp"
#include "emitcorr/couplings.hpp"
#include "emitcorr/dynamics.hpp"
#include "emitcorr/error.hpp"
#include "emitcorr/parallel.hpp"
#include "emitcorr/scenario.hpp"
#include "emitcorr/verify.hpp"

namespace py = pybind11;
using namespace emitcorr;

namespace {

py::dict record_dict(const CorrelationRecord& r) {
    py::dict d;
    d["t"] = r.t;
    d["MI"] = r.MI;
    d["CC"] = r.CC;
    d["QD"] = r.QD;
    d["C"] = r.C;
    d["EoF"] = r.EoF;
    d["theta_m"] = r.argmax_basis.theta_m;
    d["phi_m"] = r.argmax_basis.phi_m;
    return d;
}

py::tuple table_tuple(const OutputTable& t) { return py::make_tuple(t.header, t.rows); }

} // namespace

PYBIND11_MODULE(_emitcorr, m) {
    m.doc() = "Correlation dynamics of two dipole-coupled quantum emitters.";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object kind = py::str(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), py::make_tuple(py::str(e.what()), kind).ptr());
        }
    });

    py::class_<EmitterGeometry>(m, "EmitterGeometry")
        .def(py::init<>())
        .def_readwrite("mu1_hat", &EmitterGeometry::mu1_hat)
        .def_readwrite("mu2_hat", &EmitterGeometry::mu2_hat)
        .def_readwrite("r12_hat", &EmitterGeometry::r12_hat)
        .def_readwrite("r12_over_lambda0", &EmitterGeometry::r12_over_lambda0)
        .def_readwrite("n", &EmitterGeometry::n)
        .def_readwrite("Gamma1", &EmitterGeometry::Gamma1)
        .def_readwrite("Gamma2", &EmitterGeometry::Gamma2)
        .def_static("parallel_transverse", &EmitterGeometry::parallel_transverse, py::arg("r12_over_lambda0"),
                    py::arg("n") = 1.0, py::arg("Gamma1") = 1.0, py::arg("Gamma2") = 1.0)
        .def("validate", &EmitterGeometry::validate);

    m.def(
        "couplings",
        [](const EmitterGeometry& g) {
            CouplingSet c = couplings(g);
            return py::make_tuple(c.V, c.gamma);
        },
        "(V, gamma) in units of the reference decay rate.");
    m.def("small_separation_limit", [](const EmitterGeometry& g) {
        CouplingSet c = small_separation_limit(g);
        return py::make_tuple(c.V, c.gamma);
    });

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double V, double gamma, double Gamma1, double Gamma2, double delta_minus,
                         double delta_plus, double ell1, double ell2) {
                 SystemParams p{V, gamma, Gamma1, Gamma2, delta_minus, delta_plus, ell1, ell2};
                 p.validate();
                 return p;
             }),
             py::arg("V") = 0.0, py::arg("gamma") = 0.0, py::arg("Gamma1") = 1.0, py::arg("Gamma2") = 1.0,
             py::arg("delta_minus") = 0.0, py::arg("delta_plus") = 0.0, py::arg("ell1") = 0.0,
             py::arg("ell2") = 0.0)
        .def_static("from_geometry", &SystemParams::from_geometry)
        .def_readwrite("V", &SystemParams::V)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("Gamma1", &SystemParams::Gamma1)
        .def_readwrite("Gamma2", &SystemParams::Gamma2)
        .def_readwrite("delta_minus", &SystemParams::delta_minus)
        .def_readwrite("delta_plus", &SystemParams::delta_plus)
        .def_readwrite("ell1", &SystemParams::ell1)
        .def_readwrite("ell2", &SystemParams::ell2);

    m.def("alpha_state", [](double alpha, double phi) { return AlphaState{alpha, phi}.density().matrix(); },
          py::arg("alpha"), py::arg("phi") = 0.0);
    m.def("bell_diagonal", [](double h1, double h2, double h3) { return build_bell_diagonal(h1, h2, h3).matrix(); });
    m.def("hamiltonian", &build_hamiltonian);
    m.def("lindblad_rhs", py::overload_cast<const Matrix4c&, const SystemParams&>(&lindblad_rhs));
    m.def("stationary_state", [](const SystemParams& p) { return stationary_state(p).matrix(); });

    m.def(
        "propagate",
        [](const Matrix4c& rho0, const SystemParams& p, double t_final, std::size_t samples, bool project) {
            PropagationOptions opts;
            opts.project = project;
            EvolutionResult ev;
            {
                py::gil_scoped_release release;
                ev = propagate(DensityMatrix(rho0), p, t_final, samples, opts);
            }
            std::vector<Matrix4c> states;
            for (const auto& s : ev.states) states.push_back(s.matrix());
            return py::make_tuple(ev.times, states);
        },
        py::arg("rho0"), py::arg("params"), py::arg("t_final"), py::arg("samples") = 201,
        py::arg("project") = false, "Returns (times, list of 4x4 states).");
    m.def(
        "analytic_evolution",
        [](double alpha, double phi, const SystemParams& p, double t) {
            return analytic_evolution(AlphaState{alpha, phi}, p, t).matrix();
        },
        py::arg("alpha"), py::arg("phi"), py::arg("params"), py::arg("t"));

    m.def("von_neumann_entropy", [](const Matrix4c& rho) { return von_neumann_entropy(DensityMatrix(rho)); });
    m.def("mutual_information", [](const Matrix4c& rho) { return mutual_information(DensityMatrix(rho)); });
    m.def(
        "classical_correlations",
        [](const Matrix4c& rho, const std::string& measured) {
            auto cc = classical_correlations(DensityMatrix(rho), parse_subsystem(measured));
            return py::make_tuple(cc.value, cc.argmax.theta_m, cc.argmax.phi_m);
        },
        py::arg("rho"), py::arg("measured") = "B", "Returns (CC, theta_m, phi_m).");
    m.def(
        "quantum_discord",
        [](const Matrix4c& rho, const std::string& measured) {
            return quantum_discord(DensityMatrix(rho), parse_subsystem(measured));
        },
        py::arg("rho"), py::arg("measured") = "B");
    m.def("concurrence", [](const Matrix4c& rho) { return concurrence(DensityMatrix(rho)); });
    m.def("eof", [](const Matrix4c& rho) { return eof(DensityMatrix(rho)); });
    m.def("eof_from_concurrence", &eof_from_concurrence);
    m.def(
        "correlations",
        [](const Matrix4c& rho, double t) { return record_dict(correlation_record(DensityMatrix(rho), t)); },
        py::arg("rho"), py::arg("t") = 0.0);

    m.def(
        "run_scenario",
        [](const std::string& text) {
            Scenario s = parse_scenario(KeyValueConfig::parse(text));
            OutputTable t;
            {
                py::gil_scoped_release release;
                t = s.scan ? run_scan(s, default_thread_count()) : run_scenario(s, default_thread_count());
            }
            return table_tuple(t);
        },
        py::arg("text"), "Runs a scenario given as key = value text. Returns (header, rows).");
    m.def("format_couplings",
          [](const std::string& text) { return format_couplings(parse_geometry(KeyValueConfig::parse(text))); });

    m.def(
        "verify",
        [](const std::string& filter) {
            std::ostringstream log;
            std::vector<verify::CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = verify::run(filter, default_thread_count(), log);
            }
            py::list out;
            for (const auto& r : results) out.append(py::make_tuple(r.id, r.name, r.passed()));
            return py::make_tuple(out, log.str());
        },
        py::arg("filter") = "", "Returns ([(id, name, passed)], log).");
}
