#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hvdp/errors.hpp"
#include "hvdp/geophase.hpp"
#include "hvdp/hannay.hpp"
#include "hvdp/lie_series.hpp"
#include "hvdp/limit_cycle.hpp"
#include "hvdp/param_loop.hpp"
#include "hvdp/resonance.hpp"

namespace py = pybind11;
using namespace hvdp;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hannay angle and geometric phase of the van der Pol oscillator";
    m.attr("__version__") = HVDP_VERSION;

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<AdiabaticityError>(m, "AdiabaticityError", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());

    py::class_<Params>(m, "Params")
        .def(py::init([](double omega, double eps) { return Params{omega, eps}; }), py::arg("omega") = 1.0,
             py::arg("eps") = 0.0)
        .def_readwrite("omega", &Params::omega)
        .def_readwrite("eps", &Params::eps)
        .def("__repr__", [](const Params& p) {
            return "Params(omega=" + py::repr(py::float_(p.omega)).cast<std::string>() +
                   ", eps=" + py::repr(py::float_(p.eps)).cast<std::string>() + ")";
        });

    // Series formulas take the truncation order as a plain int.
    const auto order = py::arg("order") = 4;
    m.def("limit_cycle_frequency", [](const Params& p, int o) { return limit_cycle_frequency(p, o); },
          py::arg("p"), order);
    m.def("fixed_point_alpha", [](const Params& p, int o) { return fixed_point_alpha(p, o); }, py::arg("p"),
          order);
    m.def("beta1_rate", [](const Params& p, int o) { return beta1_rate(p, o); }, py::arg("p"), order);
    m.def("series_amplitude", [](const Params& p, int o) { return series_amplitude(p, o); }, py::arg("p"),
          order);
    m.def("solution_x", [](double B, const Params& p, int o) { return solution_x(B, p, o); }, py::arg("B"),
          py::arg("p"), order);
    m.def("reduced_alpha_rate", [](double a, const Params& p, int o) { return reduced_alpha_rate(a, p, o); },
          py::arg("alpha1"), py::arg("p"), order);
    m.def("action_fixed_point", [](const Params& p, int o) { return action_fixed_point(p, o); }, py::arg("p"),
          order);
    m.def("connection", [](const Params& p) {
        const Connection c = connection(p);
        return py::make_tuple(c.A1, c.A2);
    });
    m.def("connection_curl", &connection_curl);

    py::class_<LimitCycleData>(m, "LimitCycleData")
        .def_readonly("period", &LimitCycleData::period)
        .def_readonly("frequency", &LimitCycleData::frequency)
        .def_readonly("amplitude", &LimitCycleData::amplitude)
        .def_readonly("theta_grid", &LimitCycleData::theta_grid)
        .def_readonly("R_table", &LimitCycleData::R_table)
        .def_readonly("Omega_table", &LimitCycleData::Omega_table)
        .def("psi", [](const LimitCycleData& lc, double theta) { return psi_of_theta(lc, theta); })
        .def("radius", [](const LimitCycleData& lc, double theta) { return radius_at(lc, theta); });
    m.def("measure", [](const Params& p, int n_theta) { return measure(p, n_theta); }, py::arg("p"),
          py::arg("n_theta") = 512, py::call_guard<py::gil_scoped_release>());

    py::class_<ParamLoop>(m, "ParamLoop")
        .def_static("square", &ParamLoop::square, py::arg("omega_min"), py::arg("omega_max"), py::arg("eps_min"),
                    py::arg("eps_max"))
        .def_static("ellipse", &ParamLoop::ellipse, py::arg("omega0"), py::arg("eps0"), py::arg("a_omega"),
                    py::arg("a_eps"), py::arg("phase") = 0.0)
        .def_static("polyline", &ParamLoop::polyline, py::arg("vertices"))
        .def("at", &ParamLoop::at)
        .def("reversed", &ParamLoop::reversed)
        .def("describe", &ParamLoop::describe);

    m.def("hannay_angle", [](const ParamLoop& loop) { return hannay_angle(loop).phi_H; }, py::arg("loop"));
    m.def("hannay_angle_green", [](const ParamLoop& loop) { return green_theorem_oracle(loop).phi_H; },
          py::arg("loop"));

    py::enum_<PhaseSense>(m, "PhaseSense")
        .value("along_flow", PhaseSense::along_flow)
        .value("phase_plane", PhaseSense::phase_plane);

    py::class_<PhaseResult>(m, "PhaseResult")
        .def_readonly("total_phase", &PhaseResult::total_phase)
        .def_readonly("dynamic_phase", &PhaseResult::dynamic_phase)
        .def_readonly("geometric_phase", &PhaseResult::geometric_phase)
        .def_readonly("T", &PhaseResult::T)
        .def_readonly("cycles", &PhaseResult::cycles)
        .def_readonly("winding", &PhaseResult::winding)
        .def_readonly("max_deviation", &PhaseResult::max_deviation)
        .def_readonly("steps", &PhaseResult::steps);

    py::class_<FrozenGrid>(m, "FrozenGrid")
        .def("frequency", &FrozenGrid::frequency)
        .def("duration_for_cycles", [](const FrozenGrid& g, double cycles) { return duration_for_cycles(g, cycles); })
        .def(
            "sweep",
            [](const FrozenGrid& g, double T, double min_cycles, PhaseSense sense) {
                SweepConfig cfg;
                cfg.min_cycles = min_cycles;
                cfg.sense = sense;
                return sweep(g, T, cfg);
            },
            py::arg("T"), py::arg("min_cycles") = SweepConfig{}.min_cycles,
            py::arg("sense") = PhaseSense::phase_plane, py::call_guard<py::gil_scoped_release>());
    m.def(
        "frozen_grid",
        [](const ParamLoop& loop, int n_s, int n_theta, unsigned threads) {
            return frozen_grid(loop, n_s, n_theta, {}, threads);
        },
        py::arg("loop"), py::arg("n_s") = 64, py::arg("n_theta") = 512, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

    py::class_<CoupledParams>(m, "CoupledParams")
        .def(py::init([](double w1, double w2, double eps, bool quad) { return CoupledParams{w1, w2, eps, quad}; }),
             py::arg("omega1") = 1.0, py::arg("omega2") = 1.0, py::arg("eps") = 0.0,
             py::arg("quadratic_frequency") = false)
        .def_readwrite("omega1", &CoupledParams::omega1)
        .def_readwrite("omega2", &CoupledParams::omega2)
        .def_readwrite("eps", &CoupledParams::eps);

    py::class_<CompareReport>(m, "CompareReport")
        .def_readonly("horizon", &CompareReport::horizon)
        .def_readonly("alpha_deviation", &CompareReport::alpha_deviation)
        .def_readonly("phase_deviation", &CompareReport::phase_deviation)
        .def_readonly("energy_drift", &CompareReport::energy_drift);
    m.def(
        "compare",
        [](const CoupledParams& cp, double horizon, double alpha1, double alpha2) {
            CompareConfig cfg;
            cfg.initial = {alpha1, alpha2, 0.0, 0.0};
            return compare(cp, horizon, cfg);
        },
        py::arg("cp"), py::arg("horizon"), py::arg("alpha1") = 1.0, py::arg("alpha2") = 1.0,
        py::call_guard<py::gil_scoped_release>());
}
