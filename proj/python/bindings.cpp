#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffsplit/config.hpp"
#include "ffsplit/designer.hpp"
#include "ffsplit/io.hpp"
#include "ffsplit/runner.hpp"
#include "ffsplit/splitting.hpp"
#include "ffsplit/two_mode.hpp"

namespace py = pybind11;
using namespace ffsplit;

namespace {

py::array_t<double> trace_values(const PotentialTrace& tr) {
    const int nt = tr.mesh().samples(), nx = tr.grid().size();
    py::array_t<double> out({nt, nx});
    auto buf = out.mutable_unchecked<2>();
    for (int k = 0; k < nt; ++k)
        for (int i = 0; i < nx; ++i) buf(k, i) = tr.at(k, i);
    return out;
}

py::dict report_dict(const FidelityReport& r) {
    py::dict d;
    d["lambda"] = r.lambda;
    d["tf"] = r.t_f;
    d["gN"] = r.coupling;
    d["protocol"] = r.protocol;
    d["F_S"] = r.F_S;
    d["F_D0"] = r.F_D0;
    d["F_D"] = r.F_D;
    d["F_I"] = r.F_I;
    if (r.F_S_2m) d["F_S_2m"] = *r.F_S_2m;
    if (r.F_D0_2m) d["F_D0_2m"] = *r.F_D0_2m;
    if (r.F_D_2m) d["F_D_2m"] = *r.F_D_2m;
    if (r.sudden) d["sudden_metric"] = *r.sudden;
    if (r.adiabatic) d["adiabatic_metric"] = *r.adiabatic;
    if (!r.error.empty()) d["error"] = r.error;
    return d;
}

LabOptions lab_options(double box, int n_x, int design_samples, long prop_steps,
                       int extraction_stride, bool two_mode, bool criteria, int threads) {
    LabOptions o;
    o.box_half_width = box;
    o.n_x = n_x;
    o.design_samples = design_samples;
    o.prop_steps = prop_steps;
    o.extraction_stride = extraction_stride;
    o.two_mode = two_mode;
    o.criteria = criteria;
    o.threads = threads;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fast-forward matter-wave splitting: designers, solvers and fidelity sweeps";

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, int>(), py::arg("half_width"), py::arg("n"))
        .def_property_readonly("dx", &Grid::dx)
        .def_property_readonly("x", [](const Grid& g) { return py::array_t<double>(
            g.size(), g.nodes().data()); })
        .def("__len__", &Grid::size);

    py::class_<Units>(m, "Units")
        .def(py::init([](double mass, double omega) { return Units{mass, omega}; }),
             py::arg("mass_kg") = 1.44e-25, py::arg("omega_rad_s") = 780.0)
        .def_readonly("mass_kg", &Units::mass_kg)
        .def_readonly("omega_rad_s", &Units::omega_rad_s)
        .def("oscillator_length_m", &Units::oscillator_length_m)
        .def("length_from_si", &Units::length_from_si)
        .def("time_from_si", &Units::time_from_si)
        .def("energy_from_si", &Units::energy_from_si);

    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("energy", &EigenPair::energy)
        .def_readonly("index", &EigenPair::index)
        .def_property_readonly("psi", [](const EigenPair& p) {
            return py::array_t<double>(p.psi.size(), p.psi.data());
        });

    py::class_<PotentialTrace>(m, "PotentialTrace")
        .def_property_readonly("values", &trace_values)
        .def_property_readonly("t_final", [](const PotentialTrace& t) { return t.mesh().t_final(); })
        .def_property_readonly("grid", &PotentialTrace::grid)
        .def("slice", [](const PotentialTrace& t, int k) {
            const RealField s = t.slice(k);
            return py::array_t<double>(s.size(), s.data());
        });

    py::class_<TwoModeSystem>(m, "TwoModeSystem")
        .def_property_readonly("times", [](const TwoModeSystem& s) {
            return py::array_t<double>(s.times.size(), s.times.data()); })
        .def_property_readonly("delta", [](const TwoModeSystem& s) {
            return py::array_t<double>(s.delta.size(), s.delta.data()); })
        .def_property_readonly("lambda_prime", [](const TwoModeSystem& s) {
            return py::array_t<double>(s.lambda_prime.size(), s.lambda_prime.data()); })
        .def_readonly("lambda_m", &TwoModeSystem::lambda_m)
        .def_readonly("routes_warning", &TwoModeSystem::routes_warning);

    py::class_<SplittingLab>(m, "SplittingLab")
        .def(py::init([](const std::string& protocol, double a, double gamma, double t_f,
                         double gN, double box, int n_x, int design_samples, long prop_steps,
                         int extraction_stride, bool two_mode, bool criteria, int threads) {
                 const LabOptions o = lab_options(box, n_x, design_samples, prop_steps,
                                                  extraction_stride, two_mode, criteria, threads);
                 const Grid g(o.box_half_width, o.n_x);
                 return SplittingLab(make_protocol(protocol, a, gamma, t_f, gN, g), o);
             }),
             py::arg("protocol") = "two_bump", py::arg("a") = 4.1281, py::arg("gamma") = 1.0,
             py::arg("t_f") = 249.6, py::arg("gN") = 0.0, py::arg("box_half_width") = 12.0,
             py::arg("n_x") = 513, py::arg("design_samples") = 4000,
             py::arg("prop_steps") = 1L << 17, py::arg("extraction_stride") = 8,
             py::arg("two_mode") = false, py::arg("criteria") = false, py::arg("threads") = 1)
        .def("run", [](const SplittingLab& lab, double lam) { return report_dict(lab.run(lam)); },
             py::arg("lambda_"))
        .def("trace", &SplittingLab::trace, py::return_value_policy::copy)
        .def("tunneling_rate_final", &SplittingLab::tunneling_rate_final)
        .def("two_mode_system", &SplittingLab::two_mode_system, py::arg("lambda_"))
        .def("ground_final", [](const SplittingLab& lab) { return lab.ground0_final(); });

    m.def("lowest_eigenpairs",
          [](const std::vector<double>& v, int k, const Grid& g, double gN) {
              return lowest_eigenpairs(v, k, g, gN);
          },
          py::arg("potential"), py::arg("k"), py::arg("grid"), py::arg("gN") = 0.0);

    m.def("gp_ground_state", [](const std::vector<double>& v, double gN, const Grid& g) {
        const GpResult r = gp_ground_state(v, gN, g);
        py::dict d;
        d["psi"] = py::array_t<double>(r.psi.size(), r.psi.data());
        d["mu"] = r.mu;
        d["energy"] = r.energy;
        d["residual"] = r.residual;
        d["iterations"] = r.iterations;
        return d;
    }, py::arg("potential"), py::arg("gN"), py::arg("grid"));

    m.def("perturb", &perturb, py::arg("trace"), py::arg("lambda_"));

    m.def("propagate",
          [](py::array_t<std::complex<double>> psi0, const PotentialTrace& tr, long steps,
             double gN) {
              WaveState w;
              w.psi.assign(psi0.data(), psi0.data() + psi0.size());
              PropagateOptions o;
              o.steps = steps;
              o.coupling = gN;
              const WaveState out = propagate(w, tr, o);
              return py::array_t<std::complex<double>>(out.psi.size(), out.psi.data());
          },
          py::arg("psi0"), py::arg("trace"), py::arg("steps") = 1L << 15, py::arg("gN") = 0.0);

    m.def("analytic_eigensystem", [](double delta, double lambda_m) {
        const TwoModeEigen e = analytic_eigensystem(delta, lambda_m);
        py::dict d;
        d["e_minus"] = e.e_minus;
        d["e_plus"] = e.e_plus;
        d["alpha"] = e.alpha;
        d["v_minus"] = e.v_minus;
        d["v_plus"] = e.v_plus;
        return d;
    }, py::arg("delta"), py::arg("lambda_m"));

    m.def("sweep",
          [](const std::string& axis, const std::vector<double>& values, const std::string& protocol,
             double a, double gamma, double t_f, double gN, double lam, double box, int n_x,
             int design_samples, long prop_steps, int extraction_stride, bool two_mode,
             bool criteria, int threads) {
              SweepSpec spec;
              spec.protocol = protocol;
              spec.a = a;
              spec.gamma = gamma;
              spec.t_f = t_f;
              spec.coupling = gN;
              spec.lambda = lam;
              spec.lab = lab_options(box, n_x, design_samples, prop_steps, extraction_stride,
                                     two_mode, criteria, threads);
              SweepAxis ax;
              if (axis == "lambda") ax = SweepAxis::Lambda;
              else if (axis == "tf") ax = SweepAxis::Duration;
              else if (axis == "gN") ax = SweepAxis::Coupling;
              else throw std::invalid_argument("sweep axis must be lambda, tf or gN");
              const auto rows = sweep(ax, values, spec);
              py::list out;
              for (const auto& r : rows) out.append(report_dict(r));
              return out;
          },
          py::arg("axis"), py::arg("values"), py::arg("protocol") = "two_bump",
          py::arg("a") = 4.1281, py::arg("gamma") = 1.0, py::arg("t_f") = 249.6,
          py::arg("gN") = 0.0, py::arg("lambda_") = 0.0, py::arg("box_half_width") = 12.0,
          py::arg("n_x") = 513, py::arg("design_samples") = 4000, py::arg("prop_steps") = 1L << 17,
          py::arg("extraction_stride") = 8, py::arg("two_mode") = false,
          py::arg("criteria") = false, py::arg("threads") = 1);

    m.def("parse_config", [](const std::string& text) {
        const ScenarioConfig c = parse_config(text);
        return serialize_config(c);
    });

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SolverError>(m, "SolverError");
}
