// Python bindings for the main operations: grids, symbols, systems, the
// symmetrization layer, energies, integration and the verification oracles.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wtbouss/config.hpp"
#include "wtbouss/verify.hpp"

namespace py = pybind11;
using namespace wtbouss;

namespace {

RealField field_from_array(const GridSpec& g, py::array_t<double, py::array::c_style> arr) {
    auto buf = arr.request();
    if (buf.ndim != 2 || buf.shape[0] != g.nx || buf.shape[1] != g.ny)
        throw ArgumentError("array shape must be (nx, ny)");
    RealField f(g);
    const double* src = static_cast<const double*>(buf.ptr);
    std::copy(src, src + g.n(), f.v.begin());
    return f;
}

py::array_t<double> array_from_field(const RealField& f) {
    py::array_t<double> arr({f.grid.nx, f.grid.ny});
    std::copy(f.v.begin(), f.v.end(), static_cast<double*>(arr.request().ptr));
    return arr;
}

}  // namespace

PYBIND11_MODULE(wtbouss, m) {
    m.doc() = "pseudospectral toolkit for weakly transverse Boussinesq systems";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, int, double, double, double>(), py::arg("nx"), py::arg("ny"),
             py::arg("lx"), py::arg("ly"), py::arg("dealias_fraction") = 2.0 / 3.0)
        .def_readonly("nx", &GridSpec::nx)
        .def_readonly("ny", &GridSpec::ny)
        .def_readonly("lx", &GridSpec::lx)
        .def_readonly("ly", &GridSpec::ly)
        .def_readonly("dealias_fraction", &GridSpec::dealias_fraction);

    py::enum_<CaseTag>(m, "CaseTag")
        .value("General", CaseTag::General)
        .value("Case1", CaseTag::Case1)
        .value("Case2", CaseTag::Case2);

    py::enum_<SystemId>(m, "SystemId")
        .value("WTB1", SystemId::WTB1)
        .value("WTB2", SystemId::WTB2)
        .value("Case1", SystemId::Case1)
        .value("Case2", SystemId::Case2);

    py::class_<ModelParams>(m, "ModelParams")
        .def_static("case1", &ModelParams::case1, py::arg("eps"))
        .def_static("case2", &ModelParams::case2, py::arg("eps"))
        .def_static("general", &ModelParams::general, py::arg("abcdefg"), py::arg("eps"))
        .def_readonly("a", &ModelParams::a)
        .def_readonly("b", &ModelParams::b)
        .def_readonly("c", &ModelParams::c)
        .def_readonly("d", &ModelParams::d)
        .def_readonly("e", &ModelParams::e)
        .def_readonly("f", &ModelParams::f)
        .def_readonly("g", &ModelParams::g)
        .def_readwrite("eps", &ModelParams::eps);

    py::class_<ParamsReport>(m, "ParamsReport")
        .def_readonly("constraint_res1", &ParamsReport::constraint_res1)
        .def_readonly("constraint_res2", &ParamsReport::constraint_res2)
        .def_readonly("constraint_ok", &ParamsReport::constraint_ok)
        .def_readonly("family", &ParamsReport::family)
        .def_readonly("curl_free_ok", &ParamsReport::curl_free_ok)
        .def_readonly("case_tag_ok", &ParamsReport::case_tag_ok)
        .def("summary", &ParamsReport::summary);
    m.def("validate_params", &validate_params);

    py::class_<State>(m, "State")
        .def(py::init([](const GridSpec& g, py::array_t<double, py::array::c_style> v,
                         py::array_t<double, py::array::c_style> w,
                         py::array_t<double, py::array::c_style> zeta) {
                 State s(g);
                 s.v = field_from_array(g, v);
                 s.w = field_from_array(g, w);
                 s.zeta = field_from_array(g, zeta);
                 return s;
             }),
             py::arg("grid"), py::arg("v"), py::arg("w"), py::arg("zeta"))
        .def_property_readonly("v", [](const State& s) { return array_from_field(s.v); })
        .def_property_readonly("w", [](const State& s) { return array_from_field(s.w); })
        .def_property_readonly("zeta", [](const State& s) { return array_from_field(s.zeta); })
        .def_readonly("time", &State::time);

    m.def(
        "apply_symbol_lambda1",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> f, double eps,
           double power) {
            return array_from_field(
                apply_symbol(SymbolSpec::lambda1(eps, power), field_from_array(g, f)));
        },
        py::arg("grid"), py::arg("f"), py::arg("eps"), py::arg("power") = 1.0);
    m.def("lambda1", [](double xi1, double xi2, double eps) {
        return SymbolSpec::lambda1(eps).eval(xi1, xi2).real();
    });
    m.def("lambda2", [](double xi1, double xi2, double eps) {
        return SymbolSpec::lambda2(eps).eval(xi1, xi2).real();
    });
    m.def(
        "dealiased_product",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> f,
           py::array_t<double, py::array::c_style> h) {
            return array_from_field(dealiased_product(field_from_array(g, f), field_from_array(g, h)));
        },
        py::arg("grid"), py::arg("f"), py::arg("g"));
    m.def(
        "transform_roundtrip_error",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> f) {
            RealField x = field_from_array(g, f);
            return max_abs(inverse_transform(transform(x)) - x);
        },
        py::arg("grid"), py::arg("f"));

    m.def(
        "rhs",
        [](SystemId sys, const State& s, const ModelParams& p, bool linearized) {
            Tendency t = rhs(sys, s, p, linearized);
            return py::make_tuple(array_from_field(t.dv), array_from_field(t.dw),
                                  array_from_field(t.dzeta));
        },
        py::arg("system"), py::arg("state"), py::arg("params"), py::arg("linearized") = false);
    m.def(
        "zeta_tilde",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> z, double eps) {
            return array_from_field(zeta_tilde(field_from_array(g, z), eps));
        },
        py::arg("grid"), py::arg("zeta"), py::arg("eps"));
    m.def(
        "curl_residual",
        [](const State& s, double eps, bool scaled) { return curl_residual(s, eps, scaled); },
        py::arg("state"), py::arg("eps"), py::arg("scaled"));
    m.def(
        "consistency_residual",
        [](const State& s, const ModelParams& p, int n) {
            ConsistencyResidual r = consistency_residual(s, p, n);
            return py::make_tuple(r.per_equation[0], r.per_equation[1], r.per_equation[2],
                                  r.total);
        },
        py::arg("state"), py::arg("params"), py::arg("n") = 2);

    m.def(
        "to_ptheta",
        [](CaseTag tag, const State& s, double eps) {
            GoodUnknowns u = to_ptheta(tag, s, eps);
            return py::make_tuple(array_from_field(u.p), array_from_field(u.theta));
        },
        py::arg("case_tag"), py::arg("state"), py::arg("eps"));
    m.def(
        "from_ptheta",
        [](CaseTag tag, const GridSpec& g, py::array_t<double, py::array::c_style> p,
           py::array_t<double, py::array::c_style> th, double eps) {
            return from_ptheta(tag, field_from_array(g, p), field_from_array(g, th), eps);
        },
        py::arg("case_tag"), py::arg("grid"), py::arg("p"), py::arg("theta"), py::arg("eps"));
    m.def(
        "gamma_apply",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> zeta,
           py::array_t<double, py::array::c_style> f, double eps) {
            GammaPair gp = gamma_apply(field_from_array(g, zeta), field_from_array(g, f), eps,
                                       ResolventConfig{});
            return py::make_tuple(array_from_field(gp.Gamma), array_from_field(gp.gamma),
                                  gp.stats.contraction);
        },
        py::arg("grid"), py::arg("zeta"), py::arg("f"), py::arg("eps"));

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("e_total", &EnergyReport::e_total)
        .def_readonly("e_low", &EnergyReport::e_low)
        .def_readonly("e_high", &EnergyReport::e_high)
        .def_readonly("e_tilde_high", &EnergyReport::e_tilde_high)
        .def_readonly("time", &EnergyReport::time);
    m.def(
        "energy",
        [](CaseTag tag, const State& s, double sobolev_s, double eps) {
            return energy(tag, s, sobolev_s, eps);
        },
        py::arg("case_tag"), py::arg("state"), py::arg("sobolev_s"), py::arg("eps"));
    m.def(
        "sobolev_norm",
        [](const GridSpec& g, py::array_t<double, py::array::c_style> f, double s,
           const std::string& flavor, double eps) {
            NormFlavor fl = flavor == "homogeneous" ? NormFlavor::Homogeneous
                           : flavor == "hs_eps"     ? NormFlavor::HsEps
                                                    : NormFlavor::Inhomogeneous;
            return sobolev_norm(field_from_array(g, f), s, fl, eps);
        },
        py::arg("grid"), py::arg("f"), py::arg("s"), py::arg("flavor") = "inhomogeneous",
        py::arg("eps") = 0.0);

    py::class_<DispersionResult>(m, "DispersionResult")
        .def_readonly("k1", &DispersionResult::k1)
        .def_readonly("k2", &DispersionResult::k2)
        .def_readonly("predicted", &DispersionResult::predicted)
        .def_readonly("measured", &DispersionResult::measured)
        .def_readonly("rel_err", &DispersionResult::rel_err);
    m.def("dispersion_check", &dispersion_check, py::arg("system"), py::arg("params"),
          py::arg("grid"), py::arg("k1"), py::arg("k2"), py::arg("T") = 10.0,
          py::arg("dt") = 1e-3, py::arg("amp") = 1e-8);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("system", &RunConfig::system)
        .def_readwrite("params", &RunConfig::params)
        .def_readwrite("grid", &RunConfig::grid)
        .def_readwrite("dt", &RunConfig::dt)
        .def_readwrite("t_end", &RunConfig::t_end)
        .def_readwrite("amplitude", &RunConfig::amplitude)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("linearized", &RunConfig::linearized)
        .def_readwrite("diag_every", &RunConfig::diag_every)
        .def_readwrite("sobolev_s", &RunConfig::sobolev_s);

    py::class_<DiagnosticsRecord>(m, "DiagnosticsRecord")
        .def_readonly("time", &DiagnosticsRecord::time)
        .def_readonly("energy", &DiagnosticsRecord::energy)
        .def_readonly("curl_res", &DiagnosticsRecord::curl_res);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("records", &RunResult::records)
        .def_readonly("ok", &RunResult::ok)
        .def_readonly("error", &RunResult::error)
        .def_property_readonly("final_state", [](const RunResult& r) { return r.final_state; });
    m.def("integrate", &integrate, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    m.def("random_curl_free_state", &random_curl_free_state, py::arg("case_tag"), py::arg("grid"),
          py::arg("eps"), py::arg("band"), py::arg("amp"), py::arg("seed"));
}
