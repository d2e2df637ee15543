#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bllimit/adim_solver.hpp"
#include "bllimit/closures.hpp"
#include "bllimit/config.hpp"
#include "bllimit/experiments.hpp"
#include "bllimit/limit_solver.hpp"
#include "bllimit/transforms.hpp"

namespace py = pybind11;
using namespace bll;

namespace {

py::array_t<double> vec(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> grid_array(const Field2D& f) {
    const Grid2D& g = f.grid();
    py::array_t<double> out({g.n_s(), g.n_t()});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < g.n_s(); ++i)
        for (std::size_t j = 0; j < g.n_t(); ++j) w(i, j) = f(i, j);
    return out;
}

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["final_update_norm"] = r.final_update_norm;
    d["continuity_residual"] = r.continuity_residual_l2;
    d["momentum_residual"] = r.momentum_residual;
    d["converged"] = r.converged;
    return d;
}

struct Solved {
    HeightCurve curve;
    std::shared_ptr<const Grid2D> grid;
    AdimSolution sol;
};

Solved solve(double eps, std::size_t ns, std::size_t nt, const GasParameters& gas, const CurveDescriptor& domain,
             const AdimOptions& opts) {
    const DerivedConstants c = derive_constants(gas);
    HeightCurve curve = build_height_curve(domain).with_epsilon(eps);
    auto grid = Grid2D::from_curve(curve, ns, nt);
    AdimSolution sol = solve_adimensional(grid, c, eps, opts);
    return {std::move(curve), std::move(grid), std::move(sol)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Compressible thin-film boundary layer limit toolkit";
    m.attr("__version__") = BLLIMIT_VERSION;

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            auto cls = py::reinterpret_borrow<py::object>(error.ptr());
            py::object inst = cls(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    py::class_<GasParameters>(m, "GasParameters")
        .def(py::init<>())
        .def_readwrite("U", &GasParameters::U)
        .def_readwrite("T_h", &GasParameters::T_h)
        .def_readwrite("mu_h", &GasParameters::mu_h)
        .def_readwrite("c_p", &GasParameters::c_p)
        .def_readwrite("R", &GasParameters::R)
        .def_readwrite("b", &GasParameters::b)
        .def_readwrite("p0", &GasParameters::p0)
        .def_readwrite("power_law_exp", &GasParameters::power_law_exp);

    py::class_<CurveDescriptor>(m, "CurveDescriptor")
        .def(py::init<>())
        .def_property(
            "family", [](const CurveDescriptor& d) { return std::string(to_string(d.family)); },
            [](CurveDescriptor& d, const std::string& s) { d.family = curve_family_from_string(s); })
        .def_readwrite("length", &CurveDescriptor::length)
        .def_readwrite("delta", &CurveDescriptor::delta)
        .def_readwrite("height", &CurveDescriptor::height)
        .def_readwrite("table_x", &CurveDescriptor::table_x)
        .def_readwrite("table_h", &CurveDescriptor::table_h);

    py::class_<AdimOptions>(m, "AdimOptions")
        .def(py::init<>())
        .def_readwrite("relaxation", &AdimOptions::relaxation)
        .def_readwrite("max_iterations", &AdimOptions::max_iterations)
        .def_readwrite("tolerance", &AdimOptions::tolerance)
        .def_readwrite("convection", &AdimOptions::convection)
        .def_readwrite("viscosity_exponent", &AdimOptions::viscosity_exponent);

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def_readonly("gas", &DerivedConstants::gas)
        .def_readonly("T0", &DerivedConstants::T0)
        .def_readonly("i0", &DerivedConstants::i0)
        .def_readonly("c1", &DerivedConstants::c1)
        .def_readonly("c2", &DerivedConstants::c2)
        .def_readonly("c3", &DerivedConstants::c3)
        .def_readonly("sigma0", &DerivedConstants::sigma0)
        .def_readonly("C_big", &DerivedConstants::C_big)
        .def_readonly("k", &DerivedConstants::k);

    m.def("derive_constants", &derive_constants, py::arg("gas") = GasParameters{});

    py::class_<ClosureSet>(m, "ClosureSet")
        .def(py::init<const DerivedConstants&, double>(), py::arg("constants"),
             py::arg("margin") = ClosureSet::default_margin)
        .def_property_readonly("validity_bound", &ClosureSet::validity_bound)
        .def("valid", &ClosureSet::valid)
        .def("sigma", &ClosureSet::sigma)
        .def("temperature", &ClosureSet::temperature)
        .def("pressure", &ClosureSet::pressure)
        .def("density", &ClosureSet::density)
        .def("density_constant_pressure", &ClosureSet::density_constant_pressure)
        .def("viscosity", &ClosureSet::viscosity)
        .def("conductivity", &ClosureSet::conductivity)
        .def("total_energy", &ClosureSet::total_energy);

    m.def("g_integral", &g_integral, py::arg("u"), py::arg("i0"), py::arg("exponent") = 6.0 / 25.0,
          py::arg("abs_tol") = 1e-12);

    m.def(
        "solve_limit_profile",
        [](double h, const GasParameters& gas, std::size_t n, double exponent) {
            const DerivedConstants c = derive_constants(gas);
            LimitOptions o;
            o.exponent = exponent;
            const VelocityProfile p = solve_limit_profile(h, gas.U, c, n, o);
            py::dict d;
            d["y"] = vec(p.y);
            d["u"] = vec(p.u);
            if (n >= 16 && gas.U > 0.0) d["residual_max"] = residual_check(p, c, exponent).max_abs;
            return d;
        },
        py::arg("h"), py::arg("gas") = GasParameters{}, py::arg("n") = 1024, py::arg("exponent") = 6.0 / 25.0);

    m.def(
        "solve_adim",
        [](double eps, std::size_t ns, std::size_t nt, const GasParameters& gas, const CurveDescriptor& domain,
           const AdimOptions& opts) {
            const Solved s = solve(eps, ns, nt, gas, domain, opts);
            py::dict d;
            d["s"] = vec(s.grid->s_nodes());
            d["tau_hat"] = vec(s.grid->tau_hat_nodes());
            std::vector<double> h(s.grid->n_s());
            for (std::size_t i = 0; i < h.size(); ++i) h[i] = s.grid->h(i);
            d["h"] = vec(h);
            d["u"] = grid_array(s.sol.u);
            d["v"] = grid_array(s.sol.v);
            d["report"] = report_dict(s.sol.report);
            return d;
        },
        py::arg("eps"), py::arg("n_s") = 64, py::arg("n_t") = 128, py::arg("gas") = GasParameters{},
        py::arg("domain") = CurveDescriptor{}, py::arg("options") = AdimOptions{});

    m.def(
        "transform_check",
        [](double eps, std::size_t ns, std::size_t nt, const GasParameters& gas, const CurveDescriptor& domain) {
            const Solved s = solve(eps, ns, nt, gas, domain, {});
            const DerivedConstants c = derive_constants(gas);
            const DorodnitzynMap map = build_dorodnitzyn_map(s.sol.u, c, s.curve);
            const IncompressibleField F =
                build_incompressible_field(map, build_streamfunction(s.sol.u, s.sol.v, c), s.sol.u, s.sol.v, c);
            const EnergyReport e = energy_bound_check(F, c);
            py::dict d;
            d["jacobian_max_dev"] = map.jacobian_max_dev;
            d["div_l2"] = divergence_l2(F);
            d["f2_boundary_max"] = F.f2_boundary_max;
            d["energy_lhs"] = e.lhs;
            d["energy_rhs"] = e.rhs;
            d["satisfied"] = e.satisfied;
            d["satisfied_sqrt"] = e.satisfied_sqrt;
            d["warnings"] = map.warnings;
            return d;
        },
        py::arg("eps"), py::arg("n_s") = 64, py::arg("n_t") = 128, py::arg("gas") = GasParameters{},
        py::arg("domain") = CurveDescriptor{});

    m.def(
        "_sweep_json",
        [](const std::vector<double>& eps, std::size_t ns, std::size_t nt, const GasParameters& gas,
           const CurveDescriptor& domain, std::size_t workers, const std::string& output_dir) {
            SweepConfig cfg;
            cfg.eps_values = eps;
            cfg.grid = {ns, nt};
            cfg.gas = gas;
            cfg.domain = domain;
            cfg.workers = workers;
            cfg.output_dir = output_dir;
            ConvergenceReport rep;
            {
                py::gil_scoped_release release;
                rep = run_epsilon_sweep(cfg);
            }
            nlohmann::json j;
            j["rows"] = nlohmann::json::array();
            for (const auto& r : rep.rows) j["rows"].push_back(to_json(r));
            j["csv"] = rep.csv_path.string();
            return j.dump();
        },
        py::arg("eps_values"), py::arg("n_s"), py::arg("n_t"), py::arg("gas"), py::arg("domain"), py::arg("workers"),
        py::arg("output_dir"));

    m.def(
        "_config_json", [](const std::string& path) { return to_json(parse_config(path)).dump(); }, py::arg("path"));
}
