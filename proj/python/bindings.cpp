#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kellerscope/commands.hpp"
#include "kellerscope/check.hpp"
#include "kellerscope/csv.hpp"
#include "kellerscope/snapshot.hpp"

namespace py = pybind11;
using namespace kellerscope;

namespace {

// Fields cross the boundary as float64 arrays shaped (nx,) or (ny, nx).
py::array_t<double> to_array(const Field& f, const Domain& d) {
    std::vector<py::ssize_t> shape;
    if (d.dim() == 1) {
        shape = {static_cast<py::ssize_t>(d.nx())};
    } else {
        shape = {static_cast<py::ssize_t>(d.ny()), static_cast<py::ssize_t>(d.nx())};
    }
    py::array_t<double> out(shape);
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

Field from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a, const Domain& d) {
    if (static_cast<std::size_t>(a.size()) != d.size())
        throw StructuralError("array has " + std::to_string(a.size()) + " entries, domain has " +
                              std::to_string(d.size()) + " cells");
    return Field(d.shape(), std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict sample_dict(const Sample& s) {
    py::dict out;
    out["t"] = s.t;
    out["dt"] = s.dt;
    out["mass"] = s.mass;
    out["sup_u"] = s.sup_u;
    out["sup_v"] = s.sup_v;
    out["l2_u"] = s.l2_u;
    out["lgamma_u"] = s.lgamma_u;
    out["status"] = std::string(to_string(s.status));
    return out;
}

py::dict result_dict(const RunResult& r) {
    py::dict out;
    const Domain& d = r.final.domain;
    out["status"] = std::string(to_string(r.final.status));
    out["t"] = r.final.t;
    out["steps"] = r.final.steps;
    out["u"] = to_array(r.final.u, d);
    out["v"] = to_array(r.final.v, d);
    py::list series;
    for (const Sample& s : r.series) series.append(sample_dict(s));
    out["series"] = series;
    out["outcome"] = std::string(to_string(r.error ? Outcome::Undecided : classify_run(r.final, r.series)));
    out["error"] = r.error ? py::cast(*r.error) : py::none();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Keller-Segel chemotaxis simulator with boundedness diagnostics";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Domain>(m, "Domain")
        .def_static("interval", &Domain::interval, py::arg("length"), py::arg("cells"))
        .def_static("rectangle", &Domain::rectangle, py::arg("lx"), py::arg("ly"), py::arg("nx"), py::arg("ny"))
        .def_property_readonly("dim", &Domain::dim)
        .def_property_readonly("nx", &Domain::nx)
        .def_property_readonly("ny", &Domain::ny)
        .def_property_readonly("measure", &Domain::measure)
        .def_property_readonly("spacings", &Domain::spacings)
        .def("__repr__", [](const Domain& d) {
            return "Domain(dim=" + std::to_string(d.dim()) + ", nx=" + std::to_string(d.nx()) +
                   ", ny=" + std::to_string(d.ny()) + ")";
        });

    py::enum_<PhiFamily>(m, "PhiFamily").value("Canonical", PhiFamily::Canonical).value("Linear", PhiFamily::Linear);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("tau", &ModelParams::tau)
        .def_readwrite("chi", &ModelParams::chi)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("k", &ModelParams::k)
        .def_readwrite("p", &ModelParams::p)
        .def_readwrite("s0_phi", &ModelParams::s0_phi)
        .def_readwrite("phi_family", &ModelParams::phi_family)
        .def_readwrite("reaction", &ModelParams::reaction);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("dt_init", &StepperConfig::dt_init)
        .def_readwrite("dt_min", &StepperConfig::dt_min)
        .def_readwrite("dt_max", &StepperConfig::dt_max)
        .def_readwrite("safety", &StepperConfig::safety)
        .def_readwrite("blowup_threshold", &StepperConfig::blowup_threshold)
        .def_readwrite("t_end", &StepperConfig::t_end)
        .def_readwrite("observer_stride", &StepperConfig::observer_stride)
        .def_readwrite("observer_gamma", &StepperConfig::observer_gamma);

    m.def("checked", &checked, py::arg("params"));
    m.def("phi", &phi, py::arg("s"), py::arg("params"));
    m.def("g_logistic", &g_logistic, py::arg("s"), py::arg("params"));
    m.def("homogeneous_steady_state", [](const ModelParams& p) {
        const auto s = homogeneous_steady_state(p);
        return py::make_tuple(s.u_star, s.v_star);
    });

    m.def("laplacian_neumann", [](py::array_t<double> f, const Domain& d) {
        return to_array(laplacian_neumann(from_array(f, d), d), d);
    });
    m.def("diffusive_divergence", [](py::array_t<double> u, const ModelParams& p, const Domain& d) {
        return to_array(diffusive_divergence(from_array(u, d), p, d), d);
    });
    m.def("chemotactic_divergence", [](py::array_t<double> u, py::array_t<double> v, double chi, const Domain& d) {
        return to_array(chemotactic_divergence(from_array(u, d), from_array(v, d), chi, d), d);
    });
    m.def("integrate", [](py::array_t<double> f, const Domain& d) { return integrate(from_array(f, d), d); });
    m.def("solve_helmholtz", [](py::array_t<double> rhs, double alpha, const Domain& d) {
        return to_array(solve_helmholtz(from_array(rhs, d), alpha, d).w, d);
    });

    m.def(
        "run",
        [](const Domain& d, py::array_t<double> u0, py::array_t<double> v0, const ModelParams& p,
           const StepperConfig& cfg) {
            Field u = from_array(u0, d), v = from_array(v0, d);
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(d, u, v, p, cfg);
            }
            return result_dict(r);
        },
        py::arg("domain"), py::arg("u0"), py::arg("v0"), py::arg("params"), py::arg("config"));

    m.def("c2_constant", &c2_constant);
    m.def("mu_threshold", &mu_threshold, py::arg("gamma"), py::arg("eta"), py::arg("chi"), py::arg("c_reg"));
    m.def(
        "theta0",
        [](double g0, double chi, double c) {
            const Theta0 t = theta0(g0, chi, c);
            py::dict out;
            out["theta0"] = t.theta0;
            out["eta_star"] = t.eta_star;
            out["mu_min"] = t.mu_min;
            return out;
        },
        py::arg("gamma0"), py::arg("chi"), py::arg("c_reg"));
    m.def("theta0_row", &theta0_row);
    m.def(
        "classify_theory",
        [](double p, double q, int n, double chi, double mu, double th) {
            return std::string(to_string(classify_theory(p, q, n, chi, mu, th)));
        },
        py::arg("p"), py::arg("q"), py::arg("n"), py::arg("chi"), py::arg("mu"), py::arg("theta0_est"));
    m.def("lgamma_norm", [](py::array_t<double> u, double g, const Domain& d) { return lgamma_norm(from_array(u, d), g, d); });

    // Config-driven entry points mirror the command-line tool.
    m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
          "Validate a config; returns its canonical text.");
    m.def(
        "run_config",
        [](const std::string& text) {
            const RunConfig cfg = parse_config(text);
            auto [u0, v0] = make_initial(cfg.initial, cfg.domain, cfg.model, cfg.seed);
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(cfg.domain, u0, v0, cfg.model, cfg.stepper);
            }
            return result_dict(r);
        },
        py::arg("text"));
    m.def(
        "sweep_config",
        [](const std::string& text, int workers) {
            const SweepSpec spec = make_sweep_spec(parse_config(text));
            std::vector<RunRecord> records;
            {
                py::gil_scoped_release release;
                records = run_sweep(spec, workers);
            }
            return py::make_tuple(format_records_csv(records), format_regime_csv(regime_map(records)));
        },
        py::arg("text"), py::arg("workers") = 1, "Returns (records_csv, regime_map_csv).");
    m.def("check_config", [](const std::string& text) {
        py::list out;
        for (const CheckResult& r : run_invariant_checks(parse_config(text))) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
    });
}
