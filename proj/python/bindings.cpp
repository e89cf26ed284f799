// bindings.cpp: Python module `nonmarkov`

#include <complex>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nonmarkov/error.hpp"
#include "nonmarkov/greenfn.hpp"
#include "nonmarkov/laplace.hpp"
#include "nonmarkov/master.hpp"
#include "nonmarkov/pipeline.hpp"
#include "nonmarkov/scenario.hpp"
#include "nonmarkov/spectral.hpp"
#include "nonmarkov/wigner.hpp"

namespace py = pybind11;
namespace nm = nonmarkov;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& xs) {
    py::array_t<T> out(static_cast<py::ssize_t>(xs.size()));
    std::copy(xs.begin(), xs.end(), out.mutable_data());
    return out;
}

py::dict pole_dict(const nm::laplace::PoleReport& r) {
    py::list poles;
    for (const auto& p : r.bound_poles) {
        py::dict d;
        d["omega"] = p.omega;
        d["residue"] = p.residue;
        d["marginal"] = p.marginal;
        poles.append(d);
    }
    py::dict out;
    out["bound_poles"] = poles;
    out["omega_e"] = r.omega_e;
    out["omega_max"] = r.omega_max;
    out["critical_coupling"] = r.critical_coupling;
    out["continuum_weight"] = r.continuum_weight;
    out["residue_sum"] = r.residue_sum();
    out["sum_rule_residual"] = r.sum_rule_residual();
    return out;
}

nm::greenfn::EvolutionProblem make_problem(const nm::spectral::SpectralModel& model, double omega_c, double theta,
                                           double dt, double horizon) {
    return {omega_c, model, nm::spectral::BathSpec(theta), nm::greenfn::TimeGrid::covering(horizon, dt)};
}

} // namespace

PYBIND11_MODULE(nonmarkov, m) {
    m.doc() = "Exact non-Markovian dynamics of a cavity mode coupled to a structured reservoir";

    // Leaked on purpose: the translator outlives module teardown.
    static PyObject* error = (new py::exception<nm::Error>(m, "Error", PyExc_RuntimeError))->ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const nm::Error& e) {
            const std::string msg = std::string(nm::to_string(e.kind())) + ": " + e.what();
            PyErr_SetString(error, msg.c_str());
        }
    });

    py::class_<nm::spectral::SpectralModel>(m, "SpectralModel")
        .def_static("waveguide", [](double eta, double omega0, double xi0) {
            return nm::spectral::SpectralModel(nm::spectral::Waveguide{eta, omega0, xi0});
        }, py::arg("eta"), py::arg("omega0"), py::arg("xi0") = 1.0)
        .def_static("ohmic", [](double kappa, double omega_cut, double exponent) {
            return nm::spectral::SpectralModel(nm::spectral::OhmicFamily{kappa, omega_cut, exponent});
        }, py::arg("kappa"), py::arg("omega_cut"), py::arg("exponent") = 1.0)
        .def_static("tabulated", [](std::vector<double> omega, std::vector<double> J) {
            return nm::spectral::SpectralModel(nm::spectral::Tabulated{std::move(omega), std::move(J)});
        }, py::arg("omega"), py::arg("J"))
        .def("J", &nm::spectral::SpectralModel::J, py::arg("omega"))
        .def("support", [](const nm::spectral::SpectralModel& s) {
            const auto sup = s.support();
            return py::make_tuple(sup.lower, sup.upper);
        });

    m.def("eval_g", &nm::spectral::eval_g, py::arg("model"), py::arg("tau"));
    m.def("eval_nbar", [](double theta, double omega) { return nm::spectral::eval_nbar(nm::spectral::BathSpec(theta), omega); },
          py::arg("theta"), py::arg("omega"));
    m.def("theta_from_occupation", [](double omega, double nbar) {
        return nm::spectral::BathSpec::from_occupation(omega, nbar).theta;
    }, py::arg("omega"), py::arg("nbar"));

    m.def("sigma", &nm::laplace::sigma, py::arg("model"), py::arg("s"));
    m.def("delta", &nm::laplace::delta, py::arg("model"), py::arg("omega"));
    m.def("find_bound_poles", [](const nm::spectral::SpectralModel& model, double omega_c) {
        return pole_dict(nm::laplace::find_bound_poles(model, omega_c));
    }, py::arg("model"), py::arg("omega_c"));
    m.def("critical_coupling", &nm::laplace::critical_coupling, py::arg("omega_c"), py::arg("omega0"), py::arg("xi0") = 1.0);
    m.def("steady_envelope", [](double eta, double xi0) {
        const auto e = nm::laplace::steady_envelope(eta, xi0);
        return py::make_tuple(e.amplitude, e.frequency);
    }, py::arg("eta"), py::arg("xi0") = 1.0);

    m.def("solve", [](const nm::spectral::SpectralModel& model, double omega_c, double theta, double dt, double horizon) {
        const auto problem = make_problem(model, omega_c, theta, dt, horizon);
        const auto kernels = nm::greenfn::make_kernels(problem);
        const auto u = nm::greenfn::solve_u(problem, kernels);
        const auto v = nm::greenfn::solve_v(problem, kernels, u);
        std::vector<double> t(u.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = u.grid.time(k);
        py::dict out;
        out["t"] = to_array(t);
        out["u"] = to_array(u.u);
        out["v"] = to_array(v.v);
        return out;
    }, py::arg("model"), py::arg("omega_c"), py::arg("theta") = 0.0, py::arg("dt") = 1e-3, py::arg("horizon") = 20.0,
       "u(t) and v(t) on a uniform grid; returns a dict of numpy arrays.");

    m.def("reconstruct_u", [](const nm::spectral::SpectralModel& model, double omega_c, double dt, double horizon) {
        return to_array(nm::laplace::reconstruct_u(model, omega_c, nm::greenfn::TimeGrid::covering(horizon, dt)).u);
    }, py::arg("model"), py::arg("omega_c"), py::arg("dt") = 1e-3, py::arg("horizon") = 20.0);

    m.def("fringe_visibility", [](std::complex<double> alpha, std::complex<double> u, double v) {
        return nm::wigner::fringe_visibility(nm::wigner::CatState(alpha), u, v);
    }, py::arg("alpha"), py::arg("u"), py::arg("v"));
    m.def("cat_wigner", [](std::complex<double> alpha, std::complex<double> u, double v, std::complex<double> z) {
        return nm::wigner::cat_wigner_eval(nm::wigner::CatState(alpha), nm::wigner::WignerParams::from(u, v), z);
    }, py::arg("alpha"), py::arg("u"), py::arg("v"), py::arg("z"));
    m.def("thermal_wigner", &nm::wigner::thermal_wigner, py::arg("nbar"), py::arg("z"));
    m.def("fock_wigner", [](const Eigen::MatrixXcd& rho, std::complex<double> z) {
        return nm::master::wigner_from_density(nm::master::FockDensityMatrix(rho), z);
    }, py::arg("rho"), py::arg("z"));

    m.def("parse_scenario", [](const std::filesystem::path& path) {
        return nm::cli::echo_scenario(nm::cli::parse_scenario(path));
    }, py::arg("path"), "Validates a scenario file and returns its canonical echo.");
    m.def("run", [](const std::string& command, const std::filesystem::path& scenario, const std::filesystem::path& out) {
        const auto sub = nm::cli::parse_subcommand(command);
        if (!sub) throw py::value_error("unknown subcommand '" + command + "'");
        const auto outcome = nm::cli::run(*sub, nm::cli::parse_scenario(scenario), out);
        std::vector<std::string> files;
        for (const auto& f : outcome.files) files.push_back(f.generic_string());
        return py::make_tuple(outcome.exit_code, files);
    }, py::arg("command"), py::arg("scenario"), py::arg("out"));
}
