#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "nonstatq/checks.hpp"
#include "nonstatq/envelope.hpp"
#include "nonstatq/errors.hpp"
#include "nonstatq/field.hpp"
#include "nonstatq/quadratures.hpp"
#include "nonstatq/run.hpp"
#include "nonstatq/scenario.hpp"
#include "nonstatq/wavefunction.hpp"

namespace py = pybind11;
using namespace nonstatq;

namespace {

EnvelopeTrajectory integrate_scenario(const ScenarioConfig& cfg) {
    return integrate_envelope(cfg.medium(), cfg.mode, cfg.constants, resolve_initial_conditions(cfg), cfg.grid(),
                              cfg.integrator_options());
}

template <class T, class F>
py::array_t<T> column(const EnvelopeTrajectory& traj, F f) {
    std::vector<T> v;
    v.reserve(traj.size());
    for (const auto& s : traj.samples) v.push_back(f(s));
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict trajectory_arrays(const EnvelopeTrajectory& traj) {
    using S = EnvelopeSample;
    py::dict d;
    d["t"] = column<double>(traj, [](const S& s) { return s.t; });
    d["eps"] = column<cplx>(traj, [](const S& s) { return s.eps; });
    d["deps"] = column<cplx>(traj, [](const S& s) { return s.deps; });
    d["lambda"] = column<double>(traj, [](const S& s) { return s.lambda; });
    d["rho"] = column<double>(traj, [](const S& s) { return s.rho; });
    d["phase"] = column<double>(traj, [](const S& s) { return s.phase; });
    d["big_omega_sq"] = column<double>(traj, [](const S& s) { return s.big_omega_sq; });
    d["wronskian_drift"] =
        column<double>(traj, [](const S& s) { return std::abs(wronskian(s) + cplx{0.0, 2.0}); });
    d["max_wronskian_drift"] = traj.stats.max_wronskian_drift;
    d["max_ermakov_residual"] = traj.stats.max_ermakov_residual;
    return d;
}

}  // namespace

PYBIND11_MODULE(nonstatq, m) {
    m.doc() = "Quantized field modes in time-varying lossy media";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Constants>(m, "Constants")
        .def(py::init<>())
        .def_readwrite("hbar", &Constants::hbar)
        .def_readwrite("eps0", &Constants::eps0)
        .def_readwrite("c", &Constants::c);

    py::class_<ModeSpec>(m, "ModeSpec")
        .def(py::init<>())
        .def_readwrite("omega0", &ModeSpec::omega0)
        .def_readwrite("volume", &ModeSpec::volume);

    py::class_<EnvelopeSample>(m, "EnvelopeSample")
        .def_readonly("t", &EnvelopeSample::t)
        .def_readonly("eps", &EnvelopeSample::eps)
        .def_readonly("deps", &EnvelopeSample::deps)
        .def_readonly("lambda_", &EnvelopeSample::lambda)
        .def_readonly("gamma", &EnvelopeSample::gamma_val)
        .def_readonly("omega_sq", &EnvelopeSample::omega_sq)
        .def_readonly("big_omega_sq", &EnvelopeSample::big_omega_sq)
        .def_readonly("rho", &EnvelopeSample::rho)
        .def_readonly("drho", &EnvelopeSample::drho)
        .def_readonly("phase", &EnvelopeSample::phase);

    m.def("glauber_initial_conditions", [](double big_omega0) {
        const auto ic = glauber_initial_conditions(big_omega0);
        return py::make_tuple(ic.eps, ic.deps);
    });
    m.def("stationary_envelope", &stationary_envelope, py::arg("big_omega_sq"), py::arg("t"));
    m.def("hyperbolic_decay_envelope", &hyperbolic_decay_envelope, py::arg("omega0"), py::arg("t"));
    m.def("wronskian", py::overload_cast<const EnvelopeSample&>(&wronskian));
    m.def("ermakov_residual", py::overload_cast<const EnvelopeSample&>(&ermakov_residual));

    py::class_<InvariantCoefficients>(m, "InvariantCoefficients")
        .def_readonly("nu", &InvariantCoefficients::nu)
        .def_readonly("mu", &InvariantCoefficients::mu)
        .def_readonly("u", &InvariantCoefficients::u_tilde)
        .def_readonly("v", &InvariantCoefficients::v_tilde);
    m.def("invariant_coefficients", &invariant_coefficients, py::arg("sample"), py::arg("consts") = Constants{},
          py::arg("reference_frequency") = 1.0, py::arg("wronskian_tol") = 1e-6);

    py::class_<MomentRecord>(m, "MomentRecord")
        .def_readonly("mean_q", &MomentRecord::mean_q)
        .def_readonly("mean_p", &MomentRecord::mean_p)
        .def_readonly("var_q", &MomentRecord::var_q)
        .def_readonly("var_p", &MomentRecord::var_p)
        .def_readonly("cov_qp", &MomentRecord::cov_qp);
    m.def("quadrature_moments", &quadrature_moments, py::arg("sample"), py::arg("consts") = Constants{},
          py::arg("alpha") = cplx{});
    m.def("rs_residual", &rs_residual);

    py::class_<PhotonStatistics>(m, "PhotonStatistics")
        .def_readonly("mean_n", &PhotonStatistics::mean_n)
        .def_readonly("variance_n", &PhotonStatistics::variance_n)
        .def_readonly("mandel_q", &PhotonStatistics::mandel_q);
    m.def("photon_statistics", &photon_statistics, py::arg("coefficients"), py::arg("alpha"));

    py::class_<FieldMoments>(m, "FieldMoments")
        .def_readonly("mean_E", &FieldMoments::mean_E)
        .def_readonly("mean_B", &FieldMoments::mean_B)
        .def_readonly("var_E", &FieldMoments::var_E)
        .def_readonly("var_B", &FieldMoments::var_B)
        .def_readonly("cov_EB", &FieldMoments::cov_EB)
        .def_readonly("comm_EB", &FieldMoments::comm_EB)
        .def_readonly("cov_EB_canonical", &FieldMoments::cov_EB_canonical)
        .def_readonly("comm_EB_canonical", &FieldMoments::comm_EB_canonical)
        .def_readonly("rs_residual_field", &FieldMoments::rs_residual_field);
    m.def("field_moments", &field_moments, py::arg("sample"), py::arg("mode") = ModeSpec{},
          py::arg("consts") = Constants{}, py::arg("alpha") = cplx{}, py::arg("x") = 0.0,
          py::arg("half_lambda") = false);

    m.def("psi", [](double q, const EnvelopeSample& s, const Constants& k, cplx alpha) {
        return psi_coherent(q, s, k, alpha);
    }, py::arg("q"), py::arg("sample"), py::arg("consts") = Constants{}, py::arg("alpha") = cplx{});
    m.def("psi_fock", &psi_fock, py::arg("q"), py::arg("n"), py::arg("sample"), py::arg("consts") = Constants{});

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("t_start", &ScenarioConfig::t_start)
        .def_readwrite("t_end", &ScenarioConfig::t_end)
        .def_readwrite("n_points", &ScenarioConfig::n_points)
        .def_readwrite("ode_abs", &ScenarioConfig::ode_abs)
        .def_readwrite("ode_rel", &ScenarioConfig::ode_rel)
        .def("validate", &ScenarioConfig::validate);
    m.def("parse_scenario", [](const std::filesystem::path& p) { return parse_scenario(p); });
    m.def("parse_scenario_string", [](const std::string& text) { return parse_scenario_string(text); });
    m.def("builtin_scenarios", &builtin_scenarios);
    m.def("exact_sample", &exact_sample, py::arg("config"), py::arg("t"));

    m.def("integrate", [](const ScenarioConfig& cfg) { return trajectory_arrays(integrate_scenario(cfg)); },
          py::arg("config"), "Envelope trajectory of a scenario as NumPy arrays.");

    m.def("check", [](const ScenarioConfig& cfg) {
        const auto report = check_scenario(cfg);
        py::list rows;
        for (const auto& r : report.rows) {
            rows.append(py::dict(py::arg("invariant") = r.invariant, py::arg("measured") = r.measured,
                                 py::arg("threshold") = r.threshold, py::arg("passed") = r.passed));
        }
        return rows;
    }, py::arg("config"));

    m.def("run", [](const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
        const auto sum = run_scenario(cfg, out_dir);
        py::dict d;
        d["passed"] = sum.passed();
        d["failures"] = sum.failures;
        d["max_wronskian_drift"] = sum.max_wronskian_drift;
        d["max_rs_residual_qp"] = sum.max_rs_residual_qp;
        d["max_rs_residual_field"] = sum.max_rs_residual_field;
        d["checksums"] = sum.checksums;
        return d;
    }, py::arg("config"), py::arg("out_dir"));
}
