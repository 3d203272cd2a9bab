#include "nonstatq/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "nonstatq/errors.hpp"
#include "nonstatq/wavefunction.hpp"

namespace nonstatq {

namespace {

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) text_ += ',';
            text_ += header[i];
        }
        text_ += "\r\n";
    }

    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += format_number(cells[i]);
        }
        text_ += "\r\n";
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << bytes;
    if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json profile_json(const ProfileSpec& p) {
    nlohmann::json j;
    j["kind"] = to_string(p.kind);
    for (const auto& [k, v] : p.params) j[k] = v;
    if (p.kind == ProfileKind::tabulated) {
        j["times"] = p.times;
        j["values"] = p.values;
    }
    return j;
}

nlohmann::json config_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["constants"] = {{"hbar", c.constants.hbar}, {"eps0", c.constants.eps0}, {"c", c.constants.c}};
    j["medium"] = {{"epsilon", profile_json(c.permittivity)},
                   {"mu", profile_json(c.permeability)},
                   {"sigma", profile_json(c.conductivity)}};
    j["mode"] = {{"omega0", c.mode.omega0}, {"volume", c.mode.volume}, {"polarization", c.mode.polarization}};
    if (c.state.kind == QuantumState::Kind::coherent) {
        j["state"] = {{"kind", "coherent"}, {"alpha", {c.state.alpha.real(), c.state.alpha.imag()}}};
    } else {
        j["state"] = {{"kind", "fock"}, {"n", c.state.n}};
    }
    j["initial_conditions"] = {{"policy", to_string(c.ic_policy)}};
    if (c.ic_policy == IcPolicy::explicit_values) {
        j["initial_conditions"]["eps"] = {c.explicit_ic.eps.real(), c.explicit_ic.eps.imag()};
        j["initial_conditions"]["deps"] = {c.explicit_ic.deps.real(), c.explicit_ic.deps.imag()};
    }
    j["time"] = {{"t_start", c.t_start}, {"t_end", c.t_end}, {"n_points", c.n_points}};
    j["tolerances"] = {{"ode_abs", c.ode_abs}, {"ode_rel", c.ode_rel}, {"check", c.check_tol},
                       {"renormalize_wronskian", c.renormalize_wronskian}};
    std::vector<std::string> sel;
    for (auto o : c.outputs) sel.emplace_back(to_string(o));
    j["outputs"] = {{"select", sel}, {"field_x", c.field_x}, {"wavefunction_times", c.wavefunction_times},
                    {"choi_yeon_M0", c.choi_yeon_M0}};
    if (c.exact) j["outputs"]["exact"] = to_string(*c.exact);
    if (c.reference_frequency) j["outputs"]["reference_frequency"] = *c.reference_frequency;
    j["conventions"] = {{"include_eps_dot_in_gamma", c.conventions.include_eps_dot_in_gamma},
                        {"e_mean_half_lambda", c.conventions.e_mean_half_lambda}};
    return j;
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    const auto started = std::chrono::steady_clock::now();
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    RunSummary sum;
    sum.scenario = cfg.name;
    const auto& k = cfg.constants;
    const auto profile = cfg.medium();
    const auto ic = resolve_initial_conditions(cfg);
    const double w_ref = resolved_reference_frequency(cfg);
    const cplx alpha = cfg.state.alpha;
    const bool coherent = cfg.state.kind == QuantumState::Kind::coherent;

    spdlog::info("[{}] integrating {} points on [{}, {}]", cfg.name, cfg.n_points, cfg.t_start, cfg.t_end);
    const auto traj = integrate_envelope(profile, cfg.mode, k, ic, cfg.grid(), cfg.integrator_options());
    spdlog::debug("[{}] {} accepted / {} rejected steps", cfg.name, traj.stats.accepted_steps,
                  traj.stats.rejected_steps);

    auto emit = [&](const std::string& file, const std::string& text) {
        write_file(out_dir / file, text);
        sum.checksums[file] = sha256_hex(text);
        spdlog::info("[{}] wrote {}", cfg.name, file);
    };

    // Envelope.
    Csv env({"t", "re_eps", "im_eps", "re_deps", "im_deps", "rho", "phi", "Lambda", "wronskian_drift",
             "ermakov_residual", "exact_error"});
    for (const auto& s : traj.samples) {
        const double drift = std::abs(wronskian(s) - cplx{0.0, -2.0});
        const double erm = std::abs(ermakov_residual(s));
        double exact_err = NAN;
        if (cfg.exact) {
            exact_err = std::abs(s.eps - exact_sample(cfg, s.t).eps);
            sum.max_exact_error = std::max(sum.max_exact_error.value_or(0.0), exact_err);
        }
        sum.max_wronskian_drift = std::max(sum.max_wronskian_drift, drift);
        sum.max_ermakov_residual = std::max(sum.max_ermakov_residual, erm);
        env.row({s.t, s.eps.real(), s.eps.imag(), s.deps.real(), s.deps.imag(), s.rho, s.phase, s.lambda,
                 drift, erm, exact_err});
    }
    if (cfg.outputs.count(Output::envelope)) emit("envelope.csv", env.text());

    // Quadratures.
    Csv quad({"t", "mean_q", "mean_p", "var_q", "var_p", "cov_qp", "rs_residual", "abs_u", "abs_v",
              "delta_Q2", "delta_P2", "mean_n", "mandel_q", "gamma", "M"});
    const auto& s0 = traj[0];
    for (const auto& s : traj.samples) {
        const auto c = invariant_coefficients(s, k, w_ref, 1e-3);
        auto m = quadrature_moments(s, k, alpha);
        double rs = rs_residual(m);
        if (!coherent) {
            // Fock state: zero means, every second moment scaled by 2n + 1.
            const double level = 2.0 * cfg.state.n + 1.0;
            m.mean_q = m.mean_p = 0.0;
            m.var_q *= level;
            m.var_p *= level;
            m.cov_qp *= level;
            rs = m.var_q * m.var_p - m.cov_qp * m.cov_qp - level * level * m.rs_rhs;
        }
        sum.max_rs_residual_qp = std::max(sum.max_rs_residual_qp, std::abs(rs));
        sum.max_bogoliubov_defect = std::max(sum.max_bogoliubov_defect, std::abs(bogoliubov_defect(c)));
        const auto sq = squeeze_report(c);
        PhotonStatistics ph{NAN, NAN, std::nullopt};
        if (coherent) ph = photon_statistics(c, alpha);
        const double M = cfg.choi_yeon_M0 * (s.rho / s0.rho) * std::exp(-0.5 * (s.lambda - s0.lambda));
        quad.row({s.t, m.mean_q, m.mean_p, m.var_q, m.var_p, m.cov_qp, rs, std::abs(c.u_tilde),
                  std::abs(c.v_tilde), sq.delta_q2, sq.delta_p2, ph.mean_n, ph.mandel_q.value_or(NAN),
                  s.phase, M});
    }
    if (cfg.outputs.count(Output::quadratures)) emit("quadratures.csv", quad.text());

    // Field and energy.
    const std::string w_printed_name = coherent ? "W_coherent_printed" : "W_fock_printed";
    Csv field({"t", "x", "mean_E", "mean_B", "var_E", "var_B", "cov_EB", "comm_EB", "rs_residual_field",
               w_printed_name, "W_oracle", "discrepancy", "cov_EB_canonical", "comm_EB_canonical",
               "rs_residual_field_printed"});
    Csv energy({"t", "re_a_tilde", "im_a_tilde", "c_tilde", w_printed_name, "W_oracle", "discrepancy"});
    double disc_sum = 0.0;
    bool first_disc = true;
    for (const auto& s : traj.samples) {
        const auto e = coherent ? mean_energy_coherent(s, profile, k, alpha)
                                : mean_energy_fock(s, profile, k, cfg.state.n);
        const double printed = coherent ? *e.W_coherent_printed : *e.W_fock_printed;
        if (first_disc) {
            sum.energy_discrepancy.min = sum.energy_discrepancy.max = e.discrepancy;
            first_disc = false;
        }
        sum.energy_discrepancy.min = std::min(sum.energy_discrepancy.min, e.discrepancy);
        sum.energy_discrepancy.max = std::max(sum.energy_discrepancy.max, e.discrepancy);
        disc_sum += std::abs(e.discrepancy);
        energy.row({s.t, e.a_tilde.real(), e.a_tilde.imag(), e.c_tilde, printed, e.W_oracle, e.discrepancy});

        for (double x : cfg.field_x) {
            // Mean fields vanish in Fock states.
            const auto fm = field_moments(s, cfg.mode, k, coherent ? alpha : cplx{}, x,
                                          cfg.conventions.e_mean_half_lambda);
            sum.max_rs_residual_field = std::max(sum.max_rs_residual_field, std::abs(fm.rs_residual_field));
            field.row({s.t, x, fm.mean_E, fm.mean_B, fm.var_E, fm.var_B, fm.cov_EB, fm.comm_EB,
                       fm.rs_residual_field, printed, e.W_oracle, e.discrepancy, fm.cov_EB_canonical,
                       fm.comm_EB_canonical, field_rs_residual_printed(fm)});
        }
    }
    sum.energy_discrepancy.mean_abs = disc_sum / static_cast<double>(traj.size());
    if (cfg.outputs.count(Output::field)) emit("field.csv", field.text());
    if (cfg.outputs.count(Output::energy)) emit("energy.csv", energy.text());

    if (cfg.outputs.count(Output::choi_yeon)) {
        Csv cy({"t", "gamma", "M", "residual_gamma", "residual_M"});
        for (const auto& p : choi_yeon_params(traj, cfg.choi_yeon_M0)) {
            cy.row({p.t, p.gamma_t, p.M_t, p.residual_gamma, p.residual_M});
        }
        emit("choi_yeon.csv", cy.text());
    }

    if (cfg.outputs.count(Output::wavefunction) && !cfg.wavefunction_times.empty()) {
        std::vector<double> times = cfg.wavefunction_times;
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        std::vector<double> pts{cfg.t_start};
        for (double t : times) {
            if (t > cfg.t_start) pts.push_back(t);
        }
        const auto snap = pts.size() > 1
                              ? integrate_envelope(profile, cfg.mode, k, ic, pts, cfg.integrator_options())
                              : make_trajectory({traj[0]});
        Csv wf({"t", "q", "re_psi", "im_psi", "abs2"});
        for (double t : times) {
            const auto& s = snap.at_time(t);
            const auto g = make_wave_grid(s, k, cfg.state);
            for (std::size_t i = 0; i < g.q_points.size(); ++i) {
                wf.row({t, g.q_points[i], g.values[i].real(), g.values[i].imag(), std::norm(g.values[i])});
            }
            const double defect = std::abs(position_moments(s, k, cfg.state).norm - 1.0);
            sum.max_normalization_defect = std::max(sum.max_normalization_defect.value_or(0.0), defect);
        }
        emit("wavefunction.csv", wf.text());
    }

    if (cfg.outputs.count(Output::checks)) {
        sum.checks = check_scenario(cfg);
        std::string text = "scenario,invariant,measured,threshold,compare,passed\r\n";
        for (const auto& r : sum.checks->rows) {
            text += r.scenario + "," + r.invariant + "," + format_number(r.measured) + "," +
                    format_number(r.threshold) + "," +
                    (r.compare == CheckRow::Compare::at_most ? "at_most" : "at_least") + "," +
                    (r.passed ? "true" : "false") + "\r\n";
        }
        emit("checks.csv", text);
        for (const auto& r : sum.checks->rows) {
            if (!r.passed) sum.failures.push_back("check " + r.invariant);
        }
    }

    auto limit = [&](const char* name, double v) {
        if (!(v <= cfg.check_tol)) sum.failures.push_back(std::string(name) + " = " + format_number(v));
    };
    limit("max_wronskian_drift", sum.max_wronskian_drift);
    limit("max_ermakov_residual", sum.max_ermakov_residual);
    limit("max_rs_residual_qp", sum.max_rs_residual_qp);
    limit("max_rs_residual_field", sum.max_rs_residual_field);
    if (sum.max_exact_error) limit("max_exact_error", *sum.max_exact_error);
    if (sum.max_normalization_defect) limit("max_normalization_defect", *sum.max_normalization_defect);

    sum.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    nlohmann::json j;
    j["scenario"] = sum.scenario;
    j["passed"] = sum.passed();
    j["failures"] = sum.failures;
    j["check_tol"] = cfg.check_tol;
    j["max_wronskian_drift"] = sum.max_wronskian_drift;
    j["max_ermakov_residual"] = sum.max_ermakov_residual;
    j["max_rs_residual_qp"] = sum.max_rs_residual_qp;
    j["max_rs_residual_field"] = sum.max_rs_residual_field;
    j["max_bogoliubov_defect"] = sum.max_bogoliubov_defect;
    j["max_exact_error"] = optional_json(sum.max_exact_error);
    j["max_normalization_defect"] = optional_json(sum.max_normalization_defect);
    j["energy_discrepancy"] = {{"min", sum.energy_discrepancy.min},
                               {"max", sum.energy_discrepancy.max},
                               {"mean_abs", sum.energy_discrepancy.mean_abs}};
    j["integration"] = {{"accepted_steps", traj.stats.accepted_steps},
                        {"rejected_steps", traj.stats.rejected_steps},
                        {"renormalizations", traj.stats.renormalizations},
                        {"smallest_step", traj.stats.smallest_step},
                        {"largest_step", traj.stats.largest_step},
                        {"inverted_regime", traj.stats.inverted_regime}};
    if (sum.checks) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : sum.checks->rows) {
            rows.push_back({{"invariant", r.invariant}, {"measured", r.measured}, {"threshold", r.threshold},
                            {"compare", r.compare == CheckRow::Compare::at_most ? "at_most" : "at_least"},
                            {"passed", r.passed}});
        }
        j["checks"] = rows;
    }
    j["wall_time_seconds"] = sum.wall_time_seconds;
    j["config"] = config_json(cfg);
    j["checksums"] = sum.checksums;
    write_file(out_dir / "summary.json", j.dump(2) + "\n");
    spdlog::info("[{}] {} in {:.3f} s", cfg.name, sum.passed() ? "passed" : "FAILED", sum.wall_time_seconds);
    return sum;
}

}  // namespace nonstatq
