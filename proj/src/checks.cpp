#include "nonstatq/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <array>
#include <sstream>

#include "nonstatq/errors.hpp"
#include "nonstatq/field.hpp"
#include "nonstatq/quadratures.hpp"
#include "nonstatq/wavefunction.hpp"

namespace nonstatq {

namespace {

class Battery {
public:
    Battery(std::string scenario, const CheckOptions& options)
        : scenario_(std::move(scenario)), override_(options.tol_override) {}

    void at_most(const std::string& name, double measured, double threshold) {
        add(name, measured, override_.value_or(threshold), CheckRow::Compare::at_most);
    }

    void at_least(const std::string& name, double measured, double threshold) {
        add(name, measured, threshold, CheckRow::Compare::at_least);
    }

    CheckReport report() { return std::move(report_); }

private:
    void add(const std::string& name, double measured, double threshold, CheckRow::Compare cmp) {
        CheckRow row;
        row.scenario = scenario_;
        row.invariant = name;
        row.measured = measured;
        row.threshold = threshold;
        row.compare = cmp;
        // NaN never passes.
        row.passed = cmp == CheckRow::Compare::at_most ? measured <= threshold : measured >= threshold;
        report_.rows.push_back(row);
    }

    std::string scenario_;
    std::optional<double> override_;
    CheckReport report_;
};

bool is_constant(const ProfileSpec& p) { return p.kind == ProfileKind::constant; }

/// Largest |phi(t_i) - phi(t_0) - int rho^-2| with the integral accumulated by
/// the quintic Hermite rule on each interval.
double phase_law_defect(const EnvelopeTrajectory& traj) {
    auto jet = [](const EnvelopeSample& s) {
        const double r2 = s.rho * s.rho;
        const double f = 1.0 / r2;
        const double f1 = -2.0 * s.drho / (r2 * s.rho);
        const double rdd = reconstructed_rho_ddot(s, s.big_omega_sq);
        const double f2 = 6.0 * s.drho * s.drho / (r2 * r2) - 2.0 * rdd / (r2 * s.rho);
        return std::array<double, 3>{f, f1, f2};
    };
    double acc = 0.0;
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const auto& a = traj[i - 1];
        const auto& b = traj[i];
        const double h = b.t - a.t;
        const auto fa = jet(a);
        const auto fb = jet(b);
        acc += 0.5 * h * (fa[0] + fb[0]) + h * h / 10.0 * (fa[1] - fb[1]) +
               h * h * h / 120.0 * (fa[2] + fb[2]);
        worst = std::max(worst, std::abs(b.phase - traj[0].phase - acc));
    }
    return worst;
}

/// Largest |residual| over the points of `coarse` that are at least two
/// samples away from either end, looked up in `traj`.
double choi_yeon_interior_max(const EnvelopeTrajectory& traj, const std::vector<double>& coarse,
                              double M0) {
    const auto params = choi_yeon_params(traj, M0);
    double m = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 2; i + 2 < coarse.size(); ++i) {
        while (j < params.size() && params[j].t < coarse[i] - 1e-12 * std::max(1.0, std::abs(coarse[i]))) ++j;
        if (j == params.size()) break;
        m = std::max({m, std::abs(params[j].residual_gamma), std::abs(params[j].residual_M)});
    }
    return m;
}

}  // namespace

bool CheckReport::passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.passed; }));
}

void CheckReport::append(const CheckReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::string CheckReport::format_table() const {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %-26s %14s %4s %10s  %s\n", "scenario", "invariant",
                  "measured", "", "threshold", "result");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-24s %-26s %14.6e %4s %10.3e  %s\n", r.scenario.c_str(),
                      r.invariant.c_str(), r.measured,
                      r.compare == CheckRow::Compare::at_most ? "<=" : ">=", r.threshold,
                      r.passed ? "PASS" : "FAIL");
        out << line;
    }
    out << rows.size() - failures() << "/" << rows.size() << " checks passed\n";
    return out.str();
}

CheckReport check_scenario(const ScenarioConfig& cfg, const CheckOptions& options) {
    cfg.validate();
    Battery b(cfg.name, options);
    const auto& k = cfg.constants;
    const auto profile = cfg.medium();
    const auto ic = resolve_initial_conditions(cfg);
    const auto grid = cfg.grid();
    const auto traj = integrate_envelope(profile, cfg.mode, k, ic, grid, cfg.integrator_options());
    const double w_ref = resolved_reference_frequency(cfg);
    const cplx alpha = cfg.state.alpha;

    b.at_most("wronskian_drift", traj.stats.max_wronskian_drift, 1e-7);
    b.at_most("ermakov_residual", traj.stats.max_ermakov_residual, 1e-6);
    b.at_most("phase_law", phase_law_defect(traj), 1e-6);

    double bogo = 0.0, comm = 0.0, rs_qp = 0.0, rs_field = 0.0, cross = 0.0, floor = 0.0;
    double fock_vs_coherent = 0.0;
    for (const auto& s : traj.samples) {
        const auto c = invariant_coefficients(s, k, w_ref, 1e-3);
        bogo = std::max(bogo, std::abs(bogoliubov_defect(c)));
        comm = std::max(comm, std::abs(commutator_defect(c)) / k.hbar);
        const auto m = quadrature_moments(s, k, alpha);
        rs_qp = std::max(rs_qp, std::abs(rs_residual(m)) / std::max(1.0, m.var_q * m.var_p));
        const auto fm = field_second_moments(s, cfg.mode, k);
        rs_field = std::max(rs_field, std::abs(field_rs_residual(fm)) / std::max(1.0, fm.var_E * fm.var_B));
        const auto path = field_variances_from_quadratures(m, s.lambda, cfg.mode, k);
        cross = std::max({cross, std::abs(path.var_E - fm.var_E) / fm.var_E,
                          std::abs(path.var_B - fm.var_B) / fm.var_B});
        const auto sq = squeeze_report(c);
        floor = std::max(floor, 0.25 - sq.delta_q2 * sq.delta_p2);
        const double w_fock = mean_energy_fock(s, profile, k, 0).W_oracle;
        const double w_coh = mean_energy_coherent(s, profile, k, cplx{}).W_oracle;
        fock_vs_coherent = std::max(fock_vs_coherent, std::abs(w_fock - w_coh) / std::abs(w_coh));
    }
    b.at_most("bogoliubov", bogo, 1e-7);
    b.at_most("commutator", comm, 1e-7);
    b.at_most("rs_quadratures", rs_qp, 1e-10);
    b.at_most("rs_field", rs_field, 1e-10);
    b.at_most("field_cross_path", cross, 1e-8);
    b.at_most("squeeze_floor", floor, 1e-7);
    b.at_most("energy_fock_vs_coherent", fock_vs_coherent, 1e-12);

    {
        // Exact samples when a closed form exists, so the residual measures the
        // finite-difference mapping alone.
        auto sampled = [&](const std::vector<double>& pts) {
            if (!cfg.exact) return integrate_envelope(profile, cfg.mode, k, ic, pts, cfg.integrator_options());
            std::vector<EnvelopeSample> v;
            for (double t : pts) v.push_back(exact_sample(cfg, t));
            return make_trajectory(std::move(v));
        };
        const auto coarse_grid = grid;
        const auto fine_grid = linspace(cfg.t_start, cfg.t_end, 2 * cfg.n_points - 1);
        const double coarse = choi_yeon_interior_max(sampled(coarse_grid), coarse_grid, cfg.choi_yeon_M0);
        if (coarse <= 1e-10) {
            b.at_most("choi_yeon_residual", coarse, 1e-10);
        } else {
            const double fine = choi_yeon_interior_max(sampled(fine_grid), coarse_grid, cfg.choi_yeon_M0);
            b.at_least("choi_yeon_order", std::log2(coarse / fine), 1.9);
        }
    }

    if (cfg.exact) {
        const double horizon = std::min(cfg.t_end, cfg.t_start + 10.0);
        double worst = 0.0;
        for (const auto& s : traj.samples) {
            if (s.t > horizon) break;
            const auto ex = exact_sample(cfg, s.t);
            worst = std::max(worst, std::abs(s.eps - ex.eps) / std::abs(ex.eps));
        }
        b.at_most("exact_match", worst, *cfg.exact == ExactCase::stationary ? 1e-8 : 1e-6);
    }

    const auto& first = traj[0];
    if (cfg.ic_policy == IcPolicy::glauber && !cfg.reference_frequency && std::abs(first.lambda) == 0.0) {
        const auto c = invariant_coefficients(first, k, w_ref);
        const cplx expected{0.0, first.gamma_val / (4.0 * std::sqrt(first.big_omega_sq))};
        b.at_most("glauber_initial", std::abs(c.v_tilde - expected), 1e-9);
        if (first.gamma_val == 0.0 && cfg.state.kind == QuantumState::Kind::coherent && alpha != cplx{}) {
            const auto st = photon_statistics(c, alpha);
            b.at_most("mandel_q_initial", std::abs(st.mandel_q.value_or(NAN)), 1e-8);
        }
    }

    if (is_constant(cfg.permittivity) && is_constant(cfg.permeability) && is_constant(cfg.conductivity)) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& s : traj.samples) {
            const double v = mean_energy_coherent(s, profile, k, cplx{}).W_oracle * std::exp(s.lambda);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        b.at_most("energy_damping_ratio", (hi - lo) / std::abs(hi), 1e-6);
    }

    const auto& last = traj[traj.size() - 1];
    const auto pm = position_moments(last, k, cfg.state);
    b.at_most("normalization", std::abs(pm.norm - 1.0), 1e-6);
    if (cfg.state.kind == QuantumState::Kind::coherent) {
        const auto m = quadrature_moments(last, k, alpha);
        const double second = m.var_q + m.mean_q * m.mean_q;
        b.at_most("wavefunction_moments",
                  std::max(std::abs(pm.mean_q - m.mean_q) / std::max(1.0, std::abs(m.mean_q)),
                           std::abs(pm.mean_q2 - second) / second),
                  1e-5);
        const auto c = invariant_coefficients(last, k, w_ref, 1e-3);
        WaveGridOptions opt;
        opt.spacing = std::sqrt(m.var_q) / 70.0;
        const auto g = make_wave_grid(last, k, cfg.state, opt);
        b.at_most("eigen_residual", eigen_residual(g, c, alpha), 1e-6);
    }

    {
        const double tm = 0.5 * (cfg.t_start + cfg.t_end);
        const auto st = medium_state(profile, cfg.mode, k, tm);
        double h = st.big_omega_sq > 0.0 ? 0.1 / std::sqrt(st.big_omega_sq) : 0.1;
        h = std::min(h, 0.2 * (cfg.t_end - cfg.t_start));
        const std::vector<double> pts{cfg.t_start, tm - h, tm - 0.5 * h, tm, tm + 0.5 * h, tm + h};
        const auto local = integrate_envelope(profile, cfg.mode, k, ic, pts, cfg.integrator_options());
        const double r1 = schrodinger_residual(local, k, cfg.state, tm, h);
        const double r2 = schrodinger_residual(local, k, cfg.state, tm, 0.5 * h);
        b.at_least("schrodinger_order", std::log2(r1 / r2), 1.9);
    }
    return b.report();
}

CheckReport check_suite(const std::vector<ScenarioConfig>& scenarios, const CheckOptions& options) {
    CheckReport all;
    for (const auto& cfg : scenarios) all.append(check_scenario(cfg, options));
    return all;
}

}  // namespace nonstatq
