#include "nonstatq/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "nonstatq/dopri5.hpp"
#include "nonstatq/errors.hpp"
#include "nonstatq/finite_difference.hpp"

namespace nonstatq {

namespace {

constexpr cplx kTargetWronskian{0.0, -2.0};

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Phase rate Im(conj(eps) eps') / |eps|^2, equal to 1/rho^2 when w = -2i.
double phase_rate(cplx eps, cplx deps) { return std::imag(std::conj(eps) * deps) / std::norm(eps); }

}  // namespace

EnvelopeSample make_sample(double t, cplx eps, cplx deps, double phase, const MediumState& medium,
                           double lambda) {
    EnvelopeSample s;
    s.t = t;
    s.eps = eps;
    s.deps = deps;
    s.phase = phase;
    s.lambda = lambda;
    s.gamma_val = medium.gamma;
    s.gamma_rate = medium.gamma_rate;
    s.omega_sq = medium.omega_sq;
    s.big_omega_sq = medium.big_omega_sq;
    s.rho = std::abs(eps);
    s.drho = std::real(deps * std::conj(eps)) / s.rho;
    return s;
}

EnvelopeSample attach_medium(EnvelopeSample sample, const MediumProfile& profile,
                             const ModeSpec& mode, const Constants& consts) {
    const MediumState m = medium_state(profile, mode, consts, sample.t);
    sample.lambda = lambda_increment(profile, 0.0, sample.t);
    sample.gamma_val = m.gamma;
    sample.gamma_rate = m.gamma_rate;
    sample.omega_sq = m.omega_sq;
    sample.big_omega_sq = m.big_omega_sq;
    return sample;
}

InitialConditions glauber_initial_conditions(double big_omega0) {
    if (!(big_omega0 > 0.0)) {
        throw DomainError("Glauber initial conditions need Omega(0) > 0, got " + num(big_omega0));
    }
    const double r = std::sqrt(big_omega0);
    return {cplx{1.0 / r, 0.0}, cplx{0.0, r}};
}

cplx wronskian(cplx eps, cplx deps) { return eps * std::conj(deps) - std::conj(eps) * deps; }

cplx wronskian(const EnvelopeSample& s) { return wronskian(s.eps, s.deps); }

double reconstructed_rho_ddot(const EnvelopeSample& s, double big_omega_sq) {
    return (std::norm(s.deps) - s.drho * s.drho) / s.rho - big_omega_sq * s.rho;
}

double ermakov_residual(double rho, double rho_ddot, double big_omega_sq) {
    return rho_ddot + big_omega_sq * rho - 1.0 / (rho * rho * rho);
}

double ermakov_residual(const EnvelopeSample& s, double big_omega_sq) {
    return ermakov_residual(s.rho, reconstructed_rho_ddot(s, big_omega_sq), big_omega_sq);
}

double ermakov_residual(const EnvelopeSample& s) { return ermakov_residual(s, s.big_omega_sq); }

EnvelopeSample stationary_envelope(double big_omega_sq, double t) {
    if (!(big_omega_sq > 0.0)) {
        throw DomainError("stationary envelope needs Omega^2 > 0, got " + num(big_omega_sq));
    }
    const double w = std::sqrt(big_omega_sq);
    const cplx rot = std::polar(1.0, w * t);
    MediumState m;
    m.t = t;
    m.omega_sq = big_omega_sq;
    m.big_omega_sq = big_omega_sq;
    return make_sample(t, rot / std::sqrt(w), cplx{0.0, std::sqrt(w)} * rot, w * t, m, 0.0);
}

EnvelopeSample hyperbolic_decay_envelope(double omega0, double t) {
    if (!(omega0 > 0.0)) throw DomainError("hyperbolic decay needs omega0 > 0");
    const double tau = t + 1.0 / omega0;
    if (!(tau > 0.0)) {
        throw DomainError("hyperbolic decay envelope needs tau = t + 1/omega0 > 0, got " + num(tau));
    }
    const double s0 = std::sqrt(3.0) / 2.0;
    const double phase = s0 * std::log(tau * omega0);
    const cplx eps = std::polar(std::sqrt(tau / s0), phase);
    const cplx deps = cplx{0.5, s0} * eps / tau;
    MediumState m;
    m.t = t;
    m.omega_sq = 1.0 / (tau * tau);
    m.big_omega_sq = m.omega_sq;
    return make_sample(t, eps, deps, phase, m, 0.0);
}

const EnvelopeSample& EnvelopeTrajectory::at_time(double t) const {
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const EnvelopeSample& s, double v) { return s.t < v; });
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    for (auto cand : {it, it == samples.begin() ? it : std::prev(it)}) {
        if (cand != samples.end() && std::abs(cand->t - t) <= tol) return *cand;
    }
    throw DomainError("trajectory has no sample at t=" + num(t));
}

namespace {

void record_sample(EnvelopeTrajectory& traj, const EnvelopeSample& s) {
    auto& st = traj.stats;
    st.max_wronskian_drift = std::max(st.max_wronskian_drift, std::abs(wronskian(s) - kTargetWronskian));
    st.max_ermakov_residual = std::max(st.max_ermakov_residual, std::abs(ermakov_residual(s)));
    st.inverted_regime = st.inverted_regime || s.big_omega_sq < 0.0;
    traj.samples.push_back(s);
}

}  // namespace

EnvelopeTrajectory make_trajectory(std::vector<EnvelopeSample> samples) {
    EnvelopeTrajectory traj;
    traj.samples.reserve(samples.size());
    for (const auto& s : samples) record_sample(traj, s);
    return traj;
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
    if (n < 2) return {t0};
    std::vector<double> out(n);
    const double h = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = t0 + h * static_cast<double>(i);
    out.back() = t1;
    return out;
}

EnvelopeTrajectory integrate_envelope(const MediumProfile& profile, const ModeSpec& mode,
                                      const Constants& consts, const InitialConditions& ic,
                                      std::span<const double> grid,
                                      const IntegratorOptions& options) {
    using ode::State;
    if (grid.empty()) throw DomainError("integrate_envelope: empty time grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("integrate_envelope: time grid must be strictly increasing");
        }
    }
    const auto [lo, hi] = profile.domain();
    if (grid.front() < lo || grid.back() > hi) {
        throw DomainError("integrate_envelope: grid [" + num(grid.front()) + ", " +
                          num(grid.back()) + "] leaves the medium domain");
    }
    const double ic_drift = std::abs(wronskian(ic.eps, ic.deps) - kTargetWronskian);
    if (ic_drift > options.ic_tol) {
        throw DomainError("initial conditions violate the Wronskian normalization: |w + 2i| = " +
                          num(ic_drift));
    }

    auto rhs = [&](double t, const State<5>& y) {
        const MediumState m = medium_state(profile, mode, consts, t);
        return State<5>{y[2], y[3], -m.big_omega_sq * y[0], -m.big_omega_sq * y[1], m.gamma};
    };

    EnvelopeTrajectory traj;
    traj.samples.reserve(grid.size());
    traj.stats.abs_tol = options.abs_tol;
    traj.stats.rel_tol = options.rel_tol;
    const ode::Tolerance tol{options.abs_tol, options.rel_tol};

    double t = grid.front();
    State<5> y{ic.eps.real(), ic.eps.imag(), ic.deps.real(), ic.deps.imag(),
               lambda_increment(profile, 0.0, t)};
    double phase = std::arg(ic.eps);

    auto eps_of = [](const State<5>& s) { return cplx{s[0], s[1]}; };
    auto deps_of = [](const State<5>& s) { return cplx{s[2], s[3]}; };
    auto store = [&] {
        record_sample(traj, make_sample(t, eps_of(y), deps_of(y), phase,
                                        medium_state(profile, mode, consts, t), y[4]));
    };
    store();
    if (grid.size() == 1) return traj;

    State<5> k1 = rhs(t, y);
    // Initial step from the size of the solution and its slope.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double sc = tol.abs + tol.rel * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / 5.0);
        d1 = std::sqrt(d1 / 5.0);
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, grid.back() - grid.front());
    }

    auto& st = traj.stats;
    st.smallest_step = HUGE_VAL;
    std::size_t steps = 0;
    for (std::size_t target_index = 1; target_index < grid.size(); ++target_index) {
        const double target = grid[target_index];
        while (t < target) {
            if (++steps > options.max_steps) {
                throw NumericalError("envelope integration exceeded " +
                                     std::to_string(options.max_steps) + " steps near t=" + num(t) +
                                     " (tolerance not met)");
            }
            if (options.max_step > 0.0) h = std::min(h, options.max_step);
            // Keep the phase advance per step below one radian so that the
            // wrapped increment of arg eps is unambiguous.
            const double rate0 = phase_rate(eps_of(y), deps_of(y));
            if (std::abs(rate0) * h > 1.0) h = 1.0 / std::abs(rate0);
            const double h_free = h;
            const bool lands = t + h >= target;
            if (lands) h = target - t;
            if (h < options.min_step && !lands) {
                throw NumericalError("envelope step size underflow (h=" + num(h) + ") at t=" +
                                     num(t));
            }

            const auto trial = ode::dopri5_step<5>(rhs, t, y, k1, h, tol);
            if (!(trial.error <= 1.0)) {
                ++st.rejected_steps;
                h *= std::min(1.0, ode::dopri5_step_factor(trial.error));
                continue;
            }
            const cplx eps1 = eps_of(trial.y);
            const double dphi = std::arg(eps1 * std::conj(eps_of(y)));
            const double predicted = 0.5 * h * (rate0 + phase_rate(eps1, deps_of(trial.y)));
            if (std::abs(dphi - predicted) > 0.5) {
                ++st.rejected_steps;
                h *= 0.5;
                continue;
            }

            ++st.accepted_steps;
            st.smallest_step = std::min(st.smallest_step, h);
            st.largest_step = std::max(st.largest_step, h);
            t = lands ? target : t + h;
            y = trial.y;
            k1 = trial.dydt;
            phase += dphi;

            if (options.renormalize_wronskian) {
                const cplx w = wronskian(eps_of(y), deps_of(y));
                if (std::abs(w - kTargetWronskian) > 100.0 * options.rel_tol) {
                    const double scale = std::sqrt(2.0 / std::abs(w));
                    for (std::size_t i = 0; i < 4; ++i) y[i] *= scale;
                    k1 = rhs(t, y);
                    ++st.renormalizations;
                }
            }
            const double next = h * ode::dopri5_step_factor(trial.error);
            h = lands ? std::max(next, h_free) : next;
        }
        store();
    }
    if (st.accepted_steps == 0) st.smallest_step = 0.0;
    return traj;
}

std::vector<DampedSample> damped_envelope_transform(const EnvelopeTrajectory& traj) {
    std::vector<DampedSample> out;
    out.reserve(traj.size());
    for (const auto& s : traj.samples) {
        const double damp = std::exp(-0.5 * s.lambda);
        out.push_back({s.t, s.eps * damp, (s.deps - 0.5 * s.gamma_val * s.eps) * damp});
    }
    return out;
}

std::vector<double> damped_equation_residual(const EnvelopeTrajectory& traj) {
    const auto damped = damped_envelope_transform(traj);
    const std::size_t n = damped.size();
    std::vector<double> t(n), re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = damped[i].t;
        re[i] = damped[i].value.real();
        im[i] = damped[i].value.imag();
    }
    const auto dre = fd::differentiate(t, re);
    const auto dim = fd::differentiate(t, im);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj[i];
        const cplx x2{dre.second[i], dim.second[i]};
        const cplx x1{dre.first[i], dim.first[i]};
        out[i] = std::abs(x2 + s.gamma_val * x1 + s.omega_sq * damped[i].value);
    }
    return out;
}

}  // namespace nonstatq
