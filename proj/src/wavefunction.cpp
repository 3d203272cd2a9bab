#include "nonstatq/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nonstatq/errors.hpp"

namespace nonstatq {

namespace {

constexpr double exponent_limit = 700.0;

double a_factor(const EnvelopeSample& s, const Constants& k) { return std::exp(-s.lambda) / k.eps0; }

/// log psi_0 = log_prefactor + quad * q^2
struct GroundForm {
    cplx log_prefactor;
    cplx quad;
};

GroundForm ground_form(const EnvelopeSample& s, const Constants& k) {
    const double ah = a_factor(s, k) * k.hbar;
    GroundForm g;
    g.log_prefactor = cplx{-0.5 * std::log(s.rho) - 0.25 * std::log(std::numbers::pi * ah),
                           -0.5 * s.phase};
    g.quad = cplx{0.0, 0.5 / ah} * (s.deps / s.eps - 0.5 * s.gamma_val);
    return g;
}

cplx checked_exp(cplx e, double q) {
    if (!(e.real() <= exponent_limit)) {
        throw DomainError("wavefunction exponent " + std::to_string(e.real()) + " at q=" +
                          std::to_string(q) + " exceeds " + std::to_string(exponent_limit));
    }
    return std::exp(e);
}

void check_fock(int n) {
    if (n < 0 || n > max_fock_number) {
        throw DomainError("Fock number " + std::to_string(n) + " outside [0, " +
                          std::to_string(max_fock_number) + "]");
    }
}

template <class F>
double integrate(F f, double lo, double hi, double tol) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, tol);
}

double integration_half_width(const PositionScale& s) { return 14.0 * s.sigma; }

std::vector<cplx> sample_values(const std::vector<double>& q, const EnvelopeSample& s,
                                const Constants& k, const QuantumState& state) {
    std::vector<cplx> v(q.size());
    std::transform(q.begin(), q.end(), v.begin(), [&](double x) { return psi(x, s, k, state); });
    return v;
}

cplx first_derivative(const std::vector<cplx>& f, std::size_t i, double h) {
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

cplx second_derivative(const std::vector<cplx>& f, std::size_t i, double h) {
    return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Largest |d arg psi / dq| within 5 sigma of the centre, plus the Hermite
/// oscillation scale for Fock states.
double max_local_wavenumber(const EnvelopeSample& s, const QuantumState& state,
                            const PositionScale& sc, double ah) {
    const cplx quad = cplx{0.0, 0.5 / ah} * (s.deps / s.eps - 0.5 * s.gamma_val);
    double linear = 0.0;
    double hermite = 0.0;
    if (state.kind == QuantumState::Kind::coherent) {
        linear = (std::sqrt(2.0 / ah) * state.alpha / s.eps).imag();
    } else {
        hermite = std::sqrt(2.0 * state.n + 1.0) / (s.rho * std::sqrt(ah));
    }
    double worst = 0.0;
    for (double q : {sc.center - 5.0 * sc.sigma, sc.center + 5.0 * sc.sigma}) {
        worst = std::max(worst, std::abs(2.0 * quad.imag() * q + linear));
    }
    return worst + hermite;
}

}  // namespace

double normalized_hermite(int n, double x) {
    check_fock(n);
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = std::numbers::sqrt2 * x;
    for (int k = 1; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx psi_ground(double q, const EnvelopeSample& sample, const Constants& consts) {
    const auto g = ground_form(sample, consts);
    return checked_exp(g.log_prefactor + g.quad * q * q, q);
}

cplx psi_coherent(double q, const EnvelopeSample& sample, const Constants& consts, cplx alpha) {
    const auto g = ground_form(sample, consts);
    const double ah = a_factor(sample, consts) * consts.hbar;
    const cplx linear = std::sqrt(2.0 / ah) * alpha / sample.eps;
    const cplx constant = -0.5 * std::conj(sample.eps) / sample.eps * alpha * alpha - 0.5 * std::norm(alpha);
    return checked_exp(g.log_prefactor + g.quad * q * q + linear * q + constant, q);
}

cplx psi_fock(double q, int n, const EnvelopeSample& sample, const Constants& consts) {
    check_fock(n);
    const double ah = a_factor(sample, consts) * consts.hbar;
    const double x = q / (sample.rho * std::sqrt(ah));
    const cplx rotation = std::polar(1.0, -n * sample.phase);
    return psi_ground(q, sample, consts) * rotation * normalized_hermite(n, x);
}

cplx psi(double q, const EnvelopeSample& sample, const Constants& consts,
         const QuantumState& state) {
    if (state.kind == QuantumState::Kind::coherent) {
        return psi_coherent(q, sample, consts, state.alpha);
    }
    return psi_fock(q, state.n, sample, consts);
}

PositionScale position_scale(const EnvelopeSample& sample, const Constants& consts,
                             const QuantumState& state) {
    const auto m = quadrature_moments(sample, consts, state.alpha);
    PositionScale s;
    if (state.kind == QuantumState::Kind::coherent) {
        s.center = m.mean_q;
        s.sigma = std::sqrt(m.var_q);
    } else {
        s.center = 0.0;
        s.sigma = std::sqrt((2.0 * state.n + 1.0) * m.var_q);
    }
    return s;
}

WaveGrid make_wave_grid(const EnvelopeSample& sample, const Constants& consts,
                        const QuantumState& state, const WaveGridOptions& options) {
    if (!(options.half_width_sigmas > 0.0)) throw DomainError("grid half width must be positive");
    WaveGrid g;
    g.t = sample.t;
    g.state = state;
    g.envelope = sample;
    g.scale = position_scale(sample, consts, state);
    const double half = options.half_width_sigmas * g.scale.sigma;

    if (options.spacing > 0.0) {
        const auto m = static_cast<long>(std::ceil(half / options.spacing));
        g.q_points.reserve(static_cast<std::size_t>(2 * m + 1));
        for (long j = -m; j <= m; ++j) g.q_points.push_back(g.scale.center + j * options.spacing);
    } else {
        if (options.n_points < 5) throw DomainError("wave grid needs at least 5 points");
        g.q_points = linspace(g.scale.center - half, g.scale.center + half, options.n_points);
    }
    if (g.q_points.size() < 5) throw DomainError("wave grid needs at least 5 points");
    g.values = sample_values(g.q_points, sample, consts, state);
    return g;
}

PositionMoments position_moments(const EnvelopeSample& sample, const Constants& consts,
                                 const QuantumState& state, double tol) {
    const auto sc = position_scale(sample, consts, state);
    const double lo = sc.center - integration_half_width(sc);
    const double hi = sc.center + integration_half_width(sc);
    auto density = [&](double q) { return std::norm(psi(q, sample, consts, state)); };

    PositionMoments m;
    m.norm = integrate(density, lo, hi, tol);
    m.mean_q = integrate([&](double q) { return q * density(q); }, lo, hi, tol);
    m.mean_q2 = integrate([&](double q) { return q * q * density(q); }, lo, hi, tol);
    return m;
}

cplx overlap(const EnvelopeSample& sample, const Constants& consts, const QuantumState& a,
             const QuantumState& b, double tol) {
    const auto sa = position_scale(sample, consts, a);
    const auto sb = position_scale(sample, consts, b);
    const double lo = std::min(sa.center - integration_half_width(sa),
                               sb.center - integration_half_width(sb));
    const double hi = std::max(sa.center + integration_half_width(sa),
                               sb.center + integration_half_width(sb));
    auto product = [&](double q) {
        return std::conj(psi(q, sample, consts, a)) * psi(q, sample, consts, b);
    };
    const double re = integrate([&](double q) { return product(q).real(); }, lo, hi, tol);
    const double im = integrate([&](double q) { return product(q).imag(); }, lo, hi, tol);
    return {re, im};
}

double eigen_residual(const WaveGrid& grid, const InvariantCoefficients& coeffs, cplx alpha) {
    const auto& q = grid.q_points;
    const auto& f = grid.values;
    const double h = grid.spacing();
    const double sigma = grid.scale.sigma;
    if (h > 0.25 * sigma) {
        throw DomainError("eigen_residual: spacing " + std::to_string(h) + " exceeds sigma/4 = " +
                          std::to_string(0.25 * sigma));
    }

    const auto& s = grid.envelope;
    const double k_max = max_local_wavenumber(grid.envelope, grid.state, grid.scale,
                                              2.0 * std::norm(coeffs.nu) / (s.rho * s.rho));
    if (k_max * h > 0.5 * std::numbers::pi) {
        throw DomainError("eigen_residual: spacing " + std::to_string(h) +
                          " gives fewer than 4 points per local wavelength (k = " +
                          std::to_string(k_max) + ")");
    }

    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < q.size(); ++i) {
        const cplx a_psi = coeffs.d_dq * first_derivative(f, i, h) + coeffs.q_coef * q[i] * f[i];
        worst = std::max(worst, std::abs(a_psi - alpha * f[i]));
    }
    return worst / max_abs(f);
}

double schrodinger_residual(const EnvelopeSample& before, const EnvelopeSample& middle,
                            const EnvelopeSample& after, const Constants& consts,
                            const QuantumState& state, double h_t,
                            const WaveGridOptions& options) {
    if (!(h_t > 0.0)) throw DomainError("schrodinger_residual: h_t must be positive");
    const auto grid = make_wave_grid(middle, consts, state, options);
    const auto& q = grid.q_points;
    const double h = grid.spacing();
    if (h > 0.25 * grid.scale.sigma) {
        throw DomainError("schrodinger_residual: spacing " + std::to_string(h) +
                          " exceeds sigma/4");
    }
    const auto f_before = sample_values(q, before, consts, state);
    const auto f_after = sample_values(q, after, consts, state);
    const auto& f = grid.values;

    const double kinetic = consts.hbar * consts.hbar * std::exp(-middle.lambda) / (2.0 * consts.eps0);
    const double potential = 0.5 * consts.eps0 * middle.omega_sq * std::exp(middle.lambda);
    const cplx i_hbar{0.0, consts.hbar};

    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < q.size(); ++i) {
        const cplx dt = (f_after[i] - f_before[i]) / (2.0 * h_t);
        const cplx h_psi = -kinetic * second_derivative(f, i, h) + potential * q[i] * q[i] * f[i];
        worst = std::max(worst, std::abs(i_hbar * dt - h_psi));
    }
    return worst / max_abs(f);
}

double schrodinger_residual(const EnvelopeTrajectory& traj, const Constants& consts,
                            const QuantumState& state, double t, double h_t,
                            const WaveGridOptions& options) {
    return schrodinger_residual(traj.at_time(t - h_t), traj.at_time(t), traj.at_time(t + h_t),
                                consts, state, h_t, options);
}

}  // namespace nonstatq
