#pragma once

// Complex auxiliary ("envelope") solutions eps(t) of
//
//     eps'' + Omega^2(t) eps = 0,     eps conj(eps') - conj(eps) eps' = -2i,
//
// whose modulus rho = |eps| solves the Ermakov equation
//     rho'' + Omega^2 rho - rho^-3 = 0.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nonstatq/medium.hpp"

namespace nonstatq {

using cplx = std::complex<double>;

/// Envelope state at one instant, together with the medium functions that
/// the downstream moment formulas need.
struct EnvelopeSample {
    double t = 0.0;
    cplx eps{1.0, 0.0};
    cplx deps{0.0, 1.0};
    double lambda = 0.0;        ///< Lambda(t)
    double gamma_val = 0.0;     ///< Gamma(t)
    double gamma_rate = 0.0;    ///< Gamma'(t)
    double omega_sq = 1.0;      ///< omega^2(t)
    double big_omega_sq = 1.0;  ///< Omega^2(t)
    double rho = 1.0;           ///< |eps|
    double drho = 0.0;          ///< d|eps|/dt
    double phase = 0.0;         ///< unwrapped arg eps
};

/// Builds a sample, filling rho and drho from (eps, deps).
EnvelopeSample make_sample(double t, cplx eps, cplx deps, double phase, const MediumState& medium,
                           double lambda);

/// Replaces the medium fields of a sample (Lambda, Gamma, frequencies) with
/// values computed from a profile. Envelope fields are left untouched.
EnvelopeSample attach_medium(EnvelopeSample sample, const MediumProfile& profile,
                             const ModeSpec& mode, const Constants& consts);

struct InitialConditions {
    cplx eps;
    cplx deps;
};

/// eps(0) = Omega0^{-1/2}, eps'(0) = i Omega0^{1/2}: evolves the Glauber
/// coherent and Fock states of frequency Omega0.
InitialConditions glauber_initial_conditions(double big_omega0);

/// w = eps conj(eps') - conj(eps) eps'.
cplx wronskian(cplx eps, cplx deps);
cplx wronskian(const EnvelopeSample& sample);

/// rho'' reconstructed from (eps, eps', Omega^2) without differencing:
/// rho'' = (|eps'|^2 - rho'^2)/rho - Omega^2 rho.
double reconstructed_rho_ddot(const EnvelopeSample& sample, double big_omega_sq);

/// rho'' + Omega^2 rho - rho^-3.
double ermakov_residual(double rho, double rho_ddot, double big_omega_sq);
double ermakov_residual(const EnvelopeSample& sample, double big_omega_sq);
double ermakov_residual(const EnvelopeSample& sample);

/// Exact solution for constant Omega^2 > 0: eps = Omega^{-1/2} e^{i Omega t}.
/// Medium fields are set to a lossless medium with omega^2 = Omega^2.
EnvelopeSample stationary_envelope(double big_omega_sq, double t);

/// Exact solution for Omega(t) = 1/tau, tau = t + 1/omega0:
///     eps = s0^{-1/2} sqrt(tau) exp(i s0 ln(tau/tau0)),  s0 = sqrt(3)/2,
/// normalized to w = -2i with eps(0) real and positive.
EnvelopeSample hyperbolic_decay_envelope(double omega0, double t);

struct IntegratorOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    /// Allowed |w + 2i| of the initial conditions.
    double ic_tol = 1e-9;
    /// Rescale (eps, eps') when |w + 2i| exceeds 100 * rel_tol.
    bool renormalize_wronskian = false;
    double min_step = 1e-12;
    double max_step = 0.0;  ///< <= 0: unbounded
    std::size_t max_steps = 5'000'000;
};

struct IntegrationStats {
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t renormalizations = 0;
    double smallest_step = 0.0;
    double largest_step = 0.0;
    double max_wronskian_drift = 0.0;   ///< max |w + 2i| over stored samples
    double max_ermakov_residual = 0.0;  ///< max |rho'' + Omega^2 rho - rho^-3|
    bool inverted_regime = false;       ///< Omega^2 < 0 at some stored sample
};

struct EnvelopeTrajectory {
    std::vector<EnvelopeSample> samples;
    IntegrationStats stats;

    std::size_t size() const { return samples.size(); }
    const EnvelopeSample& operator[](std::size_t i) const { return samples[i]; }
    /// Sample whose time matches t within 1e-12 (relative); throws DomainError otherwise.
    const EnvelopeSample& at_time(double t) const;
};

/// Integrates (Re eps, Im eps, Re eps', Im eps', Lambda) with adaptive
/// Dormand-Prince 5(4), storing a sample at every grid point. grid[0] is the
/// time at which ic applies.
EnvelopeTrajectory integrate_envelope(const MediumProfile& profile, const ModeSpec& mode,
                                      const Constants& consts, const InitialConditions& ic,
                                      std::span<const double> grid,
                                      const IntegratorOptions& options = {});

/// Recomputes the metadata maxima of a trajectory built from exact samples.
EnvelopeTrajectory make_trajectory(std::vector<EnvelopeSample> samples);

/// n evenly spaced points on [t0, t1].
std::vector<double> linspace(double t0, double t1, std::size_t n);

/// x = eps e^{-Lambda/2} and its rate, which solve the damped oscillator
/// equation x'' + Gamma x' + omega^2 x = 0.
struct DampedSample {
    double t = 0.0;
    cplx value;
    cplx rate;
};

std::vector<DampedSample> damped_envelope_transform(const EnvelopeTrajectory& traj);

/// Finite-difference residual |x'' + Gamma x' + omega^2 x| of the damped
/// equation at interior grid points (endpoints use one-sided stencils).
std::vector<double> damped_equation_residual(const EnvelopeTrajectory& traj);

}  // namespace nonstatq
