#pragma once

// Position-space eigenfunctions of the invariant and their numerical checks.
//
//   psi_0     = (eps sqrt(pi a hbar))^{-1/2} exp[(i/2a hbar)(eps'/eps - Gamma/2) q^2]
//   psi_alpha = psi_0 exp[sqrt(2/(a hbar)) (alpha/eps) q - (conj eps / 2 eps) alpha^2 - |alpha|^2/2]
//   psi_n     = psi_0 e^{-i n phi} h_n(q / (rho sqrt(a hbar)))
//
// with a = e^{-Lambda}/eps0 and h_n the normalized Hermite polynomial
// H_n / sqrt(2^n n!). eps^{-1/2} is taken as rho^{-1/2} e^{-i phi/2} with the
// unwrapped phase so the prefactor is continuous along a trajectory.

#include <cstddef>
#include <vector>

#include "nonstatq/envelope.hpp"
#include "nonstatq/medium.hpp"
#include "nonstatq/quadratures.hpp"

namespace nonstatq {

inline constexpr int max_fock_number = 50;

struct QuantumState {
    enum class Kind { coherent, fock };

    Kind kind = Kind::coherent;
    cplx alpha;
    int n = 0;

    static QuantumState coherent(cplx alpha) { return {Kind::coherent, alpha, 0}; }
    static QuantumState fock(int n) { return {Kind::fock, {}, n}; }
};

cplx psi_ground(double q, const EnvelopeSample& sample, const Constants& consts);

/// Throws DomainError when the real part of the exponent exceeds 700.
cplx psi_coherent(double q, const EnvelopeSample& sample, const Constants& consts, cplx alpha);

/// Throws DomainError for n < 0 or n > max_fock_number.
cplx psi_fock(double q, int n, const EnvelopeSample& sample, const Constants& consts);

cplx psi(double q, const EnvelopeSample& sample, const Constants& consts,
         const QuantumState& state);

/// h_n(x) = H_n(x) / sqrt(2^n n!) by the three-term recurrence.
double normalized_hermite(int n, double x);

/// Centre and standard deviation of |psi|^2.
struct PositionScale {
    double center = 0.0;
    double sigma = 1.0;
};

PositionScale position_scale(const EnvelopeSample& sample, const Constants& consts,
                             const QuantumState& state);

struct WaveGridOptions {
    std::size_t n_points = 2048;
    double half_width_sigmas = 10.0;
    /// > 0: fixed spacing, grid = center + j h for |j| <= ceil(half_width / h),
    /// so halving h nests the grids.
    double spacing = 0.0;
};

struct WaveGrid {
    std::vector<double> q_points;
    std::vector<cplx> values;
    double t = 0.0;
    QuantumState state;
    EnvelopeSample envelope;
    PositionScale scale;

    double spacing() const { return q_points[1] - q_points[0]; }
};

WaveGrid make_wave_grid(const EnvelopeSample& sample, const Constants& consts,
                        const QuantumState& state, const WaveGridOptions& options = {});

/// Moments of |psi|^2 by adaptive Gauss-Kronrod quadrature.
struct PositionMoments {
    double norm = 0.0;
    double mean_q = 0.0;
    double mean_q2 = 0.0;
};

PositionMoments position_moments(const EnvelopeSample& sample, const Constants& consts,
                                 const QuantumState& state, double tol = 1e-12);

/// <a|b> over the real line.
cplx overlap(const EnvelopeSample& sample, const Constants& consts, const QuantumState& a,
             const QuantumState& b, double tol = 1e-12);

/// max |A psi - alpha psi| / max |psi| on interior grid points, with A applied
/// as d_dq d/dq + q_coef q and d/dq by fourth-order central differences.
/// Throws DomainError when the spacing exceeds sigma/4 or resolves the local
/// wavenumber with less than four points per wavelength.
double eigen_residual(const WaveGrid& grid, const InvariantCoefficients& coeffs, cplx alpha);

/// max |i hbar (psi(t+h) - psi(t-h)) / 2h - H psi(t)| / max |psi(t)| on the grid
/// of the middle sample, with
///     H = (e^{-Lambda}/2eps0) p^2 + (eps0 omega^2 e^{Lambda}/2) q^2.
double schrodinger_residual(const EnvelopeSample& before, const EnvelopeSample& middle,
                            const EnvelopeSample& after, const Constants& consts,
                            const QuantumState& state, double h_t,
                            const WaveGridOptions& options = {});

/// Looks up the samples at t - h_t, t, t + h_t; throws DomainError if any is missing.
double schrodinger_residual(const EnvelopeTrajectory& traj, const Constants& consts,
                            const QuantumState& state, double t, double h_t,
                            const WaveGridOptions& options = {});

}  // namespace nonstatq
