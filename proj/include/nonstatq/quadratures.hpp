#pragma once

// Ladder-operator invariant of one mode and the statistics of its eigenstates.
//
// The invariant used throughout the library is
//
//   A(t) = i / sqrt(2 hbar eps0) e^{-Lambda/2} [eps p - eps0 e^{Lambda} (eps' - Gamma eps/2) q],
//
// normalized so that A(t0) is the photon annihilation operator under Glauber
// initial conditions. Its eigenfunctions are psi_alpha / psi_n in wavefunction.hpp.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "nonstatq/envelope.hpp"
#include "nonstatq/medium.hpp"

namespace nonstatq {

/// q = nu A^+ + conj(nu) A,  p = mu A^+ + conj(mu) A,  A = u a + v a^+.
struct InvariantCoefficients {
    cplx nu;
    cplx mu;
    cplx u_tilde;
    cplx v_tilde;
    /// A acting on position wavefunctions: A = d_dq * d/dq + q_coef * q.
    cplx d_dq;
    cplx q_coef;
    double reference_frequency = 1.0;  ///< frequency of the static a, a^+
    double hbar = 1.0;
};

/// Throws DomainError when |w + 2i| exceeds wronskian_tol.
InvariantCoefficients invariant_coefficients(const EnvelopeSample& sample, const Constants& consts,
                                             double reference_frequency,
                                             double wronskian_tol = 1e-6);

/// |u|^2 - |v|^2 - 1.
double bogoliubov_defect(const InvariantCoefficients& c);

/// conj(nu) mu - nu conj(mu) - i hbar  (the q-p commutator carried by the coefficients).
cplx commutator_defect(const InvariantCoefficients& c);

struct MomentRecord {
    double t = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;
    double rs_lhs = 0.0;  ///< var_q var_p - cov^2
    double rs_rhs = 0.0;  ///< hbar^2 / 4
};

/// First and second q-p moments in the eigenstate |alpha; t> of A(t).
/// cov_qp = -(hbar/2) rho (rho' - Gamma rho / 2).
MomentRecord quadrature_moments(const EnvelopeSample& sample, const Constants& consts, cplx alpha);

/// var_q var_p - cov^2 - hbar^2/4.
double rs_residual(const MomentRecord& rec);

struct SqueezeReport {
    double delta_q2 = 0.5;  ///< (1/2)|u - v|^2
    double delta_p2 = 0.5;  ///< (1/2)|u + v|^2
    bool squeezed = false;  ///< either variance below 1/2
};

SqueezeReport squeeze_report(const InvariantCoefficients& c);

struct PhotonStatistics {
    double mean_n = 0.0;
    double variance_n = 0.0;
    /// (Var n - <n>) / <n>; empty when <n> = 0.
    std::optional<double> mandel_q;
};

/// Photon-number statistics of a = conj(u) A - v A^+ in |alpha; t>.
PhotonStatistics photon_statistics(const InvariantCoefficients& c, cplx alpha);

struct ChoiYeonParams {
    double t = 0.0;
    double gamma_t = 0.0;  ///< unwrapped phase of eps
    double M_t = 1.0;
    double residual_gamma = 0.0;
    double residual_M = 0.0;
};

/// gamma = arg eps, M = M0 (rho/rho(t0)) e^{-(Lambda - Lambda(t0))/2}, with the
/// residuals of
///     gamma'' + gamma' (Gamma + 2 M'/M) = 0,
///     M'' - M (gamma'^2 - omega^2) + Gamma M' = 0
/// evaluated by finite differences along the trajectory grid.
std::vector<ChoiYeonParams> choi_yeon_params(const EnvelopeTrajectory& traj, double M0 = 1.0);

}  // namespace nonstatq
