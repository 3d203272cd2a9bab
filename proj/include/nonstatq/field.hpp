#pragma once

// Plane-wave field moments of one mode in the eigenstates of the invariant.
//
// With E = -e^{-Lambda} p / (eps0 sqrt V) and B = k q / sqrt V the second
// moments follow from the q-p moments; the functions below evaluate the
// closed forms in terms of the envelope and keep the canonical E-B
// covariance/commutator next to the printed-form pair.

#include <optional>

#include "nonstatq/envelope.hpp"
#include "nonstatq/medium.hpp"
#include "nonstatq/quadratures.hpp"

namespace nonstatq {

struct FieldMoments {
    double t = 0.0;
    double x = 0.0;
    double mean_E = 0.0;
    double mean_B = 0.0;
    double var_E = 0.0;
    double var_B = 0.0;
    /// -k C e^{-Lambda} Im(Gamma rho^2/2 - eps' conj eps), C = hbar / (2 eps0 V).
    double cov_EB = 0.0;
    /// -k C e^{-Lambda} Re(Gamma rho^2/2 - eps' conj eps).
    double comm_EB = 0.0;
    /// Symmetrized covariance of E and B: k e^{-Lambda} cov_qp / (eps0 V).
    double cov_EB_canonical = 0.0;
    /// <[E, B]> / i = hbar k e^{-Lambda} / (eps0 V).
    double comm_EB_canonical = 0.0;
    double rs_residual_field = 0.0;
};

/// <E> and <B> at position x. half_lambda replaces Lambda' rho by Lambda' rho / 2 in <E>.
struct FieldMeans {
    double mean_E = 0.0;
    double mean_B = 0.0;
};

FieldMeans field_first_moments(const EnvelopeSample& sample, const ModeSpec& mode,
                               const Constants& consts, cplx alpha, double x,
                               bool half_lambda = false);

/// Second moments (alpha-independent); mean fields are left at zero.
FieldMoments field_second_moments(const EnvelopeSample& sample, const ModeSpec& mode,
                                  const Constants& consts);

/// First and second moments together.
FieldMoments field_moments(const EnvelopeSample& sample, const ModeSpec& mode,
                           const Constants& consts, cplx alpha, double x,
                           bool half_lambda = false);

/// var_E var_B - cov^2 - comm^2 / 4 with the canonical pair.
double field_rs_residual(const FieldMoments& fm);

/// The same combination built from the printed cov_EB / comm_EB.
double field_rs_residual_printed(const FieldMoments& fm);

/// var_E and var_B recomputed from q-p moments: e^{-2 Lambda} var_p / (eps0^2 V) and k^2 var_q / V.
struct FieldCrossPath {
    double var_E = 0.0;
    double var_B = 0.0;
};

FieldCrossPath field_variances_from_quadratures(const MomentRecord& rec, double lambda,
                                                const ModeSpec& mode, const Constants& consts);

struct EnergyReport {
    cplx a_tilde;
    double c_tilde = 0.0;
    std::optional<double> W_coherent_printed;
    std::optional<double> W_fock_printed;
    /// (eps/2)[(e^{-2 Lambda}/eps0^2) <p^2> + omega^2 <q^2>], eps absolute.
    double W_oracle = 0.0;
    /// printed - oracle
    double discrepancy = 0.0;
};

/// a~ = -(hbar/2eps0)(eps^2 + X^2), c~ = (hbar/4eps0)(omega^2 rho^2 + |X|^2),
/// X = eps' - Gamma eps / 2.
EnergyReport mean_energy_coherent(const EnvelopeSample& sample, const MediumProfile& profile,
                                  const Constants& consts, cplx alpha);

/// Throws DomainError on n < 0.
EnergyReport mean_energy_fock(const EnvelopeSample& sample, const MediumProfile& profile,
                              const Constants& consts, int n);

}  // namespace nonstatq
