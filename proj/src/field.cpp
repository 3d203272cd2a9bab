#include "nonstatq/field.hpp"

#include <cmath>

#include "nonstatq/errors.hpp"

namespace nonstatq {

namespace {

double field_scale(const ModeSpec& mode, const Constants& k) {
    return k.hbar / (2.0 * k.eps0 * mode.volume);
}

cplx shifted_rate(const EnvelopeSample& s) { return s.deps - 0.5 * s.gamma_val * s.eps; }

struct EnergyParts {
    cplx a_tilde;
    double c_tilde;
    double eps_abs;
};

EnergyParts energy_parts(const EnvelopeSample& s, const MediumProfile& profile,
                         const Constants& k) {
    const cplx x = shifted_rate(s);
    EnergyParts e;
    e.a_tilde = -(k.hbar / (2.0 * k.eps0)) * (s.eps * s.eps + x * x);
    e.c_tilde = (k.hbar / (4.0 * k.eps0)) * (s.omega_sq * s.rho * s.rho + std::norm(x));
    e.eps_abs = k.eps0 * profile.permittivity_at(s.t).value;
    return e;
}

double oracle_energy(const EnvelopeSample& s, double eps_abs, const Constants& k, double p2,
                     double q2) {
    return 0.5 * eps_abs *
           (std::exp(-2.0 * s.lambda) / (k.eps0 * k.eps0) * p2 + s.omega_sq * q2);
}

}  // namespace

FieldMeans field_first_moments(const EnvelopeSample& s, const ModeSpec& mode,
                               const Constants& consts, cplx alpha, double x, bool half_lambda) {
    const double amp = std::abs(alpha);
    if (amp == 0.0) return {};
    const double k = mode.wavenumber(consts);
    const double theta = std::arg(alpha);
    const double damp = std::exp(-0.5 * s.lambda);
    const double lam_rho = (half_lambda ? 0.5 : 1.0) * s.gamma_val * s.rho;
    const double plus = k * x + s.phase + theta;
    const double minus = k * x - s.phase + theta;

    FieldMeans m;
    m.mean_E = std::sqrt(consts.hbar / (2.0 * consts.eps0 * mode.volume)) * damp * amp *
               ((lam_rho - s.drho) * std::cos(plus) - std::sin(minus) / s.rho);
    m.mean_B = -k * std::sqrt(2.0 * consts.hbar / (consts.eps0 * mode.volume)) * damp * amp * s.rho *
               std::sin(plus);
    return m;
}

FieldMoments field_second_moments(const EnvelopeSample& s, const ModeSpec& mode,
                                  const Constants& consts) {
    const double k = mode.wavenumber(consts);
    const double c = field_scale(mode, consts) * std::exp(-s.lambda);
    const cplx y = 0.5 * s.gamma_val * s.rho * s.rho - s.deps * std::conj(s.eps);
    const double shifted = s.drho - 0.5 * s.gamma_val * s.rho;
    const double cov_qp = -0.5 * consts.hbar * s.rho * shifted;
    const double e_lam = std::exp(-s.lambda) / (consts.eps0 * mode.volume);

    FieldMoments fm;
    fm.t = s.t;
    fm.var_E = c * std::norm(shifted_rate(s));
    fm.var_B = k * k * c * s.rho * s.rho;
    fm.cov_EB = -k * c * y.imag();
    fm.comm_EB = -k * c * y.real();
    fm.cov_EB_canonical = k * e_lam * cov_qp;
    fm.comm_EB_canonical = consts.hbar * k * e_lam;
    fm.rs_residual_field = field_rs_residual(fm);
    return fm;
}

FieldMoments field_moments(const EnvelopeSample& s, const ModeSpec& mode, const Constants& consts,
                           cplx alpha, double x, bool half_lambda) {
    FieldMoments fm = field_second_moments(s, mode, consts);
    const auto means = field_first_moments(s, mode, consts, alpha, x, half_lambda);
    fm.x = x;
    fm.mean_E = means.mean_E;
    fm.mean_B = means.mean_B;
    return fm;
}

double field_rs_residual(const FieldMoments& fm) {
    return fm.var_E * fm.var_B - fm.cov_EB_canonical * fm.cov_EB_canonical -
           0.25 * fm.comm_EB_canonical * fm.comm_EB_canonical;
}

double field_rs_residual_printed(const FieldMoments& fm) {
    return fm.var_E * fm.var_B - fm.cov_EB * fm.cov_EB - 0.25 * fm.comm_EB * fm.comm_EB;
}

FieldCrossPath field_variances_from_quadratures(const MomentRecord& rec, double lambda,
                                                const ModeSpec& mode, const Constants& consts) {
    const double k = mode.wavenumber(consts);
    return {std::exp(-2.0 * lambda) * rec.var_p / (consts.eps0 * consts.eps0 * mode.volume),
            k * k * rec.var_q / mode.volume};
}

EnergyReport mean_energy_coherent(const EnvelopeSample& s, const MediumProfile& profile,
                                  const Constants& consts, cplx alpha) {
    const auto parts = energy_parts(s, profile, consts);
    const auto m = quadrature_moments(s, consts, alpha);

    EnergyReport r;
    r.a_tilde = parts.a_tilde;
    r.c_tilde = parts.c_tilde;
    const double printed =
        0.5 * parts.eps_abs * std::exp(-s.lambda) *
        (2.0 * std::real(std::conj(parts.a_tilde) * alpha * alpha) +
         parts.c_tilde * std::norm(alpha) + 2.0 * parts.c_tilde);
    r.W_coherent_printed = printed;
    r.W_oracle = oracle_energy(s, parts.eps_abs, consts, m.var_p + m.mean_p * m.mean_p,
                               m.var_q + m.mean_q * m.mean_q);
    r.discrepancy = printed - r.W_oracle;
    return r;
}

EnergyReport mean_energy_fock(const EnvelopeSample& s, const MediumProfile& profile,
                              const Constants& consts, int n) {
    if (n < 0) throw DomainError("Fock number must be nonnegative, got " + std::to_string(n));
    const auto parts = energy_parts(s, profile, consts);
    const auto m = quadrature_moments(s, consts, cplx{});
    const double level = 2.0 * n + 1.0;

    EnergyReport r;
    r.a_tilde = parts.a_tilde;
    r.c_tilde = parts.c_tilde;
    const double printed = parts.eps_abs * std::exp(-s.lambda) * (1.0 + 0.5 * n) * parts.c_tilde;
    r.W_fock_printed = printed;
    r.W_oracle = oracle_energy(s, parts.eps_abs, consts, level * m.var_p, level * m.var_q);
    r.discrepancy = printed - r.W_oracle;
    return r;
}

}  // namespace nonstatq
