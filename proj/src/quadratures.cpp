#include "nonstatq/quadratures.hpp"

#include <cmath>
#include <string>

#include "nonstatq/errors.hpp"
#include "nonstatq/finite_difference.hpp"

namespace nonstatq {

namespace {

struct QpCoefficients {
    cplx nu;
    cplx mu;
};

QpCoefficients qp_coefficients(const EnvelopeSample& s, const Constants& k) {
    const double half = std::exp(0.5 * s.lambda);
    const cplx x = s.deps - 0.5 * s.gamma_val * s.eps;
    return {std::sqrt(k.hbar / (2.0 * k.eps0)) * s.eps / half,
            std::sqrt(k.hbar * k.eps0 / 2.0) * x * half};
}

}  // namespace

InvariantCoefficients invariant_coefficients(const EnvelopeSample& sample, const Constants& consts,
                                             double reference_frequency, double wronskian_tol) {
    const double drift = std::abs(wronskian(sample) - cplx{0.0, -2.0});
    if (drift > wronskian_tol) {
        throw DomainError("invariant coefficients need |w + 2i| <= " + std::to_string(wronskian_tol) +
                          ", got " + std::to_string(drift) + " at t=" + std::to_string(sample.t));
    }
    if (!(reference_frequency > 0.0)) {
        throw DomainError("reference frequency must be positive");
    }
    const auto [nu, mu] = qp_coefficients(sample, consts);
    const cplx i_hbar{0.0, consts.hbar};

    // Invert [q; p] = [conj(nu) nu; conj(mu) mu] [A; A^+]: A = (mu q - nu p) / (i hbar).
    const cplx c_q = mu / i_hbar;
    const cplx c_p = -nu / i_hbar;

    // q = s_q (a + a^+), p = -i s_p (a - a^+) for the static ladder pair.
    const double w = reference_frequency;
    const double s_q = std::sqrt(consts.hbar / (2.0 * consts.eps0 * w));
    const double s_p = std::sqrt(consts.hbar * consts.eps0 * w / 2.0);
    const cplx i{0.0, 1.0};

    InvariantCoefficients c;
    c.nu = nu;
    c.mu = mu;
    c.u_tilde = c_q * s_q - i * c_p * s_p;
    c.v_tilde = c_q * s_q + i * c_p * s_p;
    c.d_dq = c_p * (-i_hbar);
    c.q_coef = c_q;
    c.reference_frequency = w;
    c.hbar = consts.hbar;
    return c;
}

double bogoliubov_defect(const InvariantCoefficients& c) {
    return std::norm(c.u_tilde) - std::norm(c.v_tilde) - 1.0;
}

cplx commutator_defect(const InvariantCoefficients& c) {
    return std::conj(c.nu) * c.mu - c.nu * std::conj(c.mu) - cplx{0.0, c.hbar};
}

MomentRecord quadrature_moments(const EnvelopeSample& s, const Constants& consts, cplx alpha) {
    const double a = std::exp(-s.lambda) / consts.eps0;
    const double shifted = s.drho - 0.5 * s.gamma_val * s.rho;  // rho' + (a'/2a) rho
    const auto [nu, mu] = qp_coefficients(s, consts);

    MomentRecord r;
    r.t = s.t;
    r.mean_q = 2.0 * std::real(std::conj(nu) * alpha);
    r.mean_p = 2.0 * std::real(std::conj(mu) * alpha);
    r.var_q = 0.5 * consts.hbar * a * s.rho * s.rho;
    r.var_p = 0.5 * consts.hbar / a * (1.0 / (s.rho * s.rho) + shifted * shifted);
    r.cov_qp = -0.5 * consts.hbar * s.rho * shifted;
    r.rs_lhs = r.var_q * r.var_p - r.cov_qp * r.cov_qp;
    r.rs_rhs = 0.25 * consts.hbar * consts.hbar;
    return r;
}

double rs_residual(const MomentRecord& rec) {
    return rec.var_q * rec.var_p - rec.cov_qp * rec.cov_qp - rec.rs_rhs;
}

SqueezeReport squeeze_report(const InvariantCoefficients& c) {
    SqueezeReport r;
    r.delta_q2 = 0.5 * std::norm(c.u_tilde - c.v_tilde);
    r.delta_p2 = 0.5 * std::norm(c.u_tilde + c.v_tilde);
    r.squeezed = r.delta_q2 < 0.5 || r.delta_p2 < 0.5;
    return r;
}

PhotonStatistics photon_statistics(const InvariantCoefficients& c, cplx alpha) {
    // a = conj(u) A - v A^+ is Gaussian in |alpha; t>: <a> = beta,
    // <da^+ da> = |v|^2, <da da> = -conj(u) v.
    const cplx beta = std::conj(c.u_tilde) * alpha - c.v_tilde * std::conj(alpha);
    const double n_fluct = std::norm(c.v_tilde);
    const cplx pair = -std::conj(c.u_tilde) * c.v_tilde;
    const double b2 = std::norm(beta);

    PhotonStatistics st;
    st.mean_n = b2 + n_fluct;
    st.variance_n = b2 * (2.0 * n_fluct + 1.0) +
                    2.0 * std::real(std::conj(beta) * std::conj(beta) * pair) +
                    n_fluct * (n_fluct + 1.0) + std::norm(pair);
    if (st.mean_n > 0.0) st.mandel_q = (st.variance_n - st.mean_n) / st.mean_n;
    return st;
}

std::vector<ChoiYeonParams> choi_yeon_params(const EnvelopeTrajectory& traj, double M0) {
    if (!(M0 > 0.0)) throw DomainError("Choi-Yeon scale M0 must be positive");
    const std::size_t n = traj.size();
    if (n < 5) throw DomainError("Choi-Yeon parameters need at least 5 trajectory samples");

    const auto& first = traj[0];
    std::vector<double> t(n), g(n), m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj[i];
        t[i] = s.t;
        g[i] = s.phase;
        m[i] = M0 * (s.rho / first.rho) * std::exp(-0.5 * (s.lambda - first.lambda));
    }
    const auto dg = fd::differentiate(t, g);
    const auto dm = fd::differentiate(t, m);

    std::vector<ChoiYeonParams> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj[i];
        auto& p = out[i];
        p.t = t[i];
        p.gamma_t = g[i];
        p.M_t = m[i];
        p.residual_gamma = dg.second[i] + dg.first[i] * (s.gamma_val + 2.0 * dm.first[i] / m[i]);
        p.residual_M = dm.second[i] - m[i] * (dg.first[i] * dg.first[i] - s.omega_sq) +
                       s.gamma_val * dm.first[i];
    }
    return out;
}

}  // namespace nonstatq
