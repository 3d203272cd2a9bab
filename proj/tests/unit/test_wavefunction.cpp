#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nonstatq/errors.hpp"
#include "nonstatq/wavefunction.hpp"
#include "support.hpp"

using namespace nonstatq;
using nonstatq::testing::Gen;

namespace {

const Constants natural;
const ModeSpec unit_mode;

MediumProfile conductive(double sigma) {
    return {TimeFunction::constant(1.0), TimeFunction::constant(1.0), TimeFunction::constant(sigma)};
}

EnvelopeSample conductive_sample(double t) {
    return attach_medium(stationary_envelope(0.99, t), conductive(0.2), unit_mode, natural);
}

double eigen_residual_at(const EnvelopeSample& s, cplx alpha, cplx tested, double h) {
    const auto c = invariant_coefficients(s, natural, 1.0);
    WaveGridOptions opt;
    opt.spacing = h;
    return eigen_residual(make_wave_grid(s, natural, QuantumState::coherent(alpha), opt), c, tested);
}

}  // namespace

TEST_CASE("ground state values") {
    const auto s = stationary_envelope(1.0, 0.0);
    const cplx v = psi_ground(0.0, s, natural);
    CHECK(v.real() == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(std::abs(psi_ground(2.0, s, natural) - psi_ground(-2.0, s, natural)) < 1e-15);
    CHECK(std::abs(psi_coherent(0.7, s, natural, 0.0) - psi_ground(0.7, s, natural)) < 1e-15);
}

TEST_CASE("Fock state values") {
    const auto s = stationary_envelope(1.0, 0.0);
    CHECK(std::abs(psi_fock(0.3, 0, s, natural) - psi_ground(0.3, s, natural)) < 1e-15);
    CHECK(psi_fock(0.0, 2, s, natural).real() == doctest::Approx(-0.531126).epsilon(1e-6));
    CHECK(psi_fock(0.0, 2, s, natural).real() ==
          doctest::Approx(-std::pow(M_PI, -0.25) / std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(psi_fock(0.0, -1, s, natural), DomainError);
    CHECK_THROWS_AS(psi_fock(0.0, max_fock_number + 1, s, natural), DomainError);
    CHECK_NOTHROW(psi_fock(0.5, max_fock_number, s, natural));
}

TEST_CASE("normalized Hermite polynomials") {
    for (double x : {-1.3, 0.0, 0.4, 2.2}) {
        CHECK(normalized_hermite(0, x) == 1.0);
        CHECK(normalized_hermite(2, x) == doctest::Approx((4.0 * x * x - 2.0) / std::sqrt(8.0)));
        CHECK(normalized_hermite(3, x) == doctest::Approx((8.0 * x * x * x - 12.0 * x) / std::sqrt(48.0)));
    }
}

TEST_CASE("coherent overflow guard") {
    auto s = stationary_envelope(1.0, 0.0);
    CHECK(psi_coherent(1e3, s, natural, 20.0) == 0.0);
    s.lambda = 1500.0;
    CHECK_THROWS_AS(psi_coherent(0.0, s, natural, 1.0), DomainError);
    CHECK_THROWS_AS(psi_fock(0.3, 0, s, natural), DomainError);
}

TEST_CASE("coherent state moments in vacuum") {
    const auto s = stationary_envelope(1.0, 0.0);
    const auto pm = position_moments(s, natural, QuantumState::coherent(1.0));
    CHECK(pm.norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pm.mean_q == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(pm.mean_q2 - pm.mean_q * pm.mean_q == doctest::Approx(0.5).epsilon(1e-10));
    for (cplx a : {cplx{1.0, 0.0}, cplx{0.0, 2.0}, cplx{1.0, 1.0}}) {
        CHECK(std::abs(position_moments(conductive_sample(3.0), natural, QuantumState::coherent(a)).norm - 1.0) < 1e-6);
    }
}

TEST_CASE("Fock orthonormality") {
    const auto s = conductive_sample(2.5);
    CHECK(std::abs(overlap(s, natural, QuantumState::fock(1), QuantumState::fock(3))) < 1e-8);
    double off = 0.0, diag = 0.0;
    for (int m = 0; m <= 8; ++m) {
        for (int n = m; n <= 8; ++n) {
            const cplx o = overlap(s, natural, QuantumState::fock(m), QuantumState::fock(n));
            if (m == n) diag = std::max(diag, std::abs(o - 1.0));
            else off = std::max(off, std::abs(o));
        }
    }
    CHECK(off < 1e-6);
    CHECK(diag < 1e-6);
}

TEST_CASE("eigen residual") {
    const auto s = stationary_envelope(1.0, 0.0);
    const double r1 = eigen_residual_at(s, 1.0, 1.0, 0.01);
    CHECK(r1 < 1e-6);
    const double c1 = eigen_residual_at(s, 1.0, 1.0, 0.08);
    const double c2 = eigen_residual_at(s, 1.0, 1.0, 0.04);
    CHECK(std::log2(c1 / c2) >= 3.9);
    CHECK(eigen_residual_at(s, 1.0, 1.1, 0.01) > 1e-2);
    CHECK_THROWS_AS(eigen_residual_at(s, 1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("Schrodinger residual") {
    const double t = 3.0;
    auto residual = [&](const QuantumState& st, double h) {
        return schrodinger_residual(conductive_sample(t - h), conductive_sample(t), conductive_sample(t + h),
                                    natural, st, h);
    };
    for (const auto& st : {QuantumState::coherent(1.0), QuantumState::fock(1)}) {
        const double r1 = residual(st, 0.04);
        const double r2 = residual(st, 0.02);
        CHECK(std::log2(r1 / r2) >= 1.9);
    }
    const auto mid = conductive_sample(t);
    const double frozen = schrodinger_residual(mid, mid, mid, natural, QuantumState::coherent(1.0), 0.02);
    CHECK(frozen > 0.1);
}

TEST_CASE("wave grid layout") {
    const auto s = stationary_envelope(1.0, 0.0);
    const auto g = make_wave_grid(s, natural, QuantumState::coherent(1.0));
    CHECK(g.q_points.size() == 2048);
    CHECK(g.values.size() == 2048);
    CHECK(g.q_points.back() - g.q_points.front() >= 8.0 * g.scale.sigma);
    for (std::size_t i = 1; i < g.q_points.size(); ++i) CHECK(g.q_points[i] > g.q_points[i - 1]);

    WaveGridOptions opt;
    opt.spacing = 0.02;
    const auto coarse = make_wave_grid(s, natural, QuantumState::coherent(1.0), opt);
    opt.spacing = 0.01;
    const auto fine = make_wave_grid(s, natural, QuantumState::coherent(1.0), opt);
    for (double q : coarse.q_points) {
        const auto it = std::lower_bound(fine.q_points.begin(), fine.q_points.end(), q - 1e-12);
        REQUIRE(it != fine.q_points.end());
        CHECK(std::abs(*it - q) < 1e-12);
    }
}

TEST_CASE("property: normalization and moment consistency on Wronskian-valid samples") {
    Gen g(0x5eed0501);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = g.valid_sample();
        const cplx alpha = g.complex_in_disc(2.0);
        const auto pm = position_moments(s, natural, QuantumState::coherent(alpha));
        const auto m = quadrature_moments(s, natural, alpha);
        CHECK(std::abs(pm.norm - 1.0) < 1e-6);
        CHECK(std::abs(pm.mean_q - m.mean_q) < 1e-5 * std::max(1.0, std::abs(m.mean_q)));
        CHECK(std::abs(pm.mean_q2 - (m.var_q + m.mean_q * m.mean_q)) < 1e-5 * (m.var_q + m.mean_q * m.mean_q));

        const int n = g.integer(0, 12);
        const auto fock = position_moments(s, natural, QuantumState::fock(n));
        CHECK(std::abs(fock.norm - 1.0) < 1e-6);
        CHECK(std::abs(fock.mean_q) < 1e-8 * std::sqrt(m.var_q));
        CHECK(fock.mean_q2 == doctest::Approx((2.0 * n + 1.0) * m.var_q).epsilon(1e-6));
        const double q = g.uniform(0.0, 3.0) * std::sqrt(m.var_q);
        CHECK(std::abs(std::norm(psi_fock(q, n, s, natural)) - std::norm(psi_fock(-q, n, s, natural))) < 1e-12);
    }
}
