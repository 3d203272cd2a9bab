#include <doctest.h>

#include <cmath>

#include "nonstatq/errors.hpp"
#include "nonstatq/field.hpp"
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

}  // namespace

TEST_CASE("first moments in vacuum") {
    const auto s0 = stationary_envelope(1.0, 0.0);
    auto m = field_first_moments(s0, unit_mode, natural, 0.0, 0.0);
    CHECK(m.mean_E == 0.0);
    CHECK(m.mean_B == 0.0);
    m = field_first_moments(s0, unit_mode, natural, 1.0, 0.0);
    CHECK(std::abs(m.mean_E) < 1e-15);
    CHECK(std::abs(m.mean_B) < 1e-15);
    const auto quarter = stationary_envelope(1.0, M_PI / 2.0);
    m = field_first_moments(quarter, unit_mode, natural, 1.0, 0.0);
    CHECK(m.mean_B == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("second moments in vacuum") {
    for (double t : {0.0, 0.7, 3.0}) {
        const auto fm = field_second_moments(stationary_envelope(1.0, t), unit_mode, natural);
        CHECK(fm.var_E == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(fm.var_B == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(fm.cov_EB == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::abs(fm.comm_EB) < 1e-15);
        CHECK(std::abs(field_rs_residual_printed(fm)) < 1e-15);
        CHECK(std::abs(fm.cov_EB_canonical) < 1e-15);
        CHECK(fm.comm_EB_canonical == doctest::Approx(1.0));
        CHECK(std::abs(field_rs_residual(fm)) < 1e-15);
    }
}

TEST_CASE("field RS residual in the conductive medium and under corruption") {
    const auto fm = field_second_moments(conductive_sample(1.0), unit_mode, natural);
    const double scale = std::max(1.0, fm.var_E * fm.var_B);
    CHECK(std::abs(field_rs_residual(fm)) < 1e-10 * scale);
    auto bad = fm;
    bad.var_E *= 1.1;
    CHECK(field_rs_residual(bad) == doctest::Approx(0.1 * fm.var_E * fm.var_B + field_rs_residual(fm)));
}

TEST_CASE("energy in vacuum") {
    const MediumProfile vac;
    const auto s = stationary_envelope(1.0, 0.4);
    auto e = mean_energy_coherent(s, vac, natural, 0.0);
    CHECK(e.W_oracle == doctest::Approx(0.5).epsilon(1e-14));
    REQUIRE(e.W_coherent_printed);
    CHECK(*e.W_coherent_printed == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(e.discrepancy) < 1e-14);
    CHECK(e.c_tilde > 0.0);

    e = mean_energy_coherent(s, vac, natural, 1.0);
    CHECK(e.W_oracle == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(*e.W_coherent_printed == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(e.discrepancy == doctest::Approx(-0.75).epsilon(1e-12));

    e = mean_energy_fock(s, vac, natural, 0);
    REQUIRE(e.W_fock_printed);
    CHECK(*e.W_fock_printed == doctest::Approx(0.5));
    CHECK(e.W_oracle == doctest::Approx(0.5));
    e = mean_energy_fock(s, vac, natural, 1);
    CHECK(e.W_oracle == doctest::Approx(1.5));
    CHECK(*e.W_fock_printed == doctest::Approx(0.75));
    CHECK_THROWS_AS(mean_energy_fock(s, vac, natural, -1), DomainError);
}

TEST_CASE("energies carry the damping factor") {
    const auto p = conductive(0.2);
    const auto s0 = conductive_sample(0.0);
    const auto s5 = conductive_sample(5.0);
    const auto f0 = mean_energy_fock(s0, p, natural, 0);
    const auto f5 = mean_energy_fock(s5, p, natural, 0);
    CHECK(f5.W_oracle / f0.W_oracle == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(*f5.W_fock_printed / *f0.W_fock_printed == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    const double ref = mean_energy_coherent(s0, p, natural, 0.0).W_oracle;
    for (double t = 0.0; t <= 20.0; t += 1.0) {
        const auto e = mean_energy_coherent(conductive_sample(t), p, natural, 0.0);
        CHECK(e.W_oracle * std::exp(0.2 * t) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("var_B e^Lambda / rho^2 is constant for stationary envelopes") {
    const auto s0 = conductive_sample(0.0);
    const double ref = field_second_moments(s0, unit_mode, natural).var_B / (s0.rho * s0.rho);
    CHECK(ref == doctest::Approx(0.5).epsilon(1e-14));
    for (double t = 0.5; t <= 10.0; t += 0.5) {
        const auto s = conductive_sample(t);
        const auto fm = field_second_moments(s, unit_mode, natural);
        CHECK(fm.var_B * std::exp(s.lambda) / (s.rho * s.rho) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("half-lambda convention only changes the electric mean") {
    const auto s = conductive_sample(2.0);
    const auto a = field_first_moments(s, unit_mode, natural, {1.0, 0.5}, 0.3, false);
    const auto b = field_first_moments(s, unit_mode, natural, {1.0, 0.5}, 0.3, true);
    CHECK(a.mean_B == b.mean_B);
    CHECK(a.mean_E != b.mean_E);
}

TEST_CASE("property: field identities on Wronskian-valid samples") {
    Gen g(0x5eed0401);
    for (int trial = 0; trial < 200; ++trial) {
        Constants k;
        k.hbar = g.uniform(0.5, 2.0);
        k.eps0 = g.uniform(0.5, 2.0);
        k.c = g.uniform(0.5, 2.0);
        ModeSpec mode;
        mode.omega0 = g.uniform(0.3, 3.0);
        mode.volume = g.uniform(0.5, 4.0);
        const auto s = g.valid_sample();

        const auto fm = field_second_moments(s, mode, k);
        CHECK(fm.var_E > 0.0);
        CHECK(fm.var_B > 0.0);
        CHECK(std::abs(field_rs_residual(fm)) < 1e-10 * std::max(1.0, fm.var_E * fm.var_B));
        CHECK(std::abs(fm.var_E * fm.var_B - fm.cov_EB * fm.cov_EB - fm.comm_EB * fm.comm_EB) <
              1e-10 * std::max(1.0, fm.var_E * fm.var_B));

        const auto path = field_variances_from_quadratures(quadrature_moments(s, k, 0.0), s.lambda, mode, k);
        CHECK(path.var_E == doctest::Approx(fm.var_E).epsilon(1e-12));
        CHECK(path.var_B == doctest::Approx(fm.var_B).epsilon(1e-12));

        for (cplx alpha : {cplx{1.0, 0.0}, cplx{0.0, 2.0}}) {
            const auto full = field_moments(s, mode, k, alpha, g.uniform(-1.0, 1.0));
            CHECK(full.var_E == fm.var_E);
            CHECK(full.var_B == fm.var_B);
            CHECK(full.cov_EB == fm.cov_EB);
            CHECK(full.comm_EB == fm.comm_EB);
        }
    }
}

TEST_CASE("property: Fock and coherent oracles agree at zero excitation") {
    Gen g(0x5eed0402);
    const MediumProfile p = conductive(0.3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = g.valid_sample();
        CHECK(mean_energy_fock(s, p, natural, 0).W_oracle == mean_energy_coherent(s, p, natural, 0.0).W_oracle);
        CHECK(mean_energy_fock(s, p, natural, 0).W_oracle >= 0.0);
    }
}
