#include <doctest.h>

#include <cmath>
#include <functional>

#include "nonstatq/errors.hpp"
#include "nonstatq/medium.hpp"
#include "support.hpp"

using namespace nonstatq;
using nonstatq::testing::Gen;

namespace {

MediumProfile conductive(double sigma) {
    return {TimeFunction::constant(1.0), TimeFunction::constant(1.0), TimeFunction::constant(sigma)};
}

MediumProfile growing_permittivity(double rate) {
    return {TimeFunction::exponential(1.0, rate), TimeFunction::constant(1.0), TimeFunction::constant(0.0)};
}

double central_first(const std::function<double(double)>& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("gamma of constant and exponential media") {
    CHECK(gamma(conductive(0.2), 3.7) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(gamma(conductive(0.0), 1.0) == 0.0);

    const auto p = growing_permittivity(0.1);
    for (double t : {0.0, 1.5, 7.0}) {
        CHECK(gamma(p, t) == doctest::Approx(0.1).epsilon(1e-14));
        const double fd = central_first([&](double s) { return p.permittivity().value(s); }, t, 1e-5) /
                          p.permittivity().value(t);
        CHECK(std::abs(fd - 0.1) < 1e-9);
    }
}

TEST_CASE("permittivity rate can be dropped from gamma") {
    const MediumProfile p(TimeFunction::exponential(1.0, 0.1), TimeFunction::constant(1.0),
                          TimeFunction::constant(0.05), false);
    CHECK(gamma(p, 2.0) == doctest::Approx(0.05 / std::exp(0.2)).epsilon(1e-14));
}

TEST_CASE("lambda accumulates gamma") {
    CHECK(lambda_accum(conductive(0.2), 5.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lambda_accum(growing_permittivity(0.3), 0.0) == 0.0);
    CHECK(lambda_accum(growing_permittivity(0.1), 10.0) == doctest::Approx(1.0).epsilon(1e-12));

    const MediumProfile ramp(TimeFunction::constant(1.0), TimeFunction::constant(1.0),
                             TimeFunction::linear_ramp(0.0, 0.2));
    CHECK(lambda_accum(ramp, 3.0) == doctest::Approx(0.9).epsilon(1e-13));
}

TEST_CASE("mode frequency") {
    const Constants k;
    ModeSpec mode;
    CHECK(mode_frequency(conductive(0.0), mode, k, 0.0) == 1.0);

    mode.omega0 = 2.0;
    const MediumProfile index_two(TimeFunction::constant(4.0), TimeFunction::constant(1.0),
                                  TimeFunction::constant(0.0));
    CHECK(mode_frequency(index_two, mode, k, 0.0) == doctest::Approx(1.0));

    mode.omega0 = 1.0;
    const MediumProfile ramp(TimeFunction::linear_ramp(1.0, 1.0), TimeFunction::constant(1.0),
                             TimeFunction::constant(0.0));
    CHECK(mode_frequency(ramp, mode, k, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("effective frequency") {
    const Constants k;
    const ModeSpec mode;
    CHECK(effective_frequency_sq(conductive(0.2), mode, k, 4.0) == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(effective_frequency_sq(conductive(0.0), mode, k, 4.0) == 1.0);

    const MediumProfile ramp(TimeFunction::constant(1.0), TimeFunction::constant(1.0),
                             TimeFunction::linear_ramp(0.0, 0.2));
    CHECK(effective_frequency_sq(ramp, mode, k, 0.0) == doctest::Approx(0.9).epsilon(1e-15));
    const double fd = central_first([&](double s) { return gamma(ramp, s); }, 1.0, 1e-4);
    CHECK(std::abs(fd - gamma_rate(ramp, 1.0)) < 1e-10);
}

TEST_CASE("negative effective frequency is returned and flagged") {
    const Constants k;
    ModeSpec mode;
    mode.omega0 = 0.05;
    const auto st = medium_state(conductive(0.2), mode, k, 1.0);
    CHECK(st.big_omega_sq == doctest::Approx(0.0025 - 0.01));
    CHECK(st.inverted());
}

TEST_CASE("domain violations") {
    const MediumProfile negative(TimeFunction::linear_ramp(1.0, -1.0), TimeFunction::constant(1.0),
                                 TimeFunction::constant(0.0));
    CHECK_THROWS_AS(gamma(negative, 2.0), DomainError);
    const MediumProfile lossy_gain(TimeFunction::constant(1.0), TimeFunction::constant(1.0),
                                   TimeFunction::constant(-0.1));
    CHECK_THROWS_AS(gamma(lossy_gain, 0.0), DomainError);

    const MediumProfile table(TimeFunction::tabulated({0.0, 1.0, 2.0, 3.0}, {1.0, 1.1, 1.2, 1.3}),
                              TimeFunction::constant(1.0), TimeFunction::constant(0.0));
    CHECK_NOTHROW(gamma(table, 1.5));
    CHECK_THROWS_AS(gamma(table, 3.5), DomainError);
}

TEST_CASE("tabulated profile reproduces smooth data") {
    std::vector<double> t, v;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.05 * i);
        v.push_back(1.0 + 0.3 * std::sin(0.5 * t.back()));
    }
    const auto f = TimeFunction::tabulated(t, v);
    for (double s : {1.234, 4.5, 8.0}) {
        const auto j = f.jet(s);
        CHECK(std::abs(j.value - (1.0 + 0.3 * std::sin(0.5 * s))) < 1e-6);
        CHECK(std::abs(j.first - 0.15 * std::cos(0.5 * s)) < 1e-4);
    }
}

TEST_CASE("property: analytic derivatives agree with central differences at second order") {
    Gen g(0x5eed0001);
    for (int trial = 0; trial < 40; ++trial) {
        TimeFunction f;
        switch (trial % 4) {
            case 0: f = TimeFunction::exponential(g.uniform(0.5, 2.0), g.uniform(-0.5, 0.5)); break;
            case 1: f = TimeFunction::linear_ramp(g.uniform(1.0, 2.0), g.uniform(-0.05, 0.2)); break;
            case 2:
                f = TimeFunction::sinusoidal(g.uniform(2.0, 3.0), g.uniform(0.1, 1.0), g.uniform(0.5, 3.0),
                                             g.uniform(0.0, 6.0));
                break;
            default: f = TimeFunction::power(g.uniform(0.5, 2.0), g.uniform(0.1, 1.0), g.uniform(-2.0, 3.0));
        }
        const double t = g.uniform(0.5, 4.0);
        const auto exact = f.jet(t);
        auto fd_error = [&](double h) {
            const double d1 = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
            const double d2 = (f.value(t + h) - 2.0 * f.value(t) + f.value(t - h)) / (h * h);
            return std::pair{std::abs(d1 - exact.first), std::abs(d2 - exact.second)};
        };
        const auto [e1a, e2a] = fd_error(0.02);
        const auto [e1b, e2b] = fd_error(0.01);
        if (e1a > 1e-11) CHECK(std::log2(e1a / e1b) >= 1.9);
        if (e2a > 1e-8) CHECK(std::log2(e2a / e2b) >= 1.9);
    }
}

TEST_CASE("property: lambda is additive") {
    Gen g(0x5eed0002);
    for (int trial = 0; trial < 25; ++trial) {
        const MediumProfile p(TimeFunction::sinusoidal(2.0, g.uniform(0.1, 0.9), g.uniform(0.3, 2.0)),
                              TimeFunction::constant(1.0), TimeFunction::linear_ramp(g.uniform(0.0, 0.3), 0.01));
        const double t1 = g.uniform(0.0, 5.0);
        const double t2 = t1 + g.uniform(0.0, 5.0);
        CHECK(std::abs(lambda_accum(p, t2) - lambda_accum(p, t1) - lambda_increment(p, t1, t2)) < 1e-11);
    }
}

TEST_CASE("property: lossless stationary media have no damping") {
    Gen g(0x5eed0003);
    const Constants k;
    for (int trial = 0; trial < 25; ++trial) {
        ModeSpec mode;
        mode.omega0 = g.uniform(0.2, 5.0);
        const double e = g.uniform(0.5, 4.0), m = g.uniform(0.5, 4.0);
        const MediumProfile p(TimeFunction::constant(e), TimeFunction::constant(m), TimeFunction::constant(0.0));
        const double t = g.uniform(0.0, 30.0);
        CHECK(gamma(p, t) == 0.0);
        CHECK(lambda_accum(p, t) == 0.0);
        const double w = mode_frequency(p, mode, k, t);
        CHECK(effective_frequency_sq(p, mode, k, t) == w * w);
    }
}

TEST_CASE("property: constant gamma shifts the frequency by gamma^2/4") {
    Gen g(0x5eed0004);
    const Constants k;
    for (int trial = 0; trial < 25; ++trial) {
        ModeSpec mode;
        mode.omega0 = g.uniform(0.5, 3.0);
        const double sigma = g.uniform(0.0, 1.0);
        const MediumProfile p(TimeFunction::constant(1.0), TimeFunction::linear_ramp(1.0, g.uniform(0.0, 0.5)),
                              TimeFunction::constant(sigma));
        const double t = g.uniform(0.0, 10.0);
        const double w = mode_frequency(p, mode, k, t);
        CHECK(effective_frequency_sq(p, mode, k, t) == doctest::Approx(w * w - sigma * sigma / 4.0).epsilon(1e-14));
    }
}
