#include <doctest.h>

#include <string>

#include "nonstatq/checks.hpp"
#include "nonstatq/errors.hpp"
#include "nonstatq/scenario.hpp"

using namespace nonstatq;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_scenario_string(text, "test.toml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const auto cfg = parse_scenario_string(R"(
[medium]
epsilon = 1.0
[outputs]
select = ["checks"]
)");
    CHECK(cfg.constants.hbar == 1.0);
    CHECK(cfg.constants.eps0 == 1.0);
    CHECK(cfg.constants.c == 1.0);
    CHECK(cfg.ode_abs == 1e-9);
    CHECK(cfg.ode_rel == 1e-9);
    CHECK(cfg.ic_policy == IcPolicy::glauber);
    CHECK(cfg.outputs.count(Output::checks) == 1);
    CHECK(cfg.conventions.include_eps_dot_in_gamma);
    CHECK(!cfg.conventions.e_mean_half_lambda);
}

TEST_CASE("full config round trip") {
    const auto cfg = parse_scenario_string(R"(
name = "ramp"
[constants]
hbar = 2.0
[medium]
epsilon = { kind = "linear_ramp", start = 1.0, slope = 0.1 }
sigma = { kind = "tabulated", times = [0.0, 1.0, 2.0, 3.0, 4.0], values = [0.0, 0.1, 0.2, 0.3, 0.4], order = 1 }
[mode]
omega0 = 2.0
volume = 3.0
[state]
kind = "fock"
n = 3
[time]
t_end = 4.0
n_points = 41
[outputs]
select = ["envelope", "field"]
field_x = [0.0, 0.5]
)");
    CHECK(cfg.name == "ramp");
    CHECK(cfg.constants.hbar == 2.0);
    CHECK(cfg.permittivity.kind == ProfileKind::linear_ramp);
    CHECK(cfg.conductivity.kind == ProfileKind::tabulated);
    CHECK(cfg.conductivity.times.size() == 5);
    CHECK(cfg.state.kind == QuantumState::Kind::fock);
    CHECK(cfg.state.n == 3);
    CHECK(cfg.grid().size() == 41);
    CHECK(cfg.field_x.size() == 2);
    CHECK(gamma(cfg.medium(), 2.5) == doctest::Approx((0.25 + 0.1) / 1.25));
}

TEST_CASE("validation errors name the field") {
    CHECK(contains(error_of("[time]\nt_start = 5.0\nt_end = 1.0\n"), "time.t_end"));
    CHECK(contains(error_of("[time]\nn_points = 1\n"), "time.n_points"));
    CHECK(contains(error_of("[tolerances]\node_abs = -1.0\n"), "tolerances.ode_abs"));
    CHECK(contains(error_of("[outputs]\nselect = []\n"), "outputs.select"));
    CHECK(contains(error_of("[mode]\nomega0 = 0.0\n"), "omega0"));
    CHECK(contains(error_of("[medium]\nsigma = -0.1\n"), "medium"));
}

TEST_CASE("unknown keys suggest the closest name") {
    const auto msg = error_of("[medium]\nsgima = 0.2\n");
    CHECK(contains(msg, "sgima"));
    CHECK(contains(msg, "sigma"));
    CHECK(contains(error_of("[tolerances]\node_ab = 1e-9\n"), "ode_abs"));
    CHECK(did_you_mean("epsilom", {"epsilon", "mu", "sigma"}) == std::optional<std::string>("epsilon"));
    CHECK(!did_you_mean("zzzzzz", {"epsilon", "mu", "sigma"}));
}

TEST_CASE("syntax errors report line and column") {
    const auto msg = error_of("[time]\nt_end = = 3\n");
    CHECK(contains(msg, "test.toml:2:"));
}

TEST_CASE("explicit initial conditions must be Wronskian normalized") {
    const auto msg = error_of(R"(
[initial_conditions]
policy = "explicit"
eps = [1.0, 0.0]
deps = [0.0, 2.0]
)");
    CHECK(contains(msg, "initial_conditions"));
    CHECK(contains(msg, "Wronskian"));
    CHECK_NOTHROW(parse_scenario_string("[initial_conditions]\npolicy = \"explicit\"\neps = [1.0, 0.0]\ndeps = [0.0, 1.0]\n"));
}

TEST_CASE("glauber policy needs a positive effective frequency") {
    CHECK(contains(error_of("[mode]\nomega0 = 0.05\n[medium]\nsigma = 0.2\n"), "glauber"));
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(parse_scenario("/nonexistent/scenario.toml"), ConfigError);
}

TEST_CASE("builtin scenarios") {
    const auto all = builtin_scenarios();
    REQUIRE(all.size() == 3);
    CHECK(all[0].name == "vacuum");
    CHECK(all[1].name == "stationary-conductive");
    CHECK(all[2].name == "hyperbolic-decay");
    for (const auto& cfg : all) CHECK_NOTHROW(cfg.validate());

    const auto h = builtin_hyperbolic_decay();
    const auto ic = resolve_initial_conditions(h);
    const auto ex = exact_sample(h, 0.0);
    CHECK(ic.eps == ex.eps);
    CHECK(ic.deps == ex.deps);
    CHECK(resolved_reference_frequency(h) == doctest::Approx(h.mode.omega0));
    CHECK(resolved_reference_frequency(builtin_stationary_conductive()) == doctest::Approx(std::sqrt(0.99)));
}

TEST_CASE("builtin battery passes and tight tolerance fails cleanly") {
    const auto report = check_suite(builtin_scenarios());
    CHECK(report.passed());
    CHECK(report.rows.size() >= 30);
    for (const auto& name : {"vacuum", "stationary-conductive", "hyperbolic-decay"}) {
        std::size_t n = 0;
        for (const auto& r : report.rows) n += r.scenario == name;
        CHECK(n >= 10);
    }
    CheckOptions tight;
    tight.tol_override = 1e-14;
    CheckReport strict;
    CHECK_NOTHROW(strict = check_suite(builtin_scenarios(), tight));
    CHECK(!strict.passed());
    CHECK(strict.failures() > 0);
    CHECK(contains(strict.format_table(), "FAIL"));
}
