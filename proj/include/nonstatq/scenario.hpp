#pragma once

// Declarative scenario description (TOML) for the command-line driver.
//
//   name = "stationary-conductive"
//   [constants]           hbar, eps0, c
//   [medium]              epsilon, mu, sigma: number or {kind = "...", ...}
//   [mode]                omega0, volume, polarization
//   [state]               kind = "coherent" (alpha = [re, im]) | "fock" (n)
//   [initial_conditions]  policy = "glauber" | "explicit" (eps, deps) | "exact"
//   [time]                t_start, t_end, n_points
//   [tolerances]          ode_abs, ode_rel, check, renormalize_wronskian
//   [outputs]             select, field_x, wavefunction_times, exact,
//                         choi_yeon_M0, reference_frequency
//   [conventions]         include_eps_dot_in_gamma, e_mean_half_lambda
//
// Profile tables by kind:
//   constant     value
//   exponential  amplitude, rate
//   linear_ramp  start, slope
//   sinusoidal   offset, amplitude, angular_frequency, phase
//   power        scale, rate, exponent
//   tabulated    times, values, order, fd_step

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nonstatq/envelope.hpp"
#include "nonstatq/medium.hpp"
#include "nonstatq/wavefunction.hpp"

namespace nonstatq {

struct ProfileSpec {
    ProfileKind kind = ProfileKind::constant;
    std::map<std::string, double> params{{"value", 0.0}};
    std::vector<double> times;   ///< tabulated only
    std::vector<double> values;  ///< tabulated only

    static ProfileSpec constant(double value);
    TimeFunction build() const;
};

enum class IcPolicy { glauber, explicit_values, exact };
enum class ExactCase { stationary, hyperbolic };
enum class Output { envelope, quadratures, field, energy, wavefunction, choi_yeon, checks };

const char* to_string(IcPolicy p);
const char* to_string(ExactCase c);
const char* to_string(Output o);

struct Conventions {
    bool include_eps_dot_in_gamma = true;
    bool e_mean_half_lambda = false;
};

struct ScenarioConfig {
    std::string name = "scenario";
    Constants constants;
    ModeSpec mode;
    ProfileSpec permittivity = ProfileSpec::constant(1.0);
    ProfileSpec permeability = ProfileSpec::constant(1.0);
    ProfileSpec conductivity = ProfileSpec::constant(0.0);
    Conventions conventions;

    QuantumState state = QuantumState::coherent({1.0, 0.0});
    IcPolicy ic_policy = IcPolicy::glauber;
    InitialConditions explicit_ic{{1.0, 0.0}, {0.0, 1.0}};

    double t_start = 0.0;
    double t_end = 10.0;
    std::size_t n_points = 1001;

    double ode_abs = 1e-9;
    double ode_rel = 1e-9;
    double check_tol = 1e-6;
    bool renormalize_wronskian = false;

    std::set<Output> outputs{Output::checks};
    std::vector<double> field_x{0.0};
    std::vector<double> wavefunction_times;
    std::optional<ExactCase> exact;
    double choi_yeon_M0 = 1.0;
    /// Frequency of the static photon operators; Omega(t_start) when empty.
    std::optional<double> reference_frequency;

    MediumProfile medium() const;
    IntegratorOptions integrator_options() const;
    std::vector<double> grid() const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

ScenarioConfig parse_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_string(std::string_view text, std::string_view source = "<string>");

/// Vacuum, stationary conductive (sigma = 0.2) and hyperbolic decay
/// (mu = (1 + t)^2, exact initial conditions).
ScenarioConfig builtin_vacuum();
ScenarioConfig builtin_stationary_conductive();
ScenarioConfig builtin_hyperbolic_decay();
std::vector<ScenarioConfig> builtin_scenarios();

/// Closest candidate by edit distance, if within distance 2.
std::optional<std::string> did_you_mean(std::string_view key, const std::vector<std::string>& candidates);

/// Initial conditions implied by the policy.
InitialConditions resolve_initial_conditions(const ScenarioConfig& cfg);

/// Exact envelope sample of the configured closed-form case at time t, with
/// the medium fields taken from the profile.
EnvelopeSample exact_sample(const ScenarioConfig& cfg, double t);

double resolved_reference_frequency(const ScenarioConfig& cfg);

}  // namespace nonstatq
