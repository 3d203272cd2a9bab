// nonstatq: scenario runner, invariant battery and closed-form envelopes.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or usage
// error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nonstatq/checks.hpp"
#include "nonstatq/errors.hpp"
#include "nonstatq/run.hpp"
#include "nonstatq/scenario.hpp"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("nonstatq");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("NONSTATQ_LOG")) {
        const auto level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off") {
            spdlog::warn("NONSTATQ_LOG='{}' is not a log level; keeping 'warn'", env);
        } else {
            spdlog::set_level(level);
        }
    }
}

int cmd_run(const std::string& config, const std::string& out) {
    const auto cfg = nonstatq::parse_scenario(config);
    const auto summary = nonstatq::run_scenario(cfg, out);
    for (const auto& f : summary.failures) std::cerr << "FAIL " << f << "\n";
    std::cout << cfg.name << ": " << (summary.passed() ? "pass" : "fail") << " (" << out
              << "/summary.json)\n";
    return summary.passed() ? exit_pass : exit_check_failed;
}

int cmd_check(bool builtin, const std::vector<std::string>& configs, double tol) {
    std::vector<nonstatq::ScenarioConfig> scenarios;
    if (builtin || configs.empty()) scenarios = nonstatq::builtin_scenarios();
    for (const auto& path : configs) scenarios.push_back(nonstatq::parse_scenario(path));
    nonstatq::CheckOptions options;
    if (tol > 0.0) options.tol_override = tol;
    const auto report = nonstatq::check_suite(scenarios, options);
    std::cout << report.format_table();
    return report.passed() ? exit_pass : exit_check_failed;
}

int cmd_exact(const std::string& which, double omega0, double t_end, std::size_t n_points) {
    if (!(omega0 > 0.0)) throw nonstatq::ConfigError("--omega0: must be positive");
    if (!(t_end > 0.0)) throw nonstatq::ConfigError("--t-end: must be positive");
    if (n_points < 2) throw nonstatq::ConfigError("--n-points: must be at least 2");
    std::cout << "t,re_eps,im_eps,re_deps,im_deps,rho,phi\r\n";
    for (double t : nonstatq::linspace(0.0, t_end, n_points)) {
        const auto s = which == "stationary" ? nonstatq::stationary_envelope(omega0 * omega0, t)
                                             : nonstatq::hyperbolic_decay_envelope(omega0, t);
        std::cout << nonstatq::format_number(t) << ',' << nonstatq::format_number(s.eps.real()) << ','
                  << nonstatq::format_number(s.eps.imag()) << ',' << nonstatq::format_number(s.deps.real())
                  << ',' << nonstatq::format_number(s.deps.imag()) << ','
                  << nonstatq::format_number(s.rho) << ',' << nonstatq::format_number(s.phase) << "\r\n";
    }
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Quantized single-mode fields in time-dependent linear media"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run a scenario and write CSV/JSON artifacts");
    run->add_option("config", config, "Scenario TOML file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();

    bool builtin = false;
    std::vector<std::string> configs;
    double tol = 0.0;
    auto* check = app.add_subcommand("check", "Evaluate the invariant battery");
    check->add_flag("--builtin", builtin, "Include the three builtin media (default without --config)");
    check->add_option("--config", configs, "Scenario TOML file(s)")->check(CLI::ExistingFile);
    check->add_option("--tol", tol, "Override every residual threshold")->check(CLI::PositiveNumber);

    std::string which;
    double omega0 = 1.0;
    double t_end = 10.0;
    std::size_t n_points = 101;
    auto* exact = app.add_subcommand("exact", "Print a closed-form envelope as CSV");
    exact->add_option("--case", which, "stationary or hyperbolic")
        ->required()
        ->check(CLI::IsMember({"stationary", "hyperbolic"}));
    exact->add_option("--omega0", omega0, "Mode frequency")->required();
    exact->add_option("--t-end", t_end, "Final time")->required();
    exact->add_option("--n-points", n_points, "Number of samples on [0, t_end]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }

    try {
        if (*run) return cmd_run(config, out_dir);
        if (*check) return cmd_check(builtin, configs, tol);
        if (*exact) return cmd_exact(which, omega0, t_end, n_points);
    } catch (const nonstatq::ConfigError& e) {
        spdlog::error("configuration error: {}", e.what());
        return exit_config;
    } catch (const nonstatq::Error& e) {
        spdlog::error("numerical failure: {}", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return exit_numerical;
    }
    return exit_config;
}
