#pragma once

// Scenario pipeline: integrate, evaluate every selected analysis, write CSV
// artifacts and summary.json.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonstatq/checks.hpp"
#include "nonstatq/envelope.hpp"
#include "nonstatq/field.hpp"
#include "nonstatq/quadratures.hpp"
#include "nonstatq/scenario.hpp"

namespace nonstatq {

struct DiscrepancyStats {
    double min = 0.0;
    double max = 0.0;
    double mean_abs = 0.0;
};

struct RunSummary {
    std::string scenario;
    double max_wronskian_drift = 0.0;
    double max_ermakov_residual = 0.0;
    double max_rs_residual_qp = 0.0;
    double max_rs_residual_field = 0.0;
    double max_bogoliubov_defect = 0.0;
    std::optional<double> max_exact_error;
    std::optional<double> max_normalization_defect;
    DiscrepancyStats energy_discrepancy;
    double wall_time_seconds = 0.0;
    std::map<std::string, std::string> checksums;  ///< file name -> sha256 hex
    std::optional<CheckReport> checks;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Formats a double with 17 significant digits, locale-independent; NaN as empty.
std::string format_number(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Writes the selected CSVs and summary.json into out_dir (created if missing).
RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace nonstatq
