#pragma once

// Named invariant battery evaluated per scenario.

#include <optional>
#include <string>
#include <vector>

#include "nonstatq/scenario.hpp"

namespace nonstatq {

struct CheckRow {
    enum class Compare { at_most, at_least };

    std::string scenario;
    std::string invariant;
    double measured = 0.0;
    double threshold = 0.0;
    Compare compare = Compare::at_most;
    bool passed = false;
};

struct CheckReport {
    std::vector<CheckRow> rows;

    bool passed() const;
    std::size_t failures() const;
    /// Fixed-width table, one line per row, plus a closing count line.
    std::string format_table() const;
    void append(const CheckReport& other);
};

struct CheckOptions {
    /// Replaces every upper-bound threshold; convergence-order bounds are kept.
    std::optional<double> tol_override;
};

CheckReport check_scenario(const ScenarioConfig& cfg, const CheckOptions& options = {});
CheckReport check_suite(const std::vector<ScenarioConfig>& scenarios, const CheckOptions& options = {});

}  // namespace nonstatq
