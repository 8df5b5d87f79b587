#pragma once

// Experimental-vs-numerical displacement comparison, service-limit check,
// and report emission (JSON always, CSV and SVG on request).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpet/column.hpp"
#include "rpet/curve_io.hpp"
#include "rpet/svg.hpp"

namespace rpet {

struct ErrorMetrics {
    double experimental = 0.0;  // mm
    double numerical = 0.0;     // mm
    double absolute_error = 0.0;
    double relative_error_pct = 0.0;            // against experimental
    double relative_error_numerical_pct = 0.0;  // against numerical, audit only
};

/// DomainError when experimental is 0.
ErrorMetrics compare_displacement(double experimental, double numerical);

struct ServiceLimitResult {
    double measured_f_max = 0.0;  // N
    double required = 0.0;        // N
    bool pass = false;            // strictly greater than required
    double utilization = 0.0;     // required / measured
};

inline constexpr double kServiceLoad = 1000.0;  // N

ServiceLimitResult service_limit_check(double f_max, double required = kServiceLoad);

struct ComparisonInput {
    std::string config_label;  // as given in the input
    PrintConfig config;
    double experimental = 0.0;
    double numerical = 0.0;
    std::optional<double> published_absolute;
    std::optional<double> published_relative_pct;
};

/// Allowed gap between a published value and its recomputation.
inline constexpr double kAbsoluteDiscrepancy = 1e-3;  // mm
inline constexpr double kRelativeDiscrepancy = 5e-3;  // percentage points

struct ComparisonRow {
    ComparisonInput input;
    ErrorMetrics metrics;
    bool duplicate = false;  // another row maps to the same canonical class
    bool absolute_discrepancy = false;
    bool relative_discrepancy = false;
};

using ComparisonTable = std::vector<ComparisonRow>;

/// Rows ordered by canonical configuration rank, input order among ties.
ComparisonTable build_comparison_table(const std::vector<ComparisonInput>& rows);

/// Header `config,experimental_mm,numerical_mm`, optionally followed by
/// `published_abs_mm` and `published_rel_pct`.
std::vector<ComparisonInput> parse_comparison_csv(std::string_view text);
std::string format_comparison_csv(const ComparisonTable& table);

struct NamedServiceLimit {
    std::string label;
    ServiceLimitResult result;
};

struct Report {
    Provenance provenance;
    std::vector<ConfigAggregate> properties;
    ComparisonTable comparison;
    std::optional<SafetyReport> safety;
    std::vector<NamedServiceLimit> service_limits;
    std::vector<Plot> plots;
};

struct RenderOptions {
    bool csv = false;
    bool svg = false;
};

/// report.json always; comparison.csv and properties.csv with `csv`; one
/// <plot.name>.svg per plot with `svg`.  Contents depend only on `report`.
/// Returns the files written.
std::vector<std::filesystem::path> render_report(const Report& report, const std::filesystem::path& dir,
                                                 const RenderOptions& opts = {});

std::string format_report_json(const Report& report);

/// Timestamp and host data kept apart from the reproducible outputs.
void write_run_sidecar(const std::filesystem::path& dir, const Provenance& extra = {});

}  // namespace rpet
