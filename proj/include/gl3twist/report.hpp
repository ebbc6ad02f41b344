#pragma once

/**
 * @file report.hpp
 * @brief Check records and their CSV/JSON serialization.
 *
 * CSV columns: check,params,value,reference,residual,tolerance,fitted_constant,pass.
 * Numbers are written with 17 significant digits; timings go to JSON only,
 * so identical inputs give byte-identical CSV files.
 */

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gl3twist {

inline constexpr int kReportSchemaVersion = 1;

struct CheckRecord {
    /// "module.operation", e.g. "pipeline.delta_eval".
    std::string check;
    /// "key=value;key=value".
    std::string params;
    double value = 0.0;
    double reference = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    /// Observed constant of a bound check, when the check is one.
    std::optional<double> fitted_constant;
    bool pass = false;
};

/// PASS/FAIL line naming the operation, parameters, residual and tolerance.
std::string summary_line(const CheckRecord& r);

struct Report {
    std::string subcommand;
    /// Grid and tolerance settings in a fixed order; these define the hash.
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<CheckRecord> checks;
    std::vector<std::pair<std::string, double>> timings;

    bool all_pass() const;
    /// FNV-1a 64 of the subcommand and config, as 16 hex digits.
    std::string grid_hash() const;
    std::string stem() const { return subcommand + "-" + grid_hash(); }

    void write_csv(std::ostream& out) const;
    std::string json_text() const;
    static Report parse_json(std::string_view text);

    /// Writes <stem>.csv and <stem>.json into dir (created if missing).
    std::pair<std::filesystem::path, std::filesystem::path> write(const std::filesystem::path& dir) const;
};

std::string fnv1a64_hex(std::string_view bytes);
/// %.17g, with nan and inf spelled out.
std::string format_number(double x);

}  // namespace gl3twist
