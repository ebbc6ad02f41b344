#pragma once

/**
 * @file harness.hpp
 * @brief Verification harnesses behind the CLI subcommands. Each one runs a
 *        grid of checks and returns a Report whose config lists every
 *        setting that affects the numbers (the worker count does not).
 *
 * Invalid settings throw std::invalid_argument or BoxError.
 */

#include "gl3twist/arith.hpp"
#include "gl3twist/gl3.hpp"
#include "gl3twist/report.hpp"
#include "gl3twist/special.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gl3twist {

/// Smallest tolerance a check may be run with.
inline constexpr double kToleranceFloor = 1e-15;

/// "d3" or "sym2"; shared per process.
std::shared_ptr<const CoefficientOracle> named_oracle(const std::string& name);

struct DeltaSettings {
    i64 nmax = 50;
    std::vector<double> Q{1.0, 2.5, 7.0, 20.0};
    double tol = 1e-9;
};
Report delta_verify(const DeltaSettings& s);

struct CharsumSettings {
    i64 M1 = 3;
    i64 M2 = 5;
    i64 qmax = 12;
    double tol = 1e-9;
    double gauss_tol = 1e-10;
    /// Cap on the C* constants; their q-range is min(qmax, 10).
    double cstar_cap = 4.0;
};
Report charsum_verify(const CharsumSettings& s);

struct GammaSettings {
    std::vector<double> sigma{-0.5, 0.0, 0.5};
    double exponent_tol = 0.05;
    double slope_tol = 0.15;
    double cap = 10.0;
    PsiNormalization normalization = PsiNormalization::TwoE;
};
Report gamma_verify(const GammaSettings& s);

struct StationarySettings {
    std::vector<double> r{10.0, 20.0, 40.0, 80.0, 160.0};
    /// "U", "W" or "V".
    std::string weight = "U";
    double order1_tol = 0.2;
    double order5_tol = 0.3;
    std::vector<double> T{1e2, 1e3, 1e4};
    double cap = 10.0;
};
Report stationary_verify(const StationarySettings& s);

struct VoronoiSettings {
    std::vector<std::pair<i64, i64>> cases{{1, 1}, {2, 1}, {3, 1}, {3, 2}};  // (q, a)
    std::vector<double> N{50.0, 100.0};
    /// Dual n2 cutoff; 0 picks the length from the tail estimate.
    i64 max_terms = 0;
    double tol = 1e-3;
    double sharpness = 4.0;
};
Report voronoi_verify(const VoronoiSettings& s);

struct PoissonSettings {
    double scale = 1000.0;
    double tol = 1e-8;
};
Report poisson_verify(const PoissonSettings& s);

struct RecomposeSettings {
    std::vector<double> N{500.0, 1000.0, 2000.0};
    std::vector<double> t{5.0, 50.0};
    std::vector<double> K{5.0, 10.0};
    i64 M1 = 3;
    i64 M2 = 5;
    std::string oracle = "d3";
    double tol = 1e-6;
    unsigned workers = 1;
};
Report recompose_verify(const RecomposeSettings& s);

struct EnvelopeScanSettings {
    std::string oracle = "sym2";
    std::vector<std::pair<i64, i64>> moduli{{5, 3}, {11, 3}, {7, 5}};
    std::vector<double> t{10.0, 50.0, 200.0};
    std::vector<double> N{1e3, 1e4};
    double cap = 10.0;
    unsigned workers = 1;
};
Report s_scan(const EnvelopeScanSettings& s);

struct ExponentScanSettings {
    std::string oracle = "d3";
    std::vector<std::pair<i64, i64>> moduli{{5, 3}, {7, 3}, {11, 3}, {7, 5}};
    std::vector<double> t{10.0, 20.0, 50.0, 100.0, 200.0};
    double delta = 0.0;
    double cap = 10.0;
    unsigned workers = 1;
};
Report exponent_scan_report(const ExponentScanSettings& s);

/// All reports in dir (files *.json not starting with "report-"), in name order.
std::vector<Report> load_reports(const std::string& dir);
/// One report whose checks are the concatenation of the inputs.
Report aggregate_reports(const std::vector<Report>& reports);

}  // namespace gl3twist
