#pragma once

/**
 * @file gl3.hpp
 * @brief GL(3) Fourier coefficient oracles, the Rankin-Selberg mean square,
 *        the Voronoi transform Phi^pm by contour quadrature and a two-sided
 *        check of the GL(3) Voronoi formula.
 *
 * Coefficients are Schur polynomials in the Satake parameters:
 *     lambda(p^a, p^b) = s_{(a+b, a, 0)}(x1, x2, x3), so lambda(1, p^b) = h_b,
 * extended multiplicatively. Each prime is described by the elementary
 * symmetric functions (e1, e2, e3) of its Satake triple.
 */

#include "gl3twist/bump.hpp"
#include "gl3twist/special.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gl3twist {

/// tau(1..n_max) from q prod (1 - q^n)^24; index 0 is unused.
std::vector<__int128> ramanujan_tau_table(i64 n_max);

/// Ramanujan tau for n <= 2*10^4 (cached table; throws beyond).
__int128 ramanujan_tau(i64 n);

class CoefficientOracle {
public:
    using Elementary = std::array<double, 3>;

    /// mu = (0,0,0) and lambda(1, n) = d_3(n).
    static CoefficientOracle d3();
    /// Symmetric square of the discriminant form, primes up to prime_bound.
    static CoefficientOracle sym2_delta(i64 prime_bound = 20000);
    /// Tabulated coefficients, for instance read back with import_table.
    static CoefficientOracle from_table(std::string name, ArchimedeanParams arch,
                                        std::map<std::pair<i64, i64>, double> table, bool cuspidal);

    const std::string& name() const { return name_; }
    const ArchimedeanParams& archimedean() const { return arch_; }
    bool cuspidal() const { return cuspidal_; }
    /// Largest prime for which Satake data is available (0 when tabulated).
    i64 prime_bound() const { return prime_bound_; }
    /// True once a Voronoi calibration has fixed the root-of-unity convention.
    bool normalization_calibrated() const { return calibrated_; }
    void mark_calibrated() { calibrated_ = true; }

    /// (e1, e2, e3) of the Satake triple at p; throws std::out_of_range
    /// for tabulated oracles and primes beyond the bound.
    Elementary elementary(i64 p) const;

    /// lambda(n1, n2); throws std::out_of_range when not available.
    double operator()(i64 n1, i64 n2) const;

private:
    CoefficientOracle() = default;
    double prime_power(i64 p, int a, int b) const;

    std::string name_;
    ArchimedeanParams arch_;
    bool cuspidal_ = false;
    bool calibrated_ = false;
    i64 prime_bound_ = 0;
    std::function<Elementary(i64)> satake_;
    std::map<std::pair<i64, i64>, double> table_;
};

/// s_{(a+b, a, 0)} from elementary symmetric functions by Jacobi-Trudi.
double schur_two_row(const CoefficientOracle::Elementary& e, int a, int b);

/// Writes rows "n1 n2 value" for all n1^2 n2 <= limit.
void export_table(const CoefficientOracle& oracle, i64 limit, std::ostream& out);
/// Reads rows "n1 n2 value"; blank lines and lines starting with '#' are skipped.
std::map<std::pair<i64, i64>, double> import_table(std::istream& in);

/// sum_{n1^2 n2 <= x} lambda(n1,n2)^2 / x^{1.05}; x >= 10.
double rankin_selberg_ratio(const CoefficientOracle& oracle, double x);

/// phi(y) = base(y / N), supported in [N lower, N upper].
struct ScaledWeight {
    BumpFunction base;
    double N = 1.0;
    double operator()(double y) const { return base(y / N); }
};

struct PhiOptions {
    /// Abscissa of the contour; must lie right of every pole of gamma_pm.
    double sigma = -0.5;
    /// Relative size of the integrand at which the contour is cut.
    double truncation = 1e-14;
    /// Step of the trapezoid rule along the contour.
    double step = 0.05;
    /// Budget on |Im s| before reporting failure.
    double max_height = 2e4;
};

/// Phi^pm(x) = (1/2 pi i) int_(sigma) x^{-s} gamma_pm(s) phi~(-s) ds.
/// The Mellin transform of the weight is tabulated once along the contour;
/// each evaluation is then a trapezoid sum.
class PhiTransformer {
public:
    PhiTransformer(ScaledWeight phi, int sign, ArchimedeanParams arch, PhiOptions opt = {});

    cplx operator()(double x) const;
    double sigma() const { return opt_.sigma; }
    double height() const { return height_; }
    std::size_t nodes() const { return weight_.size(); }

private:
    ScaledWeight phi_;
    int sign_;
    ArchimedeanParams arch_;
    PhiOptions opt_;
    double height_ = 0.0;
    double first_ = 0.0;  // height of the lowest node
    std::vector<cplx> weight_;  // gamma(s_k) V~(-s_k) N^{-s_k}-free part, trapezoid weights included
};

/// One-off evaluation; builds a PhiTransformer.
cplx phi_transform(const ScaledWeight& phi, double x, int sign, const ArchimedeanParams& arch,
                   double sigma);

struct DualTerm {
    i64 n1;
    i64 n2;
    int sign;
    cplx contribution;
};

struct VoronoiReport {
    cplx lhs;
    cplx rhs;
    std::vector<DualTerm> terms;
    /// Estimated size of the omitted dual terms.
    double truncation_bound = 0.0;
    i64 dual_cutoff = 0;
    double relative_error(cplx omega = 1.0) const { return std::abs(lhs - omega * rhs) / std::abs(lhs); }
};

/// Both sides of the Voronoi formula for sum lambda(1,n) e(an/q) phi(n).
/// dual_cutoff = 0 chooses the smallest n2 cutoff whose estimated tail is
/// below 1e-4 |lhs| (searching up to max_cutoff). Rejects non-cuspidal oracles.
VoronoiReport voronoi_check(const CoefficientOracle& oracle, i64 a, i64 q, const ScaledWeight& phi,
                            i64 dual_cutoff = 0, i64 max_cutoff = 400, PhiOptions opt = {});

/// Unimodular omega = (lhs/rhs)/|lhs/rhs|, and |lhs/rhs| for the check |omega| = 1.
struct Calibration {
    cplx omega;
    double modulus;
};
Calibration calibrate(const VoronoiReport& report);

}  // namespace gl3twist
