#pragma once

/**
 * @file pipeline.hpp
 * @brief The smoothed sum S(N), its delta-method expansion with the
 *        conductor-lowering v-average, the flat/sharp and S0/S1 splits,
 *        Poisson identity harnesses, the choice of K, exponent scans and
 *        the d3 L-function oracle.
 *
 * Weights are fixed once: V = BumpFunction::V() on [1,2] for n and the
 * v-average, U = BumpFunction::U() for m.
 */

#include "gl3twist/characters.hpp"
#include "gl3twist/gl3.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gl3twist {

/// Raised when parameters leave the box an operation is valid in.
class BoxError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct ScanParams {
    double N = 1000.0;
    double t = 10.0;
    i64 M1 = 3;
    i64 M2 = 5;
    double K = 5.0;
    /// Target saving in the exponent 3/4 - delta.
    double delta = 0.0;
    std::shared_ptr<const CoefficientOracle> oracle;
    DirichletCharacter chi1{3, 1};
    DirichletCharacter chi2{5, 1};

    i64 M() const { return M1 * M2; }
    double Q() const;
    cplx chi(i64 n) const { return chi1(n) * chi2(n); }
    /// "N=...;t=...;..." in a fixed format, used in reports and hashes.
    std::string describe() const;
};

/// Parameters with characters chi_i of the given indices modulo M1, M2.
ScanParams make_scan_params(double N, double t, i64 M1, i64 M2, double K,
                            std::shared_ptr<const CoefficientOracle> oracle, i64 index1 = 1, i64 index2 = 1);

/// Project-wide box: N <= 1e5, t <= 200, K <= 50, M1 != M2 in {3,5,7,11,13}.
void require_desk_box(const ScanParams& p);
/// Box of the directly summed identities: desk box with N <= 2000, K <= 10.
void require_small_box(const ScanParams& p);

/// sum over (a,q) of (1/aq) e(n abar/q) int_0^1 e(-n zeta/(aq)) d zeta, the
/// zeta-integral in closed form. Throws std::invalid_argument for Q < 1.
cplx delta_component(i64 n, double Q);
/// 2 Re delta_component(n, Q), which is 1 for n = 0 and 0 otherwise.
double delta_eval(i64 n, double Q);

/// sum over n of lambda(1,n) chi(n) n^{-it} V(n/N), compensated.
cplx compute_SN(const ScanParams& p);
/// sum over n of |lambda(1,n)| V(n/N).
double sn_trivial_bound(const ScanParams& p);

/// The delta expansion of S(N). Built once per parameter set: the v-averaged
/// correlation C(d) = (1/K) int V(v/K) sum_n A_v(n) B_v(n - d) dv with
/// A_v(n) = lambda(1,n) n^{iv} V(n/N), B_v(m) = chi(m) m^{-i(t+v)} U(m/N)
/// is computed by FFT; each piece is then a kernel summed against C(d).
class CircleExpansion {
public:
    explicit CircleExpansion(const ScanParams& p);

    const ScanParams& params() const { return p_; }
    /// S(N) from the correlation with the delta symbol replaced by d = 0.
    cplx diagonal() const;
    cplx s_plus() const;
    cplx s_minus() const;
    /// Contributions to S+ from M1 | q and (M1, q) = 1.
    cplx s_flat() const;
    cplx s_sharp() const;
    /// S-sharp with the congruence M1 | n - m detected by additive
    /// characters modulo M1: the b = 0 term and the (b, M1) = 1 terms.
    cplx s0() const;
    cplx s1() const;

    i64 d_min() const { return d_min_; }
    i64 d_max() const { return d_max_; }
    /// C(d) for d_min <= d <= d_max.
    cplx correlation(i64 d) const { return corr_.at(static_cast<std::size_t>(d_max_ - d)); }
    int v_nodes() const { return v_nodes_; }

private:
    using Kernel = std::function<cplx(i64 d)>;
    cplx against(const Kernel& kernel, bool multiples_of_M1) const;
    std::vector<FareyPair> pairs(bool flat) const;

    ScanParams p_;
    i64 d_min_ = 0, d_max_ = 0;
    int v_nodes_ = 0;
    std::vector<cplx> corr_;  // index d_max - d
};

struct RecompositionResult {
    cplx direct;
    cplx s_plus;
    cplx s_minus;
    /// |S+ + S- - S(N)| / |S(N)|.
    double residual;
};
/// Small box only.
RecompositionResult recomposition_check(const ScanParams& p);

/// Desk box; built through CircleExpansion.
cplx s_flat_direct(const ScanParams& p);
cplx s_sharp_direct(const ScanParams& p);

struct SplitResult {
    cplx s_sharp;
    cplx s0;
    cplx s1;
    /// |S0 + S1 - S-sharp| / |S-sharp|.
    double residual;
};
/// Small box only.
SplitResult s0_s1_split_check(const ScanParams& p);

/// Input of the Poisson harness: sum over m of periodic(m) smooth(m/scale).
struct PoissonInput {
    std::function<cplx(i64)> periodic;
    i64 modulus = 1;
    std::function<cplx(double)> smooth;
    double lower = 0.5;
    double upper = 2.5;
    double scale = 1000.0;
    /// |d/dy arg smooth(y)| / 2 pi bound; dual frequencies up to this are always kept.
    double bandwidth = 0.0;
};

struct PoissonResult {
    cplx direct;
    cplx dual;
    std::vector<std::pair<i64, cplx>> dual_terms;
    /// sum of |periodic(m) smooth(m/scale)|, the scale of both sides.
    double mass;
    /// |direct - dual| / mass, or the absolute gap when the mass is zero.
    double residual;
};

/// Raised when the dual sum does not decay within the frequency budget.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (scale/c) sum_k [sum_{x mod c} periodic(x) e(kx/c)] smooth^(k scale/c) against
/// the direct sum, with smooth^(xi) = int smooth(y) e(-xi y) dy. Requires c <= 1e4.
PoissonResult poisson_check(const PoissonInput& in, double dual_tol = 1e-12);

/// The m-sum after the flat rewriting: chi(m) e(-abar m/(q M1^2)) m^{-i(t+v)}
/// U(m/N) e(m zeta/(a q M1^2)) over m = n mod M1, abar modulo q M1.
struct FlatPoissonCase {
    i64 a = 4;
    i64 q = 1;
    i64 n = 1;
    double zeta = 0.3;
    double t = 10.0;
    double v = 5.0;
    double N = 1000.0;
    DirichletCharacter chi1{3, 1};
    DirichletCharacter chi2{5, 1};
};

struct FlatPoissonResult {
    PoissonResult generic;
    /// N^{1-i(t+v)}/(q M1^2 M2) sum_m E(a,m,q) U-dagger(N(ma - zeta M2)/(a q M1^2 M2), 1 - i(t+v)).
    cplx expansion;
    /// Largest |generic term - expansion term| relative to the mass.
    double termwise_residual;
};
FlatPoissonResult flat_poisson_check(const FlatPoissonCase& c);

struct KChoice {
    double K;
    double flat_branch;   // N^{1/4}/M1
    double sharp_branch;  // (Mt)^{6/5}/(N M1)^{3/5}
    /// K < min(t, N M1/M^2).
    bool flat_window;
    /// (Mt)^{6/5}/(N M1)^{3/5} <= K < min(t, (Mt)^2/(N M1), N M1/M^2).
    bool sharp_window;
};
KChoice choose_K(double N, i64 M, double t, i64 M1);

struct M1Range {
    double lower;
    double upper;
    bool inside;
};
/// Range of M1 in which the exponent saving delta is admissible (epsilon = 0).
M1Range admissible_M1_range(i64 M1, i64 M2, double t, double delta);

struct EnvelopeRow {
    ScanParams params;
    cplx s_flat;
    cplx s_sharp;
    /// |S-flat| M1^{3/2} / (N sqrt(Mt)).
    double flat_constant;
    /// |S-sharp| over the branch of the sharp bound selected by N.
    double sharp_constant;
    /// 1: N^{5/8}(Mt)^{1/2}; 2: N^{1/5}(Mt)^{11/10}M1^{1/5}.
    int sharp_branch;
};

/// Envelope of the sharp bound and its branch at (N, M, t, M1).
std::pair<double, int> sharp_envelope(double N, i64 M, double t, i64 M1);

EnvelopeRow envelope_row(const ScanParams& p);

/// M in {15, 33, 35} with M1 the larger prime, t in {10, 50, 200},
/// N in {1e3, 1e4}, K = min(choose_K, 50).
std::vector<ScanParams> envelope_grid(std::shared_ptr<const CoefficientOracle> oracle);
/// Same construction over the given (M1, M2) pairs, heights and lengths.
std::vector<ScanParams> envelope_grid(std::shared_ptr<const CoefficientOracle> oracle,
                                     const std::vector<std::pair<i64, i64>>& moduli, const std::vector<double>& ts,
                                     const std::vector<double>& Ns);

struct ScanRow {
    ScanParams params;
    cplx S;
    double normalized;  // |S(N)| / sqrt(N)
    double envelope;    // (Mt)^{3/4 - delta}
    double seconds;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    /// Least-squares slope of log(|S|/sqrt N) against log(Mt).
    double fitted_exponent;
};

/// Rows in grid order; points are evaluated by the given number of workers.
ScanReport exponent_scan(const std::vector<ScanParams>& grid, unsigned workers = 1);

/// d3 oracle, M in {15, 21, 33, 35}, t in {10, 20, 50, 100, 200}, N = clamp((Mt)^{3/2}, 1e3, 1e5).
std::vector<ScanParams> exponent_grid(std::shared_ptr<const CoefficientOracle> oracle, double delta = 0.0);
std::vector<ScanParams> exponent_grid(std::shared_ptr<const CoefficientOracle> oracle,
                                     const std::vector<std::pair<i64, i64>>& moduli, const std::vector<double>& ts,
                                     double delta);

/// L(s, chi) for chi primitive modulo M from Hurwitz zeta values by Euler-Maclaurin.
cplx dirichlet_L(const ComposedCharacter& chi, cplx s);

struct LOracleResult {
    /// Approximate functional equation from the d3 coefficients.
    cplx afe;
    /// L(1/2 + it, chi)^3 from dirichlet_L.
    cplx reference;
    /// Dyadic block sums [2^k, 2^{k+1}) of the two smoothed sums.
    std::vector<cplx> blocks;
    i64 terms;
    double relative_error;
};

/// L(1/2+it, chi)^3 = sum d3(n) chi(n) n^{-s} V_s(n/M^{3/2})
///                   + eps^3 X(s) sum d3(n) chibar(n) n^{s-1} V_{1-s}(n/M^{3/2}),
/// with V_s(y) = (1/2 pi i) int_(1) y^{-u} G(u) gamma(s+u)/gamma(s) du/u and
/// G(u) = cos(pi u/40)^{-120}; gamma(s) = pi^{-3s/2} Gamma((s+kappa)/2)^3.
LOracleResult d3_L_oracle(const ComposedCharacter& chi, double t, const CoefficientOracle& d3);

}  // namespace gl3twist
