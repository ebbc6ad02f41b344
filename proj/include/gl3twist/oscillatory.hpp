#pragma once

/**
 * @file oscillatory.hpp
 * @brief Oscillatory integrals: U-dagger transforms and their stationary
 *        phase expansions, the generic second-derivative stationary phase
 *        with error budgets, the logarithmic partition {W_J}, and the
 *        composite integrals J**, J_1 and I* with their error envelopes.
 */

#include "gl3twist/bump.hpp"
#include "gl3twist/quadrature.hpp"
#include "gl3twist/special.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace gl3twist {

/// U-dagger(r, s) = integral of U(x) e(-r x) x^{s-1} dx by quadrature.
cplx u_dagger(const BumpFunction& U, double r, cplx s, double tol = 1e-13);

/// Stationary-phase main term of U-dagger(r, s). Order 1 uses U(x0);
/// order 5 uses U*(x0) = x0^{1-sigma} sum_{n<=5} p_n(x0). Returns 0 when
/// x0 = beta/(2 pi r) is not positive. Order 5 throws std::domain_error
/// unless x0 lies in [a/2, 2b].
cplx u_dagger_main(const BumpFunction& U, double r, cplx s, int order);

/// U*(x0) with sigma = Re s, beta = Im s and r = beta/(2 pi x0).
cplx u_star(const BumpFunction& U, double x0, cplx s);

/// g(v) e(f(v)) with f, g given on jets so that every derivative is exact.
struct OscillatoryIntegrand {
    std::function<Jet(const Jet&)> phase;
    std::function<Jet(const Jet&)> amplitude;
    double theta_f = 1.0;
    double omega_f = 1.0;
    double omega_g = 1.0;
    std::optional<double> v0;
};

enum class StationaryBranch { NoStationaryPoint, StationaryPoint };

struct StationaryPhaseResult {
    cplx value;
    double error_budget;
    StationaryBranch branch;
    double v0 = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
};

/// Raised when the sampled scale hypotheses fail; the budget is not valid.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Implied constant used when sampling the scale hypotheses.
inline constexpr double kHypothesisConstant = 10.0;

/// Second-derivative stationary phase over [a,b] with its error budget.
StationaryPhaseResult stationary_phase(const OscillatoryIntegrand& integrand, double a, double b);

/// Direct quadrature of the same integrand.
cplx integrate_integrand(const OscillatoryIntegrand& integrand, double a, double b, double tol = 1e-12);

/// Piece of the smooth partition with its reference point J.
struct PartitionPiece {
    double J;
    BumpFunction weight;
};

/// Geometry of the partition: pieces rise over a factor lambda and start
/// every factor rho, so supports are [J, rho lambda J] with rho lambda <= 4/3.
inline constexpr double kPartitionLambda = 1.1;
inline constexpr double kPartitionRho = 1.2;

/// W_0 on [-1,1] plus mirrored pieces; sums to one on [-limit, limit].
std::vector<PartitionPiece> partition_WJ(double limit);

/// Parameters of the integrals J**, J_1 and I*.
struct JContext {
    double N = 1e4;
    double K = 10;
    double t = 50;
    i64 M1 = 3;
    i64 M2 = 5;
    i64 a = 1;
    double zeta_lo = 0.0;
    double zeta_hi = 1.0;
    BumpFunction V = BumpFunction::V();
    BumpFunction U = BumpFunction::U();
    /// Constant of the main term; defaults to the stationary phase value.
    std::optional<cplx> c3;
    double rel_tol = 1e-9;

    i64 M() const { return M1 * M2; }
};

/// (2 pi e)^{3/2} e^{i pi/4}.
cplx analytic_c3();

/// J**(q, m, tau) by nested quadrature.
cplx J_double(i64 q, i64 m, double tau, const JContext& ctx);

/// J_1(q, m, tau); throws std::invalid_argument for m = 0 or t + tau <= 0.
cplx J_main(i64 q, i64 m, double tau, const JContext& ctx);
/// J_1 with unit constant.
cplx J_main_shape(i64 q, i64 m, double tau, const JContext& ctx);
/// Stationary value y0 = (t + tau) q M / (-2 pi N m).
double J_stationary_point(i64 q, i64 m, double tau, const JContext& ctx);

/// Error envelope of J** - J_1:
/// t^{-1/2} K^{-3/2} min(1, 10K/|tau|) + N^{1/2} t^{-1/2} K^{-5/2} M1^{-1/2} C^{-1}.
double bound_B(double C, double tau, const JContext& ctx);

/// Parameters of I*(n2) beyond those of J.
struct IStarContext {
    JContext base;
    i64 q = 1, m = -1, a = 1;
    i64 qprime = 1, mprime = -1, aprime = 1;
    double L = 1;
    double C = 1;
    BumpFunction WJ = BumpFunction::piece({});
    int sign = -1;
    ArchimedeanParams arch = ArchimedeanParams::spherical({0.0, 0.0, 0.0});
    BumpFunction W = BumpFunction::W();
};

/// Precomputed tau-quadrature of J_{1,J,pm}(q, m, y) =
/// (1/2pi) int (N y/(q^3 M1^3))^{-i tau} gamma_pm(-1/2 + i tau) J_1(q,m,tau) W_J(tau) dtau.
class JStarTable {
public:
    JStarTable(const JContext& ctx, i64 q, i64 m, const BumpFunction& WJ, int sign,
               const ArchimedeanParams& arch, double tol = 1e-11);
    cplx operator()(double y) const;
    std::size_t nodes() const { return tau_.size(); }
    /// Phase rate bound (cycles per unit tau) used for panel sizing.
    double max_log_scale() const { return log_scale_; }

private:
    void build(int panels);
    JContext ctx_;
    i64 q_, m_;
    BumpFunction wj_;
    int sign_;
    ArchimedeanParams arch_;
    double lo_ = 0, hi_ = 0;
    double log_base_ = 0;  // log(N/(q^3 M1^3))
    double log_scale_ = 0;
    std::vector<double> tau_;
    std::vector<cplx> coef_;
};

/// I*(n2) = int W(y) J(q,m,Ly) conj J(q',m',Ly) e(-n2 L y/(q q' M1)) dy/y.
cplx I_star(i64 n2, const IStarContext& ctx);
cplx I_star(i64 n2, const IStarContext& ctx, const JStarTable& first, const JStarTable& second);

/// envelope B*(n2).
double bound_B_star(i64 n2, const IStarContext& ctx);
/// |n2| beyond which I*(n2) is negligible: multiplier * C sqrt(N K M1)/L.
double I_star_threshold(const IStarContext& ctx, double multiplier = 4.0);

}  // namespace gl3twist
