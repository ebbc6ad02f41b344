#include "gl3twist/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gl3twist {

namespace {

constexpr cplx kI{0.0, 1.0};

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

cplx u_dagger(const BumpFunction& U, double r, cplx s, double tol) {
    const double lo = std::max(U.lower(), 0.0), hi = U.upper();
    if (!(hi > lo)) return {0.0, 0.0};
    const double sr = s.real() - 1.0, beta = s.imag();
    QuadratureOptions o;
    o.abs_tol = tol;
    o.initial_panels = 4;
    auto g = [&](double x) { return U(x) * std::pow(x, sr); };
    auto f = [&](double x) { return -r * x + beta * std::log(x) / kTwoPi; };
    auto fp = [&](double x) { return -r + beta / (kTwoPi * x); };
    return integrate_oscillatory(g, f, fp, lo, hi, o).value;
}

cplx u_star(const BumpFunction& U, double x0, cplx s) {
    const double sigma = s.real(), beta = s.imag();
    const double r = beta / (kTwoPi * x0);
    const double h0 = -kTwoPi * r * x0 + beta * std::log(x0);
    const double h2 = -beta / (x0 * x0);
    constexpr int kOrder = 10;
    const Jet X = Jet::variable(kOrder, x0);
    const Jet d = X - x0;
    const Jet H = (-kTwoPi * r) * X + beta * log(X) - h0 - (0.5 * h2) * (d * d);
    const Jet G = U.eval(X) * pow(X, sigma - 1.0) * exp(kI * H);
    cplx sum{0.0, 0.0};
    cplx ratio{1.0, 0.0};
    const cplx step = kI / (2.0 * h2);
    for (int n = 0; n <= 5; ++n) {
        sum += ratio / factorial(n) * G.derivative(2 * n);
        ratio *= step;
    }
    return std::pow(x0, 1.0 - sigma) * sum;
}

cplx u_dagger_main(const BumpFunction& U, double r, cplx s, int order) {
    if (order != 1 && order != 5) throw std::invalid_argument("u_dagger_main: order must be 1 or 5");
    const double sigma = s.real(), beta = s.imag();
    if (r == 0.0 || beta == 0.0) throw std::invalid_argument("u_dagger_main: r and beta must be nonzero");
    const double x0 = beta / (kTwoPi * r);
    if (order == 5 && !(x0 >= U.lower() / 2 && x0 <= 2 * U.upper()))
        throw std::domain_error("u_dagger_main: x0 outside [a/2, 2b]");
    if (x0 <= 0.0) return {0.0, 0.0};
    const cplx pref = std::sqrt(kTwoPi) * unit_phase(0.125) / std::sqrt(cplx(-beta, 0.0)) * std::pow(x0, sigma) *
                      std::exp(kI * beta * (std::log(x0) - 1.0));
    const cplx weight = order == 1 ? cplx(U(x0)) : u_star(U, x0, s);
    return pref * weight;
}

// ---------------------------------------------------------------------------
// Stationary phase

namespace {

struct Samples {
    std::vector<double> v;
    std::vector<std::array<double, 5>> f;  // f..f''''
    std::vector<std::array<double, 3>> g;  // |g|, |g'|, |g''|
};

Samples sample(const OscillatoryIntegrand& integrand, double a, double b, int n) {
    Samples s;
    for (int i = 0; i <= n; ++i) {
        const double v = a + (b - a) * i / n;
        const Jet fj = integrand.phase(Jet::variable(4, v));
        const Jet gj = integrand.amplitude(Jet::variable(2, v));
        s.v.push_back(v);
        s.f.push_back({fj.derivative(0).real(), fj.derivative(1).real(), fj.derivative(2).real(),
                       fj.derivative(3).real(), fj.derivative(4).real()});
        s.g.push_back({std::abs(gj.derivative(0)), std::abs(gj.derivative(1)), std::abs(gj.derivative(2))});
    }
    return s;
}

double phase_slope(const OscillatoryIntegrand& integrand, double v) {
    return integrand.phase(Jet::variable(1, v)).derivative(1).real();
}

}  // namespace

StationaryPhaseResult stationary_phase(const OscillatoryIntegrand& integrand, double a, double b) {
    if (!(b > a)) throw std::invalid_argument("stationary_phase: empty interval");
    const double C = kHypothesisConstant;
    const double Tf = integrand.theta_f, Of = integrand.omega_f, Og = integrand.omega_g;
    if (!(Tf > 0 && Of > 0 && Og > 0)) throw std::invalid_argument("stationary_phase: scales must be positive");
    if (b - a > C * std::min(Tf, Of)) throw HypothesisError("stationary_phase: interval longer than the phase scales");

    const auto s = sample(integrand, a, b, 400);
    const int imax_needed = 4;
    for (std::size_t k = 0; k < s.v.size(); ++k) {
        for (int i = 2; i <= imax_needed; ++i)
            if (std::abs(s.f[k][static_cast<std::size_t>(i)]) > C * Tf * std::pow(Of, -i) * (1 + 1e-12))
                throw HypothesisError("stationary_phase: phase derivative bound fails at order " + std::to_string(i));
        for (int j = 0; j <= 2; ++j)
            if (s.g[k][static_cast<std::size_t>(j)] > C * std::pow(Og, -j) * (1 + 1e-12))
                throw HypothesisError("stationary_phase: amplitude derivative bound fails at order " + std::to_string(j));
    }

    // Sign pattern of f'.
    const double scale = Tf / Of;
    int changes = 0;
    std::size_t at = 0;
    double lambda = std::abs(s.f[0][1]);
    for (std::size_t k = 1; k < s.v.size(); ++k) {
        lambda = std::min(lambda, std::abs(s.f[k][1]));
        if ((s.f[k - 1][1] < 0) != (s.f[k][1] < 0)) {
            ++changes;
            at = k;
        }
    }

    StationaryPhaseResult out{};
    if (changes == 0 && !integrand.v0) {
        if (lambda <= 1e-12 * scale) throw HypothesisError("stationary_phase: f' vanishes on the interval");
        out.branch = StationaryBranch::NoStationaryPoint;
        out.value = 0.0;
        out.lambda = lambda;
        out.error_budget = Tf / (Of * Of * lambda * lambda * lambda) *
                           (1.0 + Of / Og + (Of * Of) / (Og * Og) * lambda / (Tf / Of));
        return out;
    }
    if (changes > 1) throw HypothesisError("stationary_phase: f' changes sign more than once");
    double v0 = 0.0;
    if (integrand.v0) {
        v0 = *integrand.v0;
    } else {
        if (!(s.f[at - 1][1] < 0 && s.f[at][1] >= 0))
            throw HypothesisError("stationary_phase: f' must change sign from negative to positive");
        double lo = s.v[at - 1], hi = s.v[at];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (phase_slope(integrand, mid) < 0 ? lo : hi) = mid;
        }
        v0 = 0.5 * (lo + hi);
    }
    const double kappa = std::min(b - v0, v0 - a);
    if (!(kappa > 1e-6 * (b - a))) throw HypothesisError("stationary_phase: stationary point at the boundary");
    for (std::size_t k = 0; k < s.v.size(); ++k)
        if (s.f[k][2] < Tf / (Of * Of) / C) throw HypothesisError("stationary_phase: f'' lower bound fails");

    const Jet f0 = integrand.phase(Jet::variable(2, v0));
    const cplx g0 = integrand.amplitude(Jet(0, v0)).value();
    const double f2 = f0.derivative(2).real();
    out.branch = StationaryBranch::StationaryPoint;
    out.v0 = v0;
    out.kappa = kappa;
    out.lambda = lambda;
    out.value = g0 * unit_phase(f0.value().real() + 0.125) / std::sqrt(f2);
    out.error_budget = std::pow(Of, 4) / (Tf * Tf * kappa * kappa * kappa) + Of / std::pow(Tf, 1.5) +
                       std::pow(Of, 3) / (std::pow(Tf, 1.5) * Og * Og);
    return out;
}

cplx integrate_integrand(const OscillatoryIntegrand& integrand, double a, double b, double tol) {
    QuadratureOptions o;
    o.abs_tol = tol;
    o.initial_panels = 8;
    o.max_panels = 200000;
    auto g = [&](double v) { return integrand.amplitude(Jet(0, v)).value(); };
    auto f = [&](double v) { return integrand.phase(Jet(0, v)).value().real(); };
    auto fp = [&](double v) { return phase_slope(integrand, v); };
    return integrate_oscillatory(g, f, fp, a, b, o).value;
}

// ---------------------------------------------------------------------------
// Partition of unity

std::vector<PartitionPiece> partition_WJ(double limit) {
    if (!(limit > 0.0)) throw std::invalid_argument("partition_WJ: limit must be positive");
    const double lam = kPartitionLambda, rho = kPartitionRho;
    std::vector<PartitionPiece> out;
    const double J1 = 1.0 / lam;
    out.push_back({0.0, BumpFunction::piece({0.0, J1, lam, 1})});
    for (int side : {1, -1}) {
        for (double J = J1; J < limit; J *= rho) {
            out.push_back({side * J, BumpFunction::piece({J, J * rho, lam, side})});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.J < y.J; });
    return out;
}

// ---------------------------------------------------------------------------
// J**, J_1 and the envelope

cplx analytic_c3() { return std::pow(kTwoPi * std::exp(1.0), 1.5) * std::exp(kI * (kPi / 4)); }

namespace {

// Fixed Gauss-Legendre grid on the support of a weight, with the factors
// x^{i K v_k} against a fixed v grid tabulated once.  Evaluating a transform
// at r then costs one phase per node and a matrix-vector product.
class DaggerGrid {
public:
    DaggerGrid(const BumpFunction& U, double sigma, double beta_shift, double r_max,
               double beta_max, double K, const std::vector<double>& vs) {
        const double lo = std::max(U.lower(), 0.0), hi = U.upper();
        if (!(hi > lo)) return;
        const double cycles = r_max * (hi - lo) + beta_max * std::log(hi / lo) / kTwoPi;
        const int panels = 8 + static_cast<int>(std::ceil(cycles / 3.0));
        static const GaussLegendreRule rule = gauss_legendre(kPoints);
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width;
            for (int j = 0; j < kPoints; ++j) {
                const double x = mid + 0.5 * width * rule.nodes[j];
                const double w = U(x);
                if (w == 0.0) continue;
                const double lx = std::log(x);
                x_.push_back(x);
                base_.push_back(0.5 * width * rule.weights[j] * w * std::pow(x, sigma - 1.0) *
                                std::polar(1.0, beta_shift * lx));
                for (double v : vs) power_.push_back(std::polar(1.0, K * v * lx));
            }
        }
        nv_ = vs.size();
    }

    /// out[k] = sum_x base(x) e(-r x) x^{i K v_k} (times the sign of K).
    void evaluate(double r, std::vector<cplx>& out) const {
        out.assign(nv_, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < x_.size(); ++j) {
            const cplx c = base_[j] * unit_phase(-r * x_[j]);
            const cplx* row = power_.data() + j * nv_;
            for (std::size_t k = 0; k < nv_; ++k) out[k] += c * row[k];
        }
    }

private:
    static constexpr int kPoints = 24;
    std::vector<double> x_;
    std::vector<cplx> base_;
    std::vector<cplx> power_;
    std::size_t nv_ = 0;
};

}  // namespace

cplx J_double(i64 q, i64 m, double tau, const JContext& ctx) {
    if (!(ctx.K > 0 && ctx.t > 0 && q > 0 && ctx.a > 0))
        throw std::invalid_argument("J_double: K, t, q and a must be positive");
    const double a = static_cast<double>(ctx.a), qd = static_cast<double>(q);
    const double M1 = static_cast<double>(ctx.M1), M2 = static_cast<double>(ctx.M2);
    const double M = M1 * M2, md = static_cast<double>(m);

    constexpr int kVPanels = 12, kVPoints = 16;
    static const GaussLegendreRule vrule = gauss_legendre(kVPoints);
    std::vector<double> vs, vw;
    const double vlo = ctx.V.lower(), vwidth = (ctx.V.upper() - vlo) / kVPanels;
    for (int p = 0; p < kVPanels; ++p)
        for (int j = 0; j < kVPoints; ++j) {
            const double v = vlo + (p + 0.5 + 0.5 * vrule.nodes[j]) * vwidth;
            vs.push_back(v);
            vw.push_back(0.5 * vwidth * vrule.weights[j] * ctx.V(v));
        }

    auto r_V = [&](double zeta) { return ctx.N * zeta / (a * qd * M1); };
    auto r_U = [&](double zeta) { return ctx.N * (md * a - zeta * M2) / (a * qd * M); };
    const double rV_max = std::max(std::abs(r_V(ctx.zeta_lo)), std::abs(r_V(ctx.zeta_hi)));
    const double rU_max = std::max(std::abs(r_U(ctx.zeta_lo)), std::abs(r_U(ctx.zeta_hi)));
    const double vmax = ctx.V.upper();
    // V-dagger at 1/2 + i(Kv - tau), U-dagger at 1 - i(t + Kv).
    const DaggerGrid Vgrid(ctx.V, 0.5, -tau, rV_max, ctx.K * vmax + std::abs(tau), ctx.K, vs);
    const DaggerGrid Ugrid(ctx.U, 1.0, -ctx.t, rU_max, ctx.t + ctx.K * vmax, -ctx.K, vs);

    auto zeta_integrand = [&](double zeta) {
        std::vector<cplx> Vd, Ud;
        Vgrid.evaluate(r_V(zeta), Vd);
        Ugrid.evaluate(r_U(zeta), Ud);
        cplx sum{0.0, 0.0};
        for (std::size_t k = 0; k < vs.size(); ++k) sum += vw[k] * Vd[k] * Ud[k];
        return sum;
    };
    QuadratureOptions o;
    o.abs_tol = 1e-15;
    o.rel_tol = ctx.rel_tol;
    o.initial_panels = 4;
    return integrate_smooth(zeta_integrand, ctx.zeta_lo, ctx.zeta_hi, o).value;
}

double J_stationary_point(i64 q, i64 m, double tau, const JContext& ctx) {
    return (ctx.t + tau) * static_cast<double>(q) * static_cast<double>(ctx.M()) /
           (-kTwoPi * ctx.N * static_cast<double>(m));
}

cplx J_main_shape(i64 q, i64 m, double tau, const JContext& ctx) {
    if (m == 0) throw std::invalid_argument("J_main: m must be nonzero");
    const double tp = ctx.t + tau;
    if (!(tp > 0)) throw std::invalid_argument("J_main: t + tau must be positive");
    const double y0 = J_stationary_point(q, m, tau, ctx);
    const double Vy = ctx.V(y0);
    if (Vy == 0.0) return {0.0, 0.0};
    const cplx Ustar = u_star(ctx.U, y0, {1.0, -tp});
    const double u0 = tau / ctx.K;
    const double c = -tp * static_cast<double>(ctx.M2) / (ctx.K * static_cast<double>(m) * static_cast<double>(ctx.a));
    const double lo = u0 + c * ctx.zeta_lo, hi = u0 + c * ctx.zeta_hi;
    const double zint = (ctx.V.cumulative(hi) - ctx.V.cumulative(lo)) / c;
    const double L = std::log(y0) - 1.0;
    const cplx phase = std::exp(1.5 * L) * std::exp(-kI * tp * L);
    return phase * Vy * Ustar * zint / (ctx.K * std::sqrt(tp));
}

cplx J_main(i64 q, i64 m, double tau, const JContext& ctx) {
    return ctx.c3.value_or(analytic_c3()) * J_main_shape(q, m, tau, ctx);
}

double bound_B(double C, double tau, const JContext& ctx) {
    const double K = ctx.K, t = ctx.t;
    const double first = 1.0 / (std::sqrt(t) * std::pow(K, 1.5)) * std::min(1.0, 10.0 * K / std::abs(tau));
    const double second = std::sqrt(ctx.N) / (std::sqrt(t) * std::pow(K, 2.5) *
                                              std::sqrt(static_cast<double>(ctx.M1)) * C);
    return first + second;
}

// ---------------------------------------------------------------------------
// J_{1,J,pm} and I*

JStarTable::JStarTable(const JContext& ctx, i64 q, i64 m, const BumpFunction& WJ, int sign,
                       const ArchimedeanParams& arch, double tol)
    : ctx_(ctx), q_(q), m_(m), wj_(WJ), sign_(sign), arch_(arch) {
    const double qd = static_cast<double>(q), M1 = static_cast<double>(ctx.M1);
    log_base_ = std::log(ctx.N / (qd * qd * qd * M1 * M1 * M1));
    lo_ = WJ.lower();
    hi_ = WJ.upper();
    // J_1 vanishes unless 1 < y0 < 2 with t + tau > 0.
    lo_ = std::max(lo_, -ctx.t);
    if (m < 0) {
        const double unit = kTwoPi * ctx.N * static_cast<double>(-m) / (qd * static_cast<double>(ctx.M()));
        lo_ = std::max(lo_, unit - ctx.t);
        hi_ = std::min(hi_, 2 * unit - ctx.t);
    } else {
        hi_ = lo_;
    }
    if (!(hi_ > lo_)) return;
    const double tmax = std::max(std::abs(lo_), std::abs(hi_));
    log_scale_ = (std::abs(log_base_) + 3.0 * std::log(2.0 + tmax) + std::log(2.0) + 8.0) / kTwoPi;
    int panels = std::max(4, static_cast<int>(std::ceil((hi_ - lo_) * log_scale_)));
    build(panels);
    // Refine until the table is stable on a y-sample.
    const double ys[] = {1e-2, 0.3, 1.0, 3.0, 10.0, 1e2, 1e3};
    for (int it = 0; it < 8; ++it) {
        JStarTable finer = *this;
        finer.build(2 * panels);
        double diff = 0.0, mag = 0.0;
        for (double y : ys) {
            const cplx x1 = (*this)(y), x2 = finer(y);
            diff = std::max(diff, std::abs(x1 - x2));
            mag = std::max(mag, std::abs(x2));
        }
        *this = std::move(finer);
        panels *= 2;
        if (diff <= tol * std::max(mag, 1e-300)) return;
    }
    throw QuadratureError("JStarTable: tau quadrature did not stabilize", {});
}

void JStarTable::build(int panels) {
    constexpr int kNodes = 16;
    const auto rule = gauss_legendre(kNodes);
    tau_.clear();
    coef_.clear();
    const double w = (hi_ - lo_) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = lo_ + (p + 0.5) * w;
        for (int k = 0; k < kNodes; ++k) {
            const double tau = c + 0.5 * w * rule.nodes[static_cast<std::size_t>(k)];
            const double weight = 0.5 * w * rule.weights[static_cast<std::size_t>(k)];
            const double wj = wj_(tau);
            if (wj == 0.0) continue;
            const cplx j1 = J_main(q_, m_, tau, ctx_);
            if (j1 == cplx{0.0, 0.0}) continue;
            const cplx gam = gamma_pm({-0.5, tau}, sign_, arch_);
            tau_.push_back(tau);
            coef_.push_back(weight * wj * gam * j1 / kTwoPi);
        }
    }
}

cplx JStarTable::operator()(double y) const {
    const double lg = log_base_ + std::log(y);
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < tau_.size(); ++k) s += coef_[k] * std::polar(1.0, -tau_[k] * lg);
    return s;
}

cplx I_star(i64 n2, const IStarContext& ctx, const JStarTable& first, const JStarTable& second) {
    const double freq = static_cast<double>(n2) * ctx.L /
                        (static_cast<double>(ctx.q * ctx.qprime) * static_cast<double>(ctx.base.M1));
    auto g = [&](double y) -> cplx {
        const double w = ctx.W(y);
        if (w == 0.0) return {0.0, 0.0};
        return w * first(ctx.L * y) * std::conj(second(ctx.L * y)) / y;
    };
    double mag = 0.0;
    for (double y = ctx.W.lower(); y <= ctx.W.upper(); y += 0.125) mag = std::max(mag, std::abs(first(ctx.L * y)) * std::abs(second(ctx.L * y)));
    QuadratureOptions o;
    o.abs_tol = std::max(1e-300, 1e-12 * mag);
    o.rel_tol = 1e-10;
    o.initial_panels = 32;
    o.max_panels = 200000;
    auto f = [&](double y) { return -freq * y; };
    auto fp = [&](double) { return -freq; };
    return integrate_oscillatory(g, f, fp, ctx.W.lower(), ctx.W.upper(), o).value;
}

cplx I_star(i64 n2, const IStarContext& ctx) {
    JContext c1 = ctx.base, c2 = ctx.base;
    c1.a = ctx.a;
    c2.a = ctx.aprime;
    const JStarTable first(c1, ctx.q, ctx.m, ctx.WJ, ctx.sign, ctx.arch);
    const JStarTable second(c2, ctx.qprime, ctx.mprime, ctx.WJ, ctx.sign, ctx.arch);
    return I_star(n2, ctx, first, second);
}

double bound_B_star(i64 n2, const IStarContext& ctx) {
    const auto& b = ctx.base;
    const double head = std::sqrt(b.N) / (b.t * std::pow(b.K, 1.5));
    if (n2 == 0) return head / (std::sqrt(static_cast<double>(b.M1)) * ctx.C);
    return head / std::sqrt(std::abs(static_cast<double>(n2)) * ctx.L);
}

double I_star_threshold(const IStarContext& ctx, double multiplier) {
    const auto& b = ctx.base;
    return multiplier * ctx.C * std::sqrt(b.N * b.K * static_cast<double>(b.M1)) / ctx.L;
}

}  // namespace gl3twist
