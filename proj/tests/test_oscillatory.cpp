#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gl3twist/arith.hpp"
#include "gl3twist/oscillatory.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

using namespace gl3twist;

namespace {

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Midpoint Riemann sum of g(v) e(f(v)) with n cells.
template <class G, class F>
cplx riemann(G g, F f, double a, double b, int n) {
    const double h = (b - a) / n;
    cplx s{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double v = a + (i + 0.5) * h;
        s += g(v) * unit_phase(f(v));
    }
    return s * h;
}

i64 residue_above(i64 residue, i64 q, double Q) {
    i64 a = mod(residue, q);
    if (a == 0) a = q;
    while (static_cast<double>(a) <= Q) a += q;
    return a;
}

}  // namespace

TEST_CASE("integrate: trivial phases and a Riemann-sum oracle") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    const auto r0 = integrate(one, zero, zero, 0.0, 1.0);
    CHECK(std::abs(r0.value - cplx{1.0, 0.0}) < 1e-13);

    auto lin = [](double v) { return v; };
    auto dlin = [](double) { return 1.0; };
    CHECK(std::abs(integrate(one, lin, dlin, 0.0, 1.0).value) < 1e-13);

    const auto V = BumpFunction::V();
    auto g = [&](double v) { return V(v); };
    auto f = [](double v) { return 10.0 * v; };
    auto fp = [](double) { return 10.0; };
    const cplx q = integrate(g, f, fp, V.lower(), V.upper()).value;
    const cplx brute = riemann(g, f, V.lower(), V.upper(), 1000000);
    CHECK(std::abs(q - brute) < 1e-8);
}

TEST_CASE("integrate: rejects tolerances below the floor") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    QuadratureOptions o;
    o.abs_tol = 1e-16;
    CHECK_THROWS(integrate(one, zero, zero, 0.0, 1.0, o));
}

TEST_CASE("u_dagger: moments and decay away from the stationary range") {
    const auto V = BumpFunction::V();
    CHECK(std::abs(u_dagger(V, 0.0, {1.0, 0.0}) - 1.0) < 1e-10);

    auto xv = [&](double x) { return x * V(x); };
    auto zero = [](double) { return 0.0; };
    const cplx moment = riemann(xv, zero, 1.0, 2.0, 200000);
    CHECK(std::abs(u_dagger(V, 0.0, {2.0, 0.0}) - moment) < 1e-10);
    CHECK(std::abs(moment.real() - 1.5) < 1e-10);  // V is symmetric about 3/2

    // r = 1, beta growing: x0 = beta/(2 pi) leaves [1,2] and U-dagger decays
    // faster than the square of (1 + r)/beta.
    std::vector<double> betas = {40, 80, 160, 320}, mags;
    for (double beta : betas) {
        const double m = std::abs(u_dagger(V, 1.0, {0.5, beta}));
        mags.push_back(m * std::pow(beta / 2.0, 2));
    }
    MESSAGE("|U-dagger| (beta/(1+r))^2 at beta=40: " << mags.front());
    for (std::size_t i = 1; i < mags.size(); ++i) CHECK(mags[i] < mags[i - 1]);
    CHECK(mags.back() < 0.1 * mags.front());
}

TEST_CASE("u_dagger_main: support, errors and the error envelopes at x0 = 1.5") {
    const auto U = BumpFunction::U();
    // x0 = 10 is far outside the support: the main term vanishes and the
    // transform itself sits below the order-one envelope.
    const double r = 10.0, beta = kTwoPi * r * 10.0;
    CHECK(u_dagger_main(U, r, {0.5, beta}, 1) == cplx{0.0, 0.0});
    CHECK(std::abs(u_dagger(U, r, {0.5, beta})) <= std::min(std::pow(beta, -1.5), std::pow(r, -1.5)));
    CHECK_THROWS_AS(u_dagger_main(U, 0.0, {0.5, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(u_dagger_main(U, 1.0, {0.5, kTwoPi * 10.0}, 5), std::domain_error);
    CHECK_THROWS_AS(u_dagger_main(U, 1.0, {0.5, 1.0}, 3), std::invalid_argument);

    const double r20 = 20.0, b20 = kTwoPi * 20.0 * 1.5;
    const cplx exact = u_dagger(U, r20, {0.5, b20});
    const double env1 = std::min(std::pow(b20, -1.5), std::pow(r20, -1.5));
    const double env5 = std::min(std::pow(b20, -2.5), std::pow(r20, -2.5));
    const double c1 = std::abs(exact - u_dagger_main(U, r20, {0.5, b20}, 1)) / env1;
    const double c5 = std::abs(exact - u_dagger_main(U, r20, {0.5, b20}, 5)) / env5;
    MESSAGE("fitted constants at r=20: order 1 " << c1 << ", order 5 " << c5);
    CHECK(c1 <= 10.0);
    CHECK(std::isfinite(c5));
}

TEST_CASE("u_dagger_main: asymptotic rates once the ramps are resolved") {
    // W is flat on [1,2]; from r = 40 on its ramp contributions are below the
    // stationary residual and the fitted exponents are the asymptotic ones.
    const auto W = BumpFunction::W();
    std::vector<double> betas, res1, res5;
    for (double r : {40.0, 80.0, 160.0, 320.0}) {
        const double beta = kTwoPi * r * 1.5;
        const cplx s{0.5, beta};
        const cplx exact = u_dagger(W, r, s);
        betas.push_back(beta);
        res1.push_back(std::abs(exact - u_dagger_main(W, r, s, 1)));
        res5.push_back(std::abs(exact - u_dagger_main(W, r, s, 5)));
    }
    const double s1 = loglog_slope(betas, res1), s5 = loglog_slope(betas, res5);
    MESSAGE("W-kind tail slopes: order 1 " << s1 << ", order 5 " << s5);
    CHECK(std::abs(s1 + 1.5) <= 0.2);
    CHECK(std::abs(s5 + 2.5) <= 0.3);
    for (std::size_t i = 0; i < res5.size(); ++i) CHECK(res5[i] < res1[i]);
}

TEST_CASE("u_star: equals U(x0) up to O(x0^2/beta) on the plateau") {
    const auto U = BumpFunction::U();
    const double x0 = 1.5;
    for (double beta : {1e3, 1e4}) {
        const cplx u = u_star(U, x0, {0.5, beta});
        CHECK(std::abs(u - 1.0) < 5.0 * x0 * x0 / beta);
    }
}

TEST_CASE("stationary_phase: quadratic phase family") {
    const auto V = BumpFunction::V();
    for (double T : {1e2, 1e3, 1e4}) {
        OscillatoryIntegrand integrand;
        integrand.phase = [T](const Jet& v) { return T * (v - 1.0) * (v - 1.0); };
        integrand.amplitude = [&V](const Jet& v) { return V.eval(v + 0.5); };
        integrand.theta_f = T;
        integrand.omega_f = 1.0;
        integrand.omega_g = 0.1;
        const auto sp = stationary_phase(integrand, 0.0, 2.0);
        REQUIRE(sp.branch == StationaryBranch::StationaryPoint);
        CHECK(std::abs(sp.v0 - 1.0) < 1e-10);
        const cplx expected = V(1.5) * unit_phase(0.125) / std::sqrt(2.0 * T);
        CHECK(std::abs(sp.value - expected) < 1e-12);
        const cplx direct = integrate_integrand(integrand, 0.0, 2.0);
        const double fitted = std::abs(direct - sp.value) / sp.error_budget;
        MESSAGE("T=" << T << " fitted constant " << fitted);
        CHECK(fitted <= 10.0);
    }
}

TEST_CASE("stationary_phase: monotone phase and degenerate cases") {
    const auto V = BumpFunction::V();
    const double T = 100.0;
    OscillatoryIntegrand integrand;
    integrand.phase = [T](const Jet& v) { return T * v; };
    integrand.amplitude = [&V](const Jet& v) { return V.eval(v + 0.5); };
    integrand.theta_f = T;
    integrand.omega_f = 1.0;
    integrand.omega_g = 0.1;
    const auto sp = stationary_phase(integrand, 0.0, 2.0);
    CHECK(sp.branch == StationaryBranch::NoStationaryPoint);
    CHECK(sp.value == cplx{0.0, 0.0});
    CHECK(std::abs(integrate_integrand(integrand, 0.0, 2.0)) <= sp.error_budget);

    OscillatoryIntegrand edge = integrand;
    edge.phase = [T](const Jet& v) { return T * v * v; };
    CHECK_THROWS_AS(stationary_phase(edge, 0.0, 2.0), HypothesisError);

    OscillatoryIntegrand concave = integrand;
    concave.phase = [T](const Jet& v) { return -T * (v - 1.0) * (v - 1.0); };
    CHECK_THROWS_AS(stationary_phase(concave, 0.0, 2.0), HypothesisError);

    OscillatoryIntegrand wild = integrand;
    wild.phase = [T](const Jet& v) { return T * exp(10.0 * v); };
    CHECK_THROWS_AS(stationary_phase(wild, 0.0, 2.0), HypothesisError);
}

TEST_CASE("partition_WJ: exact partition of unity and piece count") {
    for (double limit : {10.0, 50.0, 500.0}) {
        const auto parts = partition_WJ(limit);
        std::size_t positive = 0;
        for (const auto& p : parts) positive += p.J > 0 ? 1 : 0;
        CHECK(static_cast<double>(positive) <= 4.0 * std::log2(limit) + 4.0);
        CHECK(std::is_sorted(parts.begin(), parts.end(),
                             [](const auto& a, const auto& b) { return a.J < b.J; }));
        double worst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -limit + 2.0 * limit * i / 4000.0;
            double s = 0.0;
            for (const auto& p : parts) s += p.weight(x);
            worst = std::max(worst, std::abs(s - 1.0));
        }
        CHECK(worst < 1e-10);
        for (const auto& p : parts) {
            if (p.J > 0) {
                CHECK(p.weight.lower() == doctest::Approx(p.J));
                CHECK(p.weight.upper() <= 4.0 * p.J / 3.0 + 1e-12);
            }
        }
        // Only the central piece is alive at 0.
        double at0 = 0.0;
        for (const auto& p : parts) {
            if (p.J != 0.0) CHECK(p.weight(0.0) == 0.0);
            at0 += p.weight(0.0);
        }
        CHECK(at0 == doctest::Approx(1.0));
        double half = 0.0;
        for (const auto& p : parts) half += p.weight(limit / 2);
        CHECK(std::abs(half - 1.0) < 1e-10);
    }
}

TEST_CASE("J_main: support, unit phase and argument checks") {
    JContext ctx;
    // y0 < 1 throughout the small-q range at N = 10^4, t = 50.
    CHECK(J_main(10, -1, 0.0, ctx) == cplx{0.0, 0.0});
    CHECK(J_main(10, 1, 0.0, ctx) == cplx{0.0, 0.0});
    CHECK_THROWS_AS(J_main(10, 0, 0.0, ctx), std::invalid_argument);
    CHECK_THROWS_AS(J_main(10, -1, -60.0, ctx), std::invalid_argument);
    for (double y : {0.3, 1.0, 1.7, 12.0}) {
        const double tp = 123.0;
        const cplx ph = std::pow(cplx{y / std::exp(1.0), 0.0}, cplx{0.0, -tp});
        CHECK(std::abs(std::abs(ph) - 1.0) < 1e-13);
    }
    CHECK(std::abs(analytic_c3()) == doctest::Approx(std::pow(kTwoPi * std::exp(1.0), 1.5)));
    CHECK(std::arg(analytic_c3()) == doctest::Approx(kPi / 4));
}

TEST_CASE("J_double: small-parameter sanity against a nested Riemann sum") {
    JContext ctx;
    ctx.N = 20;
    ctx.K = 1;
    ctx.t = 1;
    ctx.a = 1;
    const i64 q = 1, m = 1;
    const double tau = 0.5;
    const double M1 = 3, M2 = 5, M = 15;
    const cplx nested = J_double(q, m, tau, ctx);
    // Midpoint sums in zeta are O(h^2); one Richardson step removes that term.
    auto midpoint = [&](int nz, int nv) {
        cplx sum{0.0, 0.0};
        for (int i = 0; i < nz; ++i) {
            const double zeta = (i + 0.5) / nz;
            const double rV = ctx.N * zeta / (ctx.a * q * M1);
            const double rU = ctx.N * (m * ctx.a - zeta * M2) / (ctx.a * q * M);
            for (int j = 0; j < nv; ++j) {
                const double v = 1.0 + (j + 0.5) / nv;
                sum += ctx.V(v) * u_dagger(ctx.V, rV, {0.5, ctx.K * v - tau}) *
                       u_dagger(ctx.U, rU, {1.0, -(ctx.t + ctx.K * v)});
            }
        }
        return sum / static_cast<double>(nz * nv);
    };
    const cplx brute = (4.0 * midpoint(160, 24) - midpoint(80, 24)) / 3.0;
    CHECK(std::abs(nested - brute) < 1e-4 * std::abs(brute));
    CHECK_THROWS_AS(J_double(0, 1, 0.0, ctx), std::invalid_argument);
}

TEST_CASE("J decomposition and main-term constant on a stationary grid") {
    // y0 = (t+tau) q M/(2 pi N) sits near 1.4, inside the support of V.
    JContext ctx;
    ctx.N = 2800;
    ctx.t = 200;
    const i64 q = 8, m = -1;
    ctx.a = residue_above(ctx.M2 * mod_inverse(mod(m, q), q), q, 0.0);
    std::vector<double> ratios;
    for (int k = 0; k < 10; ++k) {
        const double tau = -5.0 + k;
        const cplx jj = J_double(q, m, tau, ctx);
        const cplx shape = J_main_shape(q, m, tau, ctx);
        REQUIRE(std::abs(shape) > 0.0);
        ratios.push_back(std::abs(jj / shape));
        CHECK(std::abs(jj - J_main(q, m, tau, ctx)) <= 10.0 * bound_B(4.0, tau, ctx));
    }
    const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
    MESSAGE("fitted |c3| = " << mean << " (analytic " << std::abs(analytic_c3()) << ")");
    for (double r : ratios) CHECK(std::abs(r - mean) <= 0.2 * mean);
    CHECK(std::abs(mean - std::abs(analytic_c3())) <= 0.2 * mean);
}

TEST_CASE("bound_B: positive and decreasing in |tau| beyond 10K") {
    JContext ctx;
    double prev = bound_B(4.0, 10.0 * ctx.K, ctx);
    for (double tau = 10.0 * ctx.K + 10.0; tau < 2000.0; tau += 50.0) {
        const double b = bound_B(4.0, tau, ctx);
        CHECK(b > 0.0);
        CHECK(b <= prev);
        CHECK(bound_B(4.0, -tau, ctx) == doctest::Approx(b));
        prev = b;
    }
}

TEST_CASE("I_star: envelope and negligibility past the threshold") {
    IStarContext c;
    c.base.N = 2800;
    c.base.t = 200;
    c.q = c.qprime = 8;
    c.m = c.mprime = -1;
    c.a = c.aprime = 3;
    c.base.a = 3;
    c.L = 100;
    c.C = 8;
    for (const auto& p : partition_WJ(50))
        if (p.J > 4 && p.J < 6) c.WJ = p.weight;
    const JStarTable table(c.base, c.q, c.m, c.WJ, c.sign, c.arch);
    REQUIRE(table.nodes() > 0);
    const cplx at0 = I_star(0, c, table, table);
    REQUIRE(std::abs(at0) > 0.0);
    CHECK(std::abs(at0) <= 10.0 * bound_B_star(0, c));
    const double thr = I_star_threshold(c);
    for (i64 n2 : {1, 3, 10, 30}) CHECK(std::abs(I_star(n2, c, table, table)) <= 10.0 * bound_B_star(n2, c));
    for (i64 n2 : {static_cast<i64>(thr) + 1, static_cast<i64>(2 * thr)}) {
        const cplx v = I_star(n2, c, table, table);
        CHECK(std::abs(v) < 1e-3 * std::abs(at0));
    }
    CHECK(bound_B_star(1, c) > bound_B_star(4, c));
}
