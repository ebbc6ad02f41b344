#include "gl3twist/expsums.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gl3twist {

cplx kloosterman(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("kloosterman: modulus must be positive");
    if (c == 1) return {1.0, 0.0};
    const i64 mm = mod(m, c), nn = mod(n, c);
    double re = 0.0;
    for (i64 x = 1; x < c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        const i64 xbar = mod_inverse(x, c);
        const i64 r = mod(mul_mod(mm, x, c) + mul_mod(nn, xbar, c), c);
        re += unit_phase(r, c).real();
    }
    return {re, 0.0};
}

double ramanujan(i64 u, i64 c) {
    if (c < 1) throw std::invalid_argument("ramanujan: modulus must be positive");
    double s = 0.0;
    for (i64 g = 0; g < c; ++g)
        if (std::gcd(g, c) == 1) s += unit_phase(mul_mod(u, g, c), c).real();
    return s;
}

i64 ramanujan_mobius(i64 u, i64 c) {
    const i64 g = std::gcd(std::abs(u), c);
    i64 s = 0;
    for (i64 d : divisors(g)) s += d * mobius(c / d);
    return s;
}

double weil_bound(i64 m, i64 n, i64 c) {
    const i64 g = std::gcd(std::gcd(std::abs(m), std::abs(n)), c);
    return static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(c)) *
           std::sqrt(static_cast<double>(g));
}

namespace {

void require_coprime(i64 a, i64 q, const char* what) {
    if (std::gcd(mod(a, q), q) != 1) throw std::domain_error(what);
}

}  // namespace

std::optional<i64> poisson_shift(const CharSumParams& p) {
    const i64 M1 = p.M1(), M2 = p.M2();
    const i64 qM1 = p.q * M1;
    const i64 abar = mod_inverse(p.a, qM1);
    const i64 X = p.m - M2 * abar;
    if (mod(X, qM1) != 0) return std::nullopt;
    const auto tw = factor_towers(p.q, M1, M2);
    return X / (ipow(M1, tw.j + 1) * ipow(M2, tw.k));
}

std::optional<i64> congruence_shift(const CharSumParams& p) {
    const i64 abar = mod_inverse(p.a, p.q);
    const i64 X = p.m - p.M2() * abar;
    if (mod(X, p.q) != 0) return std::nullopt;
    const auto tw = factor_towers(p.q, p.M1(), p.M2());
    return X / ipow(p.M2(), tw.k);
}

cplx script_E_bruteforce(const CharSumParams& p) {
    const i64 M1 = p.M1(), M2 = p.M2();
    require_coprime(p.a, p.q * M1, "script_E: gcd(a, q M1) must be 1");
    const i64 P = p.q * M1 * M1 * M2;
    const i64 abar = mod_inverse(p.a, p.q * M1);
    const i64 X = mod(p.m - M2 * abar, P);
    const RootTable roots(P);
    cplx s{0.0, 0.0};
    for (i64 c = mod(p.n, M1); c < P; c += M1) s += p.chi1(c) * p.chi2(c) * roots[mul_mod(X, c, P)];
    return s;
}

cplx script_E_closed(const CharSumParams& p) {
    const i64 M1 = p.M1(), M2 = p.M2();
    require_coprime(p.a, p.q * M1, "script_E: gcd(a, q M1) must be 1");
    if (!p.chi2.is_primitive()) throw std::invalid_argument("script_E_closed: chi2 must be primitive");
    const auto mstar = poisson_shift(p);
    if (!mstar) return {0.0, 0.0};
    const auto tw = factor_towers(p.q, M1, M2);
    const cplx eps2 = gauss_sum(p.chi2).epsilon;
    const double scale = static_cast<double>(p.q * M1) * std::sqrt(static_cast<double>(M2));
    const i64 inv = mod_inverse(mul_mod(tw.q0, M2, M1), M1);
    const i64 phase = mul_mod(mul_mod(*mstar, inv, M1), p.n, M1);
    return eps2 * scale * p.chi1(p.n) * p.chi2(mul_mod(tw.q0, M1, M2)) * std::conj(p.chi2(*mstar)) *
           unit_phase(phase, M1);
}

cplx script_D_bruteforce(const CharSumParams& p) {
    const i64 M1 = p.M1(), M2 = p.M2();
    require_coprime(p.a, p.q, "script_D: gcd(a, q) must be 1");
    if (p.q % M1 == 0) throw std::invalid_argument("script_D: M1 must not divide q");
    const i64 P = p.q * M1 * M2;
    const i64 aM1bar = mod_inverse(p.a * M1, p.q);
    const i64 Y = mod(p.m - M2 * (aM1bar * M1 + p.b * p.q), P);
    const RootTable roots(P);
    cplx s{0.0, 0.0};
    for (i64 c = 0; c < P; ++c) s += p.chi1(c) * p.chi2(c) * roots[mul_mod(Y, c, P)];
    return s;
}

cplx script_D_closed(const CharSumParams& p) {
    const i64 M1 = p.M1(), M2 = p.M2();
    require_coprime(p.a, p.q, "script_D: gcd(a, q) must be 1");
    if (p.q % M1 == 0) throw std::invalid_argument("script_D: M1 must not divide q");
    if (!p.chi1.is_primitive() || !p.chi2.is_primitive())
        throw std::invalid_argument("script_D_closed: characters must be primitive");
    const auto m0 = congruence_shift(p);
    if (!m0) return {0.0, 0.0};
    const auto tw = factor_towers(p.q, M1, M2);
    const cplx eps = gauss_sum(p.chi1).epsilon * gauss_sum(p.chi2).epsilon;
    const double scale = static_cast<double>(p.q) * std::sqrt(static_cast<double>(M1 * M2));
    const i64 qM2bar = mod_inverse(mul_mod(p.q, M2, M1), M1);
    const i64 arg1 = mod(mul_mod(qM2bar, p.m, M1) - p.b, M1);
    return eps * scale * p.chi2(mul_mod(tw.q0, M1, M2)) * std::conj(p.chi1(arg1)) * std::conj(p.chi2(*m0));
}

namespace {

void check_B(const TwistedKloostermanParams& p) {
    const i64 M1 = p.chi1.modulus();
    if (p.chi1.is_principal()) throw std::invalid_argument("script_B: chi1 must be non-principal");
    if (p.n1 <= 0 || p.q % p.n1 != 0) throw std::invalid_argument("script_B: n1 must divide q");
    if (p.q % M1 == 0) throw std::invalid_argument("script_B: M1 must not divide q");
    require_coprime(p.a, p.q, "script_B: gcd(a, q) must be 1");
}

}  // namespace

cplx script_B_direct(const TwistedKloostermanParams& p) {
    check_B(p);
    const i64 M1 = p.chi1.modulus();
    const i64 modulus = p.q * M1 / p.n1;
    const i64 aM1bar = mod_inverse(p.a * M1, p.q);
    const i64 qM2bar = mod_inverse(mul_mod(p.q, p.M2, M1), M1);
    const i64 shift = mul_mod(qM2bar, p.m, M1);
    cplx s{0.0, 0.0};
    for (i64 b = 1; b < M1; ++b) {
        const i64 X = aM1bar * M1 + b * p.q;
        const i64 Xbar = mod_inverse(X, modulus);
        s += std::conj(p.chi1(shift - b)) * kloosterman(Xbar, p.n2, modulus);
    }
    return s;
}

cplx script_B_factored(const TwistedKloostermanParams& p) {
    check_B(p);
    const i64 M1 = p.chi1.modulus();
    const i64 qhat = p.q / p.n1;
    const i64 M1bar = mod_inverse(M1, qhat);
    const cplx outer = p.chi1(p.q) * kloosterman(mul_mod(p.a, M1bar, qhat), mul_mod(p.n2, M1bar, qhat), qhat);
    const i64 M2bar = mod_inverse(p.M2, M1);
    const i64 qhatbar = mod_inverse(qhat, M1);
    cplx inner{0.0, 0.0};
    for (i64 b = 1; b < M1; ++b) {
        const i64 bqbar = mod_inverse(mul_mod(b, qhat, M1), M1);
        inner += std::conj(p.chi1(mul_mod(p.m, M2bar, M1) - b)) *
                 kloosterman(bqbar, mul_mod(p.n2, qhatbar, M1), M1);
    }
    return outer * inner;
}

cplx script_B(const TwistedKloostermanParams& p) {
    const cplx d = script_B_direct(p);
    const cplx f = script_B_factored(p);
    const double scale = std::max(1.0, std::abs(d));
    if (std::abs(d - f) > 1e-9 * scale) throw std::logic_error("script_B: factored form disagrees with the direct sum");
    return d;
}

namespace {

std::vector<cplx> B_table(const CStarParams& p, i64 m, i64 a, i64 q) {
    const i64 M1 = p.chi1.modulus();
    const i64 period = q / p.n1 * M1;
    std::vector<cplx> out(static_cast<std::size_t>(period));
    TwistedKloostermanParams t{p.n1, 0, m, a, q, p.M2, p.chi1};
    for (i64 c = 0; c < period; ++c) {
        t.n2 = c;
        out[static_cast<std::size_t>(c)] = script_B_direct(t);
    }
    return out;
}

}  // namespace

cplx script_C_star(i64 n2, const CStarParams& p) {
    const i64 M1 = p.chi1.modulus();
    if (p.n1 <= 0 || p.q % p.n1 != 0 || p.qprime % p.n1 != 0)
        throw std::invalid_argument("script_C_star: n1 must divide q and q'");
    if (p.q % M1 == 0 || p.qprime % M1 == 0)
        throw std::invalid_argument("script_C_star: moduli must be coprime to M1");
    const i64 qh = p.q / p.n1, qh2 = p.qprime / p.n1;
    const i64 P = qh * qh2 * M1;
    const auto B1 = B_table(p, p.m, p.a, p.q);
    const auto B2 = B_table(p, p.mprime, p.aprime, p.qprime);
    const RootTable roots(P);
    cplx s{0.0, 0.0};
    for (i64 c = 0; c < P; ++c) {
        s += B1[static_cast<std::size_t>(c % (qh * M1))] * std::conj(B2[static_cast<std::size_t>(c % (qh2 * M1))]) *
             roots[mul_mod(n2, c, P)];
    }
    return s;
}

double script_C_star_envelope(i64 n2, const CStarParams& p) {
    const i64 M1 = p.chi1.modulus();
    const i64 qh = p.q / p.n1, qh2 = p.qprime / p.n1;
    const double M1_52 = std::pow(static_cast<double>(M1), 2.5);
    if (n2 == 0) {
        if (qh != qh2) return 0.0;
        const double R = std::abs(static_cast<double>(ramanujan_mobius(p.a - p.aprime, qh)));
        const i64 g = std::gcd(M1, std::abs(p.m - p.mprime));
        return static_cast<double>(qh * qh) * R * M1_52 * std::sqrt(static_cast<double>(g));
    }
    const i64 g1 = std::gcd(std::gcd(qh, qh2), std::abs(n2));
    const i64 diff = p.m * qh * qh - p.mprime * qh2 * qh2;
    const i64 g2 = std::gcd(std::gcd(M1, std::abs(n2)), std::abs(diff));
    return static_cast<double>(qh * qh2 * g1) * M1_52 * std::sqrt(static_cast<double>(g2));
}

}  // namespace gl3twist
