#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gl3twist/expsums.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace gl3twist;

namespace {

struct PrimePair {
    i64 M1, M2;
};
const PrimePair kPairs[] = {{3, 5}, {3, 7}, {3, 11}, {5, 7}, {5, 11}};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("kloosterman small cases and Weil bound") {
    CHECK(std::abs(kloosterman(1, 1, 1) - 1.0) < 1e-14);
    CHECK(std::abs(kloosterman(1, 1, 3) + 1.0) < 1e-14);
    CHECK(std::abs(kloosterman(1, 1, 2) - 1.0) < 1e-14);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<i64> d(-1000, 1000);
    for (i64 c = 1; c <= 500; ++c) {
        for (int k = 0; k < 20; ++k) {
            const i64 m = d(rng), n = d(rng);
            CHECK(std::abs(kloosterman(m, n, c)) <= weil_bound(m, n, c) + 1e-9);
        }
    }
}

TEST_CASE("ramanujan sums") {
    CHECK(ramanujan(0, 6) == doctest::Approx(2.0));
    CHECK(ramanujan(1, 5) == doctest::Approx(-1.0));
    CHECK(ramanujan(2, 4) == doctest::Approx(-2.0));
    for (i64 c = 1; c <= 200; ++c)
        for (i64 u : {0, 1, 2, 6, 12, 35, 60, -7})
            CHECK(std::abs(ramanujan(u, c) - static_cast<double>(ramanujan_mobius(u, c))) < 1e-9);
}

TEST_CASE("Poisson sum E: closed form equals brute force on the full grid") {
    double worst = 0.0;
    int nonzero = 0;
    for (const auto [M1, M2] : kPairs) {
        for (i64 i1 = 1; i1 < M1 - 1 || i1 == 1; ++i1) {
            const auto chi1 = make_character(M1, i1);
            const auto chi2 = make_character(M2, 1 + (i1 % (M2 - 2)));
            for (i64 q = 1; q <= 12; ++q) {
                const i64 qM1 = q * M1;
                for (i64 a = 1; a <= qM1; ++a) {
                    if (std::gcd(a, qM1) != 1) continue;
                    const i64 abar = mod_inverse(a, qM1);
                    for (i64 r : {-2, 0, 1, 3}) {
                        for (i64 n = 1; n <= M1; ++n) {
                            CharSumParams p{a, 1, M2 * abar + r * qM1, n, q, chi1, chi2};
                            const cplx brute = script_E_bruteforce(p);
                            const cplx closed = script_E_closed(p);
                            worst = std::max(worst, rel(closed, brute));
                            if (std::abs(closed) > 1e-9) {
                                ++nonzero;
                                if (n % M1 != 0 && mod(*poisson_shift(p), M2) != 0)
                                    CHECK(std::abs(closed) ==
                                          doctest::Approx(qM1 * std::sqrt(static_cast<double>(M2))).epsilon(1e-10));
                            }
                            p.m += 1;  // generically breaks the congruence
                            if (!poisson_shift(p)) {
                                CHECK(std::abs(script_E_closed(p)) == 0.0);
                                CHECK(std::abs(script_E_bruteforce(p)) < 1e-8);
                            }
                        }
                    }
                }
            }
        }
    }
    CHECK(worst < 1e-9);
    CHECK(nonzero > 100);
}

TEST_CASE("Poisson sum E rejects a non-unit a") {
    CharSumParams p{3, 1, 0, 1, 2, make_character(3, 1), make_character(5, 1)};
    CHECK_THROWS(script_E_bruteforce(p));
    CHECK_THROWS(script_E_closed(p));
}

TEST_CASE("congruence sum D: closed form equals brute force on the full grid") {
    double worst = 0.0;
    int nonzero = 0;
    for (const auto [M1, M2] : kPairs) {
        const auto chi1 = make_character(M1, 1);
        const auto chi2 = make_character(M2, M2 - 2);
        for (i64 q = 1; q <= 12; ++q) {
            if (q % M1 == 0) continue;
            for (i64 a = 1; a <= q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                const i64 abar = mod_inverse(a, q);
                for (i64 b = 1; b < M1; ++b) {
                    for (i64 r : {-1, 0, 2, 7}) {
                        for (i64 off : {0, 1}) {
                            CharSumParams p{a, b, M2 * abar + r * q + off, 1, q, chi1, chi2};
                            const cplx brute = script_D_bruteforce(p);
                            const cplx closed = script_D_closed(p);
                            worst = std::max(worst, rel(closed, brute));
                            if (!congruence_shift(p)) CHECK(std::abs(closed) == 0.0);
                            if (std::abs(closed) > 1e-9) {
                                ++nonzero;
                                CHECK(std::abs(closed) ==
                                      doctest::Approx(q * std::sqrt(static_cast<double>(M1 * M2))).epsilon(1e-10));
                            }
                        }
                    }
                }
            }
        }
    }
    CHECK(worst < 1e-9);
    CHECK(nonzero > 100);
    CharSumParams bad{1, 1, 0, 1, 6, make_character(3, 1), make_character(5, 1)};
    CHECK_THROWS(script_D_closed(bad));
}

TEST_CASE("twisted Kloosterman sum B: factored form and trivial bound") {
    for (i64 M1 : {3, 5, 7}) {
        const auto chi1 = make_character(M1, 1);
        for (i64 q = 1; q <= 14; ++q) {
            if (q % M1 == 0) continue;
            for (i64 n1 : divisors(q)) {
                for (i64 a = 1; a <= q; ++a) {
                    if (std::gcd(a, q) != 1) continue;
                    for (i64 n2 : {0, 1, -2, 5})
                        for (i64 m : {-1, 1, 4}) {
                            TwistedKloostermanParams p{n1, n2, m, a, q, M1 == 5 ? 7 : 5, chi1};
                            cplx v;
                            CHECK_NOTHROW(v = script_B(p));
                            CHECK(std::abs(v) <= static_cast<double>((M1 - 1) * q * M1 / n1) + 1e-9);
                        }
                }
            }
        }
    }
    TwistedKloostermanParams p{1, 1, 1, 1, 2, 5, make_character(3, 0)};
    CHECK_THROWS(script_B(p));
    p.chi1 = make_character(3, 1);
    p.n1 = 3;
    CHECK_THROWS(script_B(p));
    p.n1 = 1;
    p.q = 6;
    CHECK_THROWS(script_B(p));
}

TEST_CASE("C* sum: vanishing and envelopes with constant at most 4") {
    const i64 M1 = 3, M2 = 5;
    const auto chi1 = make_character(M1, 1);
    double worst0 = 0.0, worst = 0.0;
    for (i64 q = 1; q <= 10; ++q) {
        if (q % M1 == 0) continue;
        for (i64 qp = 1; qp <= 10; ++qp) {
            if (qp % M1 == 0) continue;
            const i64 g = std::gcd(q, qp);
            for (i64 n1 : divisors(g)) {
                const i64 a = q == 1 ? 1 : q - 1, ap = 1;
                for (auto [m, mp] : {std::pair<i64, i64>{1, 1}, {-1, 2}, {4, -3}}) {
                    CStarParams p{n1, m, mp, a, ap, q, qp, M2, chi1};
                    const cplx zero = script_C_star(0, p);
                    const double env0 = script_C_star_envelope(0, p);
                    if (q / n1 != qp / n1) {
                        CHECK(std::abs(zero) < 1e-9);
                    } else if (env0 == 0.0) {
                        CHECK(std::abs(zero) < 1e-6);
                    } else {
                        worst0 = std::max(worst0, std::abs(zero) / env0);
                    }
                    for (i64 n2 : {1, -1, 2, 5, 12}) {
                        worst = std::max(worst, std::abs(script_C_star(n2, p)) / script_C_star_envelope(n2, p));
                    }
                }
            }
        }
    }
    MESSAGE("observed C*(0) constant " << worst0 << ", C*(n2) constant " << worst);
    CHECK(worst0 <= 4.0);
    CHECK(worst <= 4.0);
}
