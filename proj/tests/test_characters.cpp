#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gl3twist/characters.hpp"

#include <cmath>
#include <random>

using namespace gl3twist;

namespace {
int legendre(i64 n, i64 p) {
    n = mod(n, p);
    if (n == 0) return 0;
    for (i64 x = 1; x < p; ++x)
        if (mod(x * x, p) == n) return 1;
    return -1;
}
}  // namespace

TEST_CASE("make_character basics") {
    const auto principal = make_character(5, 0);
    CHECK(principal.is_principal());
    for (i64 n = 1; n < 5; ++n) CHECK(std::abs(principal(n) - 1.0) < 1e-15);
    CHECK(std::abs(principal(10)) == 0.0);

    const auto quad = make_character(5, 2);
    for (i64 n = 0; n < 5; ++n) CHECK(std::abs(quad(n) - static_cast<double>(legendre(n, 5))) < 1e-14);
    CHECK(std::abs(eval(quad, 2) + 1.0) < 1e-14);

    const auto chi7 = make_character(7, 1);
    CHECK(chi7.order() == 6);
    CHECK_THROWS(make_character(6, 1));
    CHECK_THROWS(make_character(7, 6));
    for (i64 idx = 0; idx < 4; ++idx) CHECK(std::abs(make_character(5, idx)(1) - 1.0) < 1e-15);
}

TEST_CASE("orthogonality and multiplicativity for moduli up to 97") {
    std::mt19937_64 rng(17);
    for (i64 M = 3; M <= 97; ++M) {
        if (!is_prime(M)) continue;
        for (i64 idx = 1; idx < M - 1; ++idx) {
            const auto chi = make_character(M, idx);
            cplx s{0, 0};
            for (i64 n = 1; n <= M; ++n) s += chi(n);
            CHECK(std::abs(s) < 1e-10);
            CHECK(std::abs(chi(-1) - (chi.parity() ? -1.0 : 1.0)) < 1e-12);
        }
    }
    for (i64 M : {5, 13, 97}) {
        const auto chi = make_character(M, 1);
        std::uniform_int_distribution<i64> d(-100000, 100000);
        for (int k = 0; k < 1000; ++k) {
            const i64 a = d(rng), b = d(rng);
            CHECK(std::abs(chi(a * b) - chi(a) * chi(b)) < 1e-12);
        }
    }
}

TEST_CASE("gauss sums") {
    CHECK(std::abs(gauss_sum(make_character(5, 2)).epsilon - 1.0) < 1e-12);
    CHECK(std::abs(gauss_sum(make_character(3, 1)).epsilon - cplx(0, 1)) < 1e-12);
    CHECK_THROWS(gauss_sum(make_character(7, 0)));
    for (i64 M = 3; M <= 97; ++M) {
        if (!is_prime(M)) continue;
        for (i64 idx = 1; idx < M - 1; ++idx) {
            const auto g = gauss_sum(make_character(M, idx));
            CHECK(std::abs(std::abs(g.epsilon) - 1.0) < 1e-12);
            CHECK(std::abs(std::norm(g.value()) - static_cast<double>(M)) < 1e-10);
        }
    }
}

TEST_CASE("composition modulo M1*M2") {
    const auto c1 = make_character(3, 1), c2 = make_character(5, 1);
    const auto chi = compose(c1, c2);
    CHECK(chi.modulus() == 15);
    CHECK(std::abs(chi(2) - c1(2) * c2(2)) < 1e-15);
    // CRT table: the residue r mod 15 corresponds to (r mod 3, r mod 5).
    for (i64 r = 0; r < 15; ++r) {
        const cplx crt = c1.values()[static_cast<std::size_t>(r % 3)] * c2.values()[static_cast<std::size_t>(r % 5)];
        CHECK(std::abs(chi(r) - crt) < 1e-15);
    }
    CHECK(compose(make_character(3, 0), make_character(5, 0)).is_principal());
    CHECK_THROWS(compose(c2, make_character(5, 2)));
}
