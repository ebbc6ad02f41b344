#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gl3twist/arith.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace gl3twist;

TEST_CASE("unit_phase at rational points") {
    CHECK(std::abs(unit_phase(0.0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(unit_phase(0.5) - cplx(-1, 0)) < 1e-15);
    const cplx third = unit_phase(1.0 / 3.0);
    CHECK(third.real() == doctest::Approx(std::cos(2 * kPi / 3)).epsilon(1e-14));
    CHECK(third.imag() == doctest::Approx(std::sin(2 * kPi / 3)).epsilon(1e-14));
    CHECK(std::abs(third - cplx(-0.5, 0.8660254037844386)) < 1e-12);
    for (double z : {-3.25, 7.125, 1e6 + 0.1})
        CHECK(std::abs(unit_phase(z)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(unit_phase(7, 21) - unit_phase(1.0 / 3.0)) < 1e-15);
    CHECK(std::abs(unit_phase(-1, 4) - cplx(0, -1)) < 1e-15);
}

TEST_CASE("mod_inverse against exhaustive search") {
    CHECK(mod_inverse(3, 7) == 5);
    for (i64 q : {1, 2, 9, 100, 997}) CHECK(mod_inverse(1, q) == (q == 1 ? 0 : 1));
    CHECK_THROWS_AS(mod_inverse(2, 4), std::domain_error);
    for (i64 q = 2; q <= 60; ++q) {
        for (i64 a = -q; a <= 2 * q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            i64 brute = -1;
            for (i64 x = 0; x < q; ++x)
                if (mod(a * x, q) == 1) brute = x;
            CHECK(mod_inverse(a, q) == brute);
        }
    }
}

TEST_CASE("mod_inverse is an involution for q up to 10^4") {
    for (i64 q = 2; q <= 10000; q += (q < 200 ? 1 : 37)) {
        for (i64 a = 1; a < q; a += 1 + q / 50) {
            if (std::gcd(a, q) != 1) continue;
            CHECK(mod_inverse(mod_inverse(a, q), q) == a);
        }
    }
}

TEST_CASE("factor_towers") {
    auto f = factor_towers(45, 3, 5);
    CHECK(f.q0 == 1);
    CHECK(f.j == 2);
    CHECK(f.k == 1);
    f = factor_towers(7, 3, 5);
    CHECK((f.q0 == 7 && f.j == 0 && f.k == 0));
    f = factor_towers(90, 3, 5);
    CHECK((f.q0 == 2 && f.j == 2 && f.k == 1));
    CHECK_THROWS(factor_towers(0, 3, 5));
    CHECK_THROWS(factor_towers(-4, 3, 5));
    CHECK_THROWS(factor_towers(10, 5, 5));
}

TEST_CASE("factor_towers round trip up to 10^5") {
    bool ok = true;
    for (i64 q = 1; q <= 100000; ++q) {
        const auto f = factor_towers(q, 3, 7);
        ok = ok && f.q0 * ipow(3, f.j) * ipow(7, f.k) == q && std::gcd(f.q0, i64{21}) == 1;
    }
    CHECK(ok);
}

TEST_CASE("farey_pairs enumeration") {
    auto p1 = farey_pairs(1.0);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0] == FareyPair{2, 1});
    auto p2 = farey_pairs(2.0);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0] == FareyPair{3, 1});
    CHECK(p2[1] == FareyPair{3, 2});
    CHECK_THROWS_AS(farey_pairs(0.5), std::invalid_argument);

    for (double Q : {1.0, 2.5, 5.0, 10.3, 50.0}) {
        double s = 0.0;
        const auto pairs = farey_pairs(Q);
        for (const auto& [a, q] : pairs) {
            CHECK(std::gcd(a, q) == 1);
            CHECK(static_cast<double>(a) > Q);
            CHECK(static_cast<double>(a) <= q + Q);
            s += 1.0 / static_cast<double>(a * q);
        }
        CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("multiplicative helpers") {
    CHECK(euler_phi(12) == 4);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(divisor_count(12) == 6);
    CHECK(divisors(12) == std::vector<i64>{1, 2, 3, 4, 6, 12});
    CHECK(primitive_root(7) == 3);
    CHECK(primitive_root(2) == 1);
    PrimeSieve sieve(1000);
    for (i64 n = 2; n <= 1000; ++n) CHECK(sieve.is_prime(n) == is_prime(n));
    CHECK(sieve.factorize(360) == factorize(360));
}
