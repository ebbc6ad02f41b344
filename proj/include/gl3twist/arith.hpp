#pragma once

/**
 * @file arith.hpp
 * @brief Exact modular arithmetic, tower factorization against two fixed
 *        primes, Farey-type enumeration and the additive character e(z).
 */

#include <complex>
#include <cstdint>
#include <vector>

namespace gl3twist {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// e(z) = exp(2 pi i z). The argument is reduced to [-1/2, 1/2] first.
cplx unit_phase(double z);

/// e(num/den) for an exact rational argument; den > 0.
cplx unit_phase(i64 num, i64 den);

/// Least non-negative residue of a modulo q (q > 0).
constexpr i64 mod(i64 a, i64 q) {
    i64 r = a % q;
    return r < 0 ? r + q : r;
}

/// (a*b) mod q without overflow for |a|,|b| < 2^63.
i64 mul_mod(i64 a, i64 b, i64 q);

/// Inverse of a modulo q as a residue in [0,q). Throws std::domain_error
/// when gcd(a,q) > 1. For q = 1 the only residue is 0.
i64 mod_inverse(i64 a, i64 q);

bool is_prime(i64 n);

/// Least primitive root modulo a prime p.
i64 primitive_root(i64 p);

/// q = q0 * M1^j * M2^k with gcd(q0, M1*M2) = 1.
struct TowerFactorization {
    i64 q0 = 1;
    int j = 0;
    int k = 0;
};

TowerFactorization factor_towers(i64 q, i64 M1, i64 M2);

i64 ipow(i64 base, int exp);

/// A pair (a,q) of the Kloosterman-type circle method: 1 <= q <= Q,
/// Q < a <= q + Q, gcd(a,q) = 1.
struct FareyPair {
    i64 a;
    i64 q;
    friend bool operator==(const FareyPair&, const FareyPair&) = default;
};

/// All pairs in (q,a)-lexicographic order. Throws std::invalid_argument
/// when Q < 1.
std::vector<FareyPair> farey_pairs(double Q);

/// Prime factorization as (prime, exponent) pairs in increasing order.
std::vector<std::pair<i64, int>> factorize(i64 n);

std::vector<i64> divisors(i64 n);
int mobius(i64 n);
i64 euler_phi(i64 n);
i64 divisor_count(i64 n);

/// Smallest-prime-factor sieve on [0, limit].
class PrimeSieve {
public:
    explicit PrimeSieve(i64 limit);
    i64 limit() const { return static_cast<i64>(spf_.size()) - 1; }
    i64 smallest_factor(i64 n) const { return spf_.at(static_cast<std::size_t>(n)); }
    bool is_prime(i64 n) const { return n >= 2 && smallest_factor(n) == n; }
    std::vector<std::pair<i64, int>> factorize(i64 n) const;
    std::vector<i64> primes() const;

private:
    std::vector<i64> spf_;
};

/// Table of e(k/P) for k in [0,P), so that exact residues index phases.
class RootTable {
public:
    explicit RootTable(i64 period);
    i64 period() const { return period_; }
    const cplx& operator[](i64 k) const { return roots_[static_cast<std::size_t>(mod(k, period_))]; }

private:
    i64 period_;
    std::vector<cplx> roots_;
};

}  // namespace gl3twist
