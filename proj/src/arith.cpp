#include "gl3twist/arith.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gl3twist {

cplx unit_phase(double z) {
    const double r = z - std::nearbyint(z);
    if (r == 0.0) return {1.0, 0.0};
    if (r == 0.5 || r == -0.5) return {-1.0, 0.0};
    return std::polar(1.0, kTwoPi * r);
}

cplx unit_phase(i64 num, i64 den) {
    if (den <= 0) throw std::invalid_argument("unit_phase: denominator must be positive");
    const i64 r = mod(num, den);
    if (r == 0) return {1.0, 0.0};
    if (2 * r == den) return {-1.0, 0.0};
    // Reduce to (-1/2, 1/2] before scaling to keep the angle small.
    const double frac = (2 * r > den) ? -static_cast<double>(den - r) / static_cast<double>(den)
                                      : static_cast<double>(r) / static_cast<double>(den);
    return std::polar(1.0, kTwoPi * frac);
}

i64 mul_mod(i64 a, i64 b, i64 q) {
    const __int128 p = static_cast<__int128>(mod(a, q)) * mod(b, q);
    return static_cast<i64>(p % q);
}

i64 mod_inverse(i64 a, i64 q) {
    if (q <= 0) throw std::invalid_argument("mod_inverse: modulus must be positive");
    if (q == 1) return 0;
    i64 old_r = mod(a, q), r = q;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 quot = old_r / r;
        old_r -= quot * r;
        std::swap(old_r, r);
        old_s -= quot * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) {
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " is not invertible modulo " +
                                std::to_string(q));
    }
    return mod(old_s, q);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

i64 ipow(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n <= 0) throw std::invalid_argument("factorize: argument must be positive");
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

i64 primitive_root(i64 p) {
    if (!is_prime(p)) throw std::invalid_argument("primitive_root: modulus must be prime");
    if (p == 2) return 1;
    const auto fac = factorize(p - 1);
    auto powmod = [p](i64 b, i64 e) {
        i64 r = 1;
        b = mod(b, p);
        while (e > 0) {
            if (e & 1) r = mul_mod(r, b, p);
            b = mul_mod(b, b, p);
            e >>= 1;
        }
        return r;
    };
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& [f, e] : fac) {
            if (powmod(g, (p - 1) / f) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

TowerFactorization factor_towers(i64 q, i64 M1, i64 M2) {
    if (q <= 0) throw std::invalid_argument("factor_towers: q must be positive");
    if (M1 == M2) throw std::invalid_argument("factor_towers: M1 and M2 must differ");
    TowerFactorization t;
    while (q % M1 == 0) {
        q /= M1;
        ++t.j;
    }
    while (q % M2 == 0) {
        q /= M2;
        ++t.k;
    }
    t.q0 = q;
    return t;
}

std::vector<FareyPair> farey_pairs(double Q) {
    if (!(Q >= 1.0)) throw std::invalid_argument("farey_pairs: Q must be at least 1");
    const i64 qmax = static_cast<i64>(std::floor(Q));
    const i64 a_lo = static_cast<i64>(std::floor(Q)) + 1;  // smallest integer > Q
    std::vector<FareyPair> out;
    for (i64 q = 1; q <= qmax; ++q) {
        // largest integer <= q + Q
        const i64 a_hi = static_cast<i64>(std::floor(static_cast<double>(q) + Q));
        for (i64 a = a_lo; a <= a_hi; ++a)
            if (std::gcd(a, q) == 1) out.push_back({a, q});
    }
    return out;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> lo, hi;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        lo.push_back(d);
        if (d * d != n) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

int mobius(i64 n) {
    int mu = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

i64 divisor_count(i64 n) {
    i64 d = 1;
    for (const auto& [p, e] : factorize(n)) d *= (e + 1);
    return d;
}

PrimeSieve::PrimeSieve(i64 limit) : spf_(static_cast<std::size_t>(std::max<i64>(limit, 1) + 1), 0) {
    const auto n = static_cast<i64>(spf_.size()) - 1;
    for (i64 i = 2; i <= n; ++i) {
        if (spf_[i] != 0) continue;
        for (i64 k = i; k <= n; k += i)
            if (spf_[k] == 0) spf_[k] = i;
    }
}

std::vector<std::pair<i64, int>> PrimeSieve::factorize(i64 n) const {
    std::vector<std::pair<i64, int>> out;
    while (n > 1) {
        const i64 p = smallest_factor(n);
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::vector<i64> PrimeSieve::primes() const {
    std::vector<i64> out;
    for (i64 i = 2; i <= limit(); ++i)
        if (is_prime(i)) out.push_back(i);
    return out;
}

RootTable::RootTable(i64 period) : period_(period), roots_(static_cast<std::size_t>(period)) {
    if (period <= 0) throw std::invalid_argument("RootTable: period must be positive");
    for (i64 k = 0; k < period; ++k) roots_[k] = unit_phase(k, period);
}

}  // namespace gl3twist
