#pragma once

/**
 * @file expsums.hpp
 * @brief Complete exponential and character sums. Every sum with a closed
 *        evaluation has a brute-force twin used as its oracle.
 *
 * Inverse conventions (all canonical residues):
 *  - Poisson sum E: a-bar is the inverse of a modulo q*M1.
 *  - Congruence sum D: a-bar and (a*M1)-bar are taken modulo q,
 *    (q*M2)-bar modulo M1.
 *  - Twisted Kloosterman sum B: (a*M1)-bar modulo q and the outer bar on
 *    (a*M1)-bar*M1 + b*q modulo the Kloosterman modulus q*M1/n1.
 */

#include "gl3twist/characters.hpp"

#include <optional>

namespace gl3twist {

/// S(m,n;c) = sum over x mod c coprime to c of e((m x + n xbar)/c).
cplx kloosterman(i64 m, i64 n, i64 c);

/// Ramanujan sum R_c(u) = sum over primitive residues g mod c of e(u g/c).
double ramanujan(i64 u, i64 c);

/// R_c(u) by the divisor formula sum_{d | (u,c)} d mu(c/d).
i64 ramanujan_mobius(i64 u, i64 c);

/// d(c) sqrt(c) sqrt(gcd(m,n,c)).
double weil_bound(i64 m, i64 n, i64 c);

struct CharSumParams {
    i64 a = 1;
    i64 b = 1;
    i64 m = 0;
    i64 n = 1;
    i64 q = 1;
    DirichletCharacter chi1;
    DirichletCharacter chi2;

    i64 M1() const { return chi1.modulus(); }
    i64 M2() const { return chi2.modulus(); }
};

/// (m - M2 abar)/M1^{j+1} M2^k with abar modulo q*M1, when integral.
std::optional<i64> poisson_shift(const CharSumParams& p);
/// (m - M2 abar)/M2^k with abar modulo q, when integral.
std::optional<i64> congruence_shift(const CharSumParams& p);

/// Sum over c mod q M1^2 M2 with c = n mod M1 of chi(c) e((m - M2 abar) c/(q M1^2 M2)).
cplx script_E_bruteforce(const CharSumParams& p);
cplx script_E_closed(const CharSumParams& p);

/// Sum over c mod qM of chi(c) e(cm/(qM) - c((a M1)bar M1 + b q)/(q M1)).
cplx script_D_bruteforce(const CharSumParams& p);
cplx script_D_closed(const CharSumParams& p);

struct TwistedKloostermanParams {
    i64 n1 = 1;
    i64 n2 = 0;
    i64 m = 0;
    i64 a = 1;
    i64 q = 1;
    i64 M2 = 5;
    DirichletCharacter chi1;
};

/// The b-sum over (b,M1)=1 of chi1bar((qM2)bar m - b) S(((aM1)bar M1 + bq)bar, n2; qM1/n1).
cplx script_B_direct(const TwistedKloostermanParams& p);
/// chi1(q) S(a M1bar, n2 M1bar; q/n1) times the M1-part.
cplx script_B_factored(const TwistedKloostermanParams& p);
/// Direct value after checking it against the factored form (std::logic_error on mismatch).
cplx script_B(const TwistedKloostermanParams& p);

struct CStarParams {
    i64 n1 = 1;
    i64 m = 0, mprime = 0;
    i64 a = 1, aprime = 1;
    i64 q = 1, qprime = 1;
    i64 M2 = 5;
    DirichletCharacter chi1;
};

/// Sum over c mod qhat qhat' M1 of B(n1,c,m,a,q) conj B(n1,c,m',a',q') e(n2 c/(qhat qhat' M1)).
cplx script_C_star(i64 n2, const CStarParams& p);

/// Envelope of |C*(n2)| without its constant; 0 where the sum must vanish.
double script_C_star_envelope(i64 n2, const CStarParams& p);

}  // namespace gl3twist
