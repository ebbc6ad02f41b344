#pragma once

/**
 * @file characters.hpp
 * @brief Dirichlet characters modulo a prime, their products modulo M1*M2,
 *        and Gauss sums normalized as epsilon * sqrt(M).
 */

#include "gl3twist/arith.hpp"

#include <vector>

namespace gl3twist {

/// Character modulo a prime M fixed by chi(g) = e(index/(M-1)) where g is
/// the least primitive root. Immutable once built.
class DirichletCharacter {
public:
    DirichletCharacter(i64 modulus, i64 index);

    i64 modulus() const { return modulus_; }
    i64 generator() const { return generator_; }
    i64 index() const { return index_; }
    bool is_principal() const { return index_ == 0; }
    bool is_primitive() const { return index_ != 0; }
    /// Order of chi in the character group.
    i64 order() const;
    /// chi(-1) = (-1)^parity.
    int parity() const;

    cplx operator()(i64 n) const { return values_[static_cast<std::size_t>(mod(n, modulus_))]; }
    const std::vector<cplx>& values() const { return values_; }

    DirichletCharacter conj() const;

private:
    i64 modulus_;
    i64 generator_;
    i64 index_;
    std::vector<cplx> values_;
};

DirichletCharacter make_character(i64 M, i64 index);

inline cplx eval(const DirichletCharacter& chi, i64 n) { return chi(n); }

/// Gauss sum sum_x chi(x) e(x/M) written epsilon * sqrt(M).
struct GaussSumValue {
    cplx epsilon;
    i64 modulus;
    cplx value() const;
};

/// Throws std::invalid_argument for the principal character.
GaussSumValue gauss_sum(const DirichletCharacter& chi);

/// chi1 * chi2 modulo M1*M2 (evaluation only).
class ComposedCharacter {
public:
    ComposedCharacter(DirichletCharacter chi1, DirichletCharacter chi2);

    i64 modulus() const { return chi1_.modulus() * chi2_.modulus(); }
    const DirichletCharacter& first() const { return chi1_; }
    const DirichletCharacter& second() const { return chi2_; }
    int parity() const { return (chi1_.parity() + chi2_.parity()) % 2; }
    bool is_principal() const { return chi1_.is_principal() && chi2_.is_principal(); }

    cplx operator()(i64 n) const { return chi1_(n) * chi2_(n); }

private:
    DirichletCharacter chi1_;
    DirichletCharacter chi2_;
};

ComposedCharacter compose(const DirichletCharacter& chi1, const DirichletCharacter& chi2);

inline cplx eval(const ComposedCharacter& chi, i64 n) { return chi(n); }

}  // namespace gl3twist
