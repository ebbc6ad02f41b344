#include "gl3twist/characters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gl3twist {

DirichletCharacter::DirichletCharacter(i64 modulus, i64 index)
    : modulus_(modulus), generator_(0), index_(index) {
    if (!is_prime(modulus)) throw std::invalid_argument("make_character: modulus must be prime");
    if (index < 0 || index >= std::max<i64>(modulus - 1, 1))
        throw std::invalid_argument("make_character: index out of range [0, M-1)");
    generator_ = primitive_root(modulus);
    values_.assign(static_cast<std::size_t>(modulus), cplx{0.0, 0.0});
    const i64 order = modulus - 1;
    i64 power = 1;
    for (i64 k = 0; k < order; ++k) {
        values_[static_cast<std::size_t>(power)] = unit_phase(mul_mod(index, k, order), order);
        power = mul_mod(power, generator_, modulus);
    }
}

i64 DirichletCharacter::order() const {
    const i64 group = modulus_ - 1;
    return group / std::gcd(index_, group);
}

int DirichletCharacter::parity() const {
    // chi(-1) = e(index * (M-1)/2 / (M-1)) = (-1)^index
    if (modulus_ == 2) return 0;
    return static_cast<int>(index_ % 2);
}

DirichletCharacter DirichletCharacter::conj() const {
    const i64 group = modulus_ - 1;
    return DirichletCharacter(modulus_, mod(-index_, group));
}

DirichletCharacter make_character(i64 M, i64 index) { return DirichletCharacter(M, index); }

cplx GaussSumValue::value() const { return epsilon * std::sqrt(static_cast<double>(modulus)); }

GaussSumValue gauss_sum(const DirichletCharacter& chi) {
    if (!chi.is_primitive()) throw std::invalid_argument("gauss_sum: character must be primitive");
    const i64 M = chi.modulus();
    cplx s{0.0, 0.0};
    for (i64 x = 1; x < M; ++x) s += chi(x) * unit_phase(x, M);
    return {s / std::sqrt(static_cast<double>(M)), M};
}

ComposedCharacter::ComposedCharacter(DirichletCharacter chi1, DirichletCharacter chi2)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)) {
    if (chi1_.modulus() == chi2_.modulus())
        throw std::invalid_argument("compose: moduli must be distinct primes");
}

ComposedCharacter compose(const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
    return ComposedCharacter(chi1, chi2);
}

}  // namespace gl3twist
