#pragma once

/**
 * @file special.hpp
 * @brief Complex log-Gamma and the GL(3) archimedean factors gamma_l,
 *        gamma_pm and the flattened factor Psi_pm.
 *
 * The archimedean type is a list of local factors. A real factor with
 * shift mu and parity d contributes
 *     Gamma_R(1 + s + mu + d') / Gamma_R(-s - mu + d'),   d' = (d + l) mod 2,
 * and a complex factor with shift k contributes
 *     Gamma_C(1 + s + k) / Gamma_C(-s + k),
 * where Gamma_R(s) = pi^{-s/2} Gamma(s/2), Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
 * Then gamma_l(s) = (1/2) * product of factors. Three real factors of parity
 * zero reproduce the spherical Maass case with parameters (mu1, mu2, mu3).
 */

#include "gl3twist/arith.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gl3twist {

/// Continuous-branch log Gamma (analytic off the negative real axis;
/// agrees with the principal log of Gamma on the positive axis).
/// Throws std::domain_error at poles.
cplx log_gamma(cplx z);

/// log Gamma_R(s) and log Gamma_C(s).
cplx log_gamma_R(cplx s);
cplx log_gamma_C(cplx s);

enum class FactorKind { Real, Complex };

struct LocalFactor {
    FactorKind kind;
    cplx shift;    ///< mu for real factors, k for complex ones
    int parity = 0;  ///< only for real factors
};

struct ArchimedeanParams {
    std::array<cplx, 3> mu{};
    std::optional<std::array<cplx, 2>> nu;
    std::vector<LocalFactor> factors;
    std::string label;

    /// Three real factors of parity zero; mu must sum to zero.
    static ArchimedeanParams spherical(std::array<cplx, 3> mu);
    /// mu1 = -nu1 - 2 nu2 + 1, mu2 = -nu1 + nu2, mu3 = 2 nu1 + nu2 - 1.
    static ArchimedeanParams from_nu(cplx nu1, cplx nu2);
    /// Symmetric-square lift of a holomorphic form of weight k: one real
    /// factor of parity one and one complex factor with shift k - 1.
    /// The recorded triple is (k-1, 0, -(k-1)).
    static ArchimedeanParams holomorphic_sym2(int weight);

    /// Real part of the rightmost pole of gamma_pm(s).
    double rightmost_pole() const;
    /// True when some |Re mu_j| exceeds the Luo-Rudnick-Sarnak bound 2/5.
    bool exceeds_lrs_bound() const;
};

/// gamma_l(s) for l in {0,1}. Poles of a denominator Gamma give zero;
/// a numerator pole throws std::domain_error naming the factor.
cplx gamma_ell(cplx s, int ell, const ArchimedeanParams& p);

/// log |gamma_l(s)| and arg, or nullopt where gamma_l(s) = 0.
std::optional<cplx> log_gamma_ell(cplx s, int ell, const ArchimedeanParams& p);

/// gamma_+(s) = gamma_0 - i gamma_1 (sign = +1), gamma_- = gamma_0 + i gamma_1.
cplx gamma_pm(cplx s, int sign, const ArchimedeanParams& p);

/// Normalizing phase (|tau|/(base pi))^{3 i tau}. For zero-sum parameters
/// Stirling gives base = 2e; the value e is retained for comparison.
enum class PsiNormalization { TwoE, E };

/// Psi_pm(tau) = gamma_pm(-1/2 + i tau) (|tau|/(base pi))^{-3 i tau}; |tau| >= 2.
cplx psi_factor(double tau, int sign, const ArchimedeanParams& p,
                PsiNormalization norm = PsiNormalization::TwoE);

/// Central finite-difference derivative of psi_factor with step h.
cplx psi_derivative(double tau, int sign, const ArchimedeanParams& p,
                    PsiNormalization norm = PsiNormalization::TwoE, double h = 1e-3);

}  // namespace gl3twist
