#include "gl3twist/special.hpp"

#include <cmath>
#include <stdexcept>

namespace gl3twist {

namespace {

bool is_nonpositive_integer(cplx z) {
    if (std::abs(z.imag()) > 1e-14 * std::max(1.0, std::abs(z.real()))) return false;
    if (z.real() > 0.5) return false;
    return std::abs(z.real() - std::nearbyint(z.real())) < 1e-13;
}

// Stirling series for |z| >= 15 and Re z > 0.
cplx stirling(cplx z) {
    static constexpr double B[] = {1.0 / 6,      -1.0 / 30,      1.0 / 42,       -1.0 / 30,
                                   5.0 / 66,     -691.0 / 2730,  7.0 / 6,        -3617.0 / 510,
                                   43867.0 / 798, -174611.0 / 330, 854513.0 / 138};
    const cplx zinv = 1.0 / z;
    const cplx z2inv = zinv * zinv;
    cplx series{0.0, 0.0};
    cplx pow = zinv;
    for (int k = 1; k <= 11; ++k) {
        series += B[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pow;
        pow *= z2inv;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw std::domain_error("log_gamma: pole at a non-positive integer");
    // Shift right until the Stirling series is accurate; the accumulated
    // principal logs give the branch that is continuous off the negative axis.
    cplx shift{0.0, 0.0};
    cplx w = z;
    while (w.real() < 0.0 || std::abs(w) < 15.0) {
        shift += std::log(w);
        w += 1.0;
    }
    return stirling(w) - shift;
}

cplx log_gamma_R(cplx s) { return -0.5 * s * std::log(kPi) + log_gamma(0.5 * s); }

cplx log_gamma_C(cplx s) { return std::log(2.0) - s * std::log(kTwoPi) + log_gamma(s); }

ArchimedeanParams ArchimedeanParams::spherical(std::array<cplx, 3> mu) {
    if (std::abs(mu[0] + mu[1] + mu[2]) > 1e-12)
        throw std::invalid_argument("ArchimedeanParams: mu must sum to zero");
    ArchimedeanParams p;
    p.mu = mu;
    for (const auto& m : mu) p.factors.push_back({FactorKind::Real, m, 0});
    p.label = "spherical";
    return p;
}

ArchimedeanParams ArchimedeanParams::from_nu(cplx nu1, cplx nu2) {
    auto p = spherical({-nu1 - 2.0 * nu2 + 1.0, -nu1 + nu2, 2.0 * nu1 + nu2 - 1.0});
    p.nu = std::array<cplx, 2>{nu1, nu2};
    return p;
}

ArchimedeanParams ArchimedeanParams::holomorphic_sym2(int weight) {
    if (weight < 2) throw std::invalid_argument("holomorphic_sym2: weight must be at least 2");
    ArchimedeanParams p;
    const double k1 = weight - 1;
    p.mu = {cplx{k1, 0.0}, cplx{0.0, 0.0}, cplx{-k1, 0.0}};
    p.factors = {{FactorKind::Real, 0.0, 1}, {FactorKind::Complex, k1, 0}};
    p.label = "sym2-holomorphic";
    return p;
}

double ArchimedeanParams::rightmost_pole() const {
    double r = -1e300;
    for (const auto& f : factors) {
        // Gamma_R(1+s+mu+d'): poles at s = -1 - mu - d' - 2j, worst when d' = 0.
        // Gamma_C(1+s+k): poles at s = -1 - k - j.
        r = std::max(r, -1.0 - f.shift.real());
    }
    return r;
}

bool ArchimedeanParams::exceeds_lrs_bound() const {
    for (const auto& m : mu)
        if (std::abs(m.real()) > 0.4) return true;
    return false;
}

std::optional<cplx> log_gamma_ell(cplx s, int ell, const ArchimedeanParams& p) {
    if (ell != 0 && ell != 1) throw std::invalid_argument("gamma_ell: ell must be 0 or 1");
    cplx acc = -std::log(2.0);
    int idx = 0;
    for (const auto& f : p.factors) {
        ++idx;
        cplx num, den;
        if (f.kind == FactorKind::Real) {
            const int d = (f.parity + ell) % 2;
            num = 1.0 + s + f.shift + static_cast<double>(d);
            den = -s - f.shift + static_cast<double>(d);
            if (is_nonpositive_integer(0.5 * num))
                throw std::domain_error("gamma_ell: pole of the numerator Gamma_R in factor " + std::to_string(idx));
            if (is_nonpositive_integer(0.5 * den)) return std::nullopt;
            acc += log_gamma_R(num) - log_gamma_R(den);
        } else {
            num = 1.0 + s + f.shift;
            den = -s + f.shift;
            if (is_nonpositive_integer(num))
                throw std::domain_error("gamma_ell: pole of the numerator Gamma_C in factor " + std::to_string(idx));
            if (is_nonpositive_integer(den)) return std::nullopt;
            acc += log_gamma_C(num) - log_gamma_C(den);
        }
    }
    return acc;
}

cplx gamma_ell(cplx s, int ell, const ArchimedeanParams& p) {
    const auto lg = log_gamma_ell(s, ell, p);
    return lg ? std::exp(*lg) : cplx{0.0, 0.0};
}

cplx gamma_pm(cplx s, int sign, const ArchimedeanParams& p) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("gamma_pm: sign must be +1 or -1");
    const cplx i{0.0, 1.0};
    return gamma_ell(s, 0, p) - static_cast<double>(sign) * i * gamma_ell(s, 1, p);
}

namespace {

double psi_base(PsiNormalization norm) { return norm == PsiNormalization::TwoE ? 2.0 * std::exp(1.0) : std::exp(1.0); }

}  // namespace

cplx psi_factor(double tau, int sign, const ArchimedeanParams& p, PsiNormalization norm) {
    if (std::abs(tau) < 2.0) throw std::domain_error("psi_factor: |tau| must be at least 2");
    const cplx i{0.0, 1.0};
    const cplx s{-0.5, tau};
    // Combine in the log domain so the normalizing phase is removed exactly.
    const double log_base = std::log(std::abs(tau) / (psi_base(norm) * kPi));
    const cplx strip = -3.0 * i * tau * log_base;
    cplx total{0.0, 0.0};
    for (int ell = 0; ell <= 1; ++ell) {
        const auto lg = log_gamma_ell(s, ell, p);
        if (!lg) continue;
        const cplx coef = ell == 0 ? cplx{1.0, 0.0} : -static_cast<double>(sign) * i;
        total += coef * std::exp(*lg + strip);
    }
    return total;
}

cplx psi_derivative(double tau, int sign, const ArchimedeanParams& p, PsiNormalization norm, double h) {
    return (psi_factor(tau + h, sign, p, norm) - psi_factor(tau - h, sign, p, norm)) / (2.0 * h);
}

}  // namespace gl3twist
