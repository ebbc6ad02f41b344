#include "gl3twist/bump.hpp"
#include "gl3twist/quadrature.hpp"

#include <stdexcept>

namespace gl3twist {

namespace {

QuadratureOptions tight() {
    QuadratureOptions o;
    o.abs_tol = 1e-15;
    o.initial_panels = 8;
    return o;
}

}  // namespace

BumpFunction BumpFunction::V(double sharpness) {
    if (!(sharpness > 0.0)) throw std::invalid_argument("BumpFunction::V: sharpness must be positive");
    BumpFunction b(BumpKind::V, 1.0, 2.0);
    b.sharpness_ = sharpness;
    b.norm_ = 1.0;
    const double z = integrate_smooth([&](double x) { return b(x); }, 1.0, 2.0, tight()).value.real();
    b.norm_ = 1.0 / z;
    return b;
}

BumpFunction BumpFunction::U() { return BumpFunction(BumpKind::U, 0.5, 2.5); }

BumpFunction BumpFunction::W() { return BumpFunction(BumpKind::W, 0.5, 3.0); }

BumpFunction BumpFunction::piece(PieceShape shape) {
    if (!(shape.lambda > 1.0) || shape.lo < 0.0 || !(shape.hi >= shape.lo * shape.lambda))
        throw std::invalid_argument("BumpFunction::piece: inconsistent shape");
    const double top = shape.hi * shape.lambda;
    const double bottom = shape.lo > 0.0 ? shape.lo : -top;
    BumpFunction b = shape.side > 0 ? BumpFunction(BumpKind::WJ, bottom, top)
                                    : BumpFunction(BumpKind::WJ, -top, -bottom);
    b.shape_ = shape;
    if (shape.lo == 0.0) {
        // The central piece is even: 1 - T(|x|).
        b.lower_ = -top;
        b.upper_ = top;
    }
    return b;
}

double BumpFunction::derivative(double x, int k) const {
    if (k == 0) return (*this)(x);
    return jet(x, k).derivative(k).real();
}

cplx BumpFunction::mellin(cplx w, double tol) const {
    if (lower_ <= 0.0) throw std::domain_error("mellin: support must lie in the positive axis");
    const double sr = w.real() - 1.0, si = w.imag();
    QuadratureOptions o;
    o.abs_tol = tol;
    o.initial_panels = 8;
    auto g = [&](double x) { return (*this)(x) * std::pow(x, sr); };
    auto f = [&](double x) { return si * std::log(x) / kTwoPi; };
    auto fp = [&](double x) { return si / (kTwoPi * x); };
    return integrate_oscillatory(g, f, fp, lower_, upper_, o).value;
}

double BumpFunction::integral() const { return cumulative(upper_); }

double BumpFunction::cumulative(double x) const {
    if (x <= lower_) return 0.0;
    const double hi = std::min(x, upper_);
    return integrate_smooth([&](double v) { return (*this)(v); }, lower_, hi, tight()).value.real();
}

}  // namespace gl3twist
