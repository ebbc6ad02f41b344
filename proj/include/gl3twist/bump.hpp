#pragma once

/**
 * @file bump.hpp
 * @brief Smooth compactly supported weights built from exp(-1/(1-x^2))
 *        and the smooth step exp(-1/t) / (exp(-1/t) + exp(-1/(1-t))).
 *
 *  - V: c exp(-s/(1-u^2)), u = 2x - 3, support [1,2], integral one
 *       (s is a sharpness parameter, default 1).
 *  - U: support [1/2, 5/2], identically one on [1,2].
 *  - W: support [1/2, 3], identically one on [1,2].
 *  - WJ: one piece of the logarithmic partition of unity (see
 *    oscillatory.hpp, partition_WJ).
 */

#include "gl3twist/jet.hpp"

#include <cmath>

namespace gl3twist {

enum class BumpKind { V, U, W, WJ };

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
template <class T>
T smooth_step(const T& t) {
    using std::exp;
    constexpr double kFloor = 1.0 / 740.0;  // exp(-1/t) underflows below this
    const double t0 = anchor(t);
    if (t0 <= kFloor) return make_zero_like(t);
    if (t0 >= 1.0 - kFloor) return make_const_like(t, 1.0);
    const T p = exp(-1.0 / t);
    const T q = exp(-1.0 / (1.0 - t));
    return p / (p + q);
}

class BumpFunction {
public:
    /// Parameters of a partition piece: rises on [lo, lo*lambda] (or is one
    /// from 0 when lo == 0) and falls on [hi, hi*lambda]; mirrored when
    /// side < 0.
    struct PieceShape {
        double lo = 0.0;
        double hi = 1.0;
        double lambda = 1.1;
        int side = 1;
    };

    static BumpFunction V(double sharpness = 1.0);
    static BumpFunction U();
    static BumpFunction W();
    static BumpFunction piece(PieceShape shape);

    BumpKind kind() const { return kind_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double sharpness() const { return sharpness_; }
    const PieceShape& shape() const { return shape_; }

    double operator()(double x) const { return eval(x); }
    /// Taylor jet of the weight at x (real-valued coefficients).
    Jet jet(double x, int order) const { return eval(Jet::variable(order, x)); }
    /// k-th derivative at x.
    double derivative(double x, int k) const;

    /// Mellin transform: integral of phi(x) x^{w-1} dx.
    cplx mellin(cplx w, double tol = 1e-13) const;
    /// Integral of phi over its support.
    double integral() const;
    /// Integral of phi from lower() to x.
    double cumulative(double x) const;

    /// Generic evaluator used both for doubles and jets.
    template <class T>
    T eval(const T& x) const;

private:
    BumpFunction(BumpKind kind, double lo, double hi) : kind_(kind), lower_(lo), upper_(hi) {}

    BumpKind kind_;
    double lower_;
    double upper_;
    double sharpness_ = 1.0;
    double norm_ = 1.0;
    PieceShape shape_{};
};

template <class T>
T BumpFunction::eval(const T& x) const {
    using std::exp;
    using std::log;
    const double x0 = anchor(x);
    if (!(x0 > lower_ && x0 < upper_)) return make_zero_like(x);
    switch (kind_) {
        case BumpKind::V: {
            const T u = 2.0 * x - 3.0;
            const T d = 1.0 - u * u;
            if (anchor(d) * 740.0 <= sharpness_) return make_zero_like(x);
            return norm_ * exp(-sharpness_ / d);
        }
        case BumpKind::U: {
            if (x0 < 1.0) return smooth_step(2.0 * x - 1.0);
            if (x0 <= 2.0) return make_const_like(x, 1.0);
            return smooth_step(5.0 - 2.0 * x);
        }
        case BumpKind::W: {
            if (x0 < 1.0) return smooth_step(2.0 * x - 1.0);
            if (x0 <= 2.0) return make_const_like(x, 1.0);
            return smooth_step(3.0 - x);
        }
        case BumpKind::WJ: {
            const bool central = shape_.lo == 0.0;
            const bool flip = central ? x0 < 0.0 : shape_.side < 0;
            const T y = flip ? -x : x;
            const double ll = std::log(shape_.lambda);
            const double y0 = anchor(y);
            T rise = make_const_like(x, 1.0);
            if (!central) rise = smooth_step(log(y / shape_.lo) / ll);
            if (y0 <= shape_.hi) return rise;
            return rise - smooth_step(log(y / shape_.hi) / ll);
        }
    }
    return make_zero_like(x);
}

}  // namespace gl3twist
