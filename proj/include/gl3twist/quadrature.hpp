#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod (7/15) quadrature of g(v) e(f(v)) with
 *        initial panels no wider than a fixed fraction of the local phase
 *        period 1/|f'(v)|, followed by bisection on the largest error.
 */

#include "gl3twist/arith.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace gl3twist {

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    int panels = 0;
};

/// Thrown when the panel budget is exhausted; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadratureResult& best() const { return best_; }

private:
    QuadratureResult best_;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    int max_panels = 20000;
    /// Initial panel width as a fraction of the phase period 1/|f'|.
    double period_fraction = 0.5;
    /// Minimum number of initial panels.
    int initial_panels = 2;
};

namespace detail {

inline constexpr double kGKNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& h, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const cplx fc = h(c);
    cplx kr = fc * kKronrodWeights[7];
    cplx ga = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = r * kGKNodes[i];
        const cplx s = h(c - dx) + h(c + dx);
        kr += kKronrodWeights[i] * s;
        if (i % 2 == 1) ga += kGaussWeights[i / 2] * s;
    }
    return {a, b, kr * r, std::abs((kr - ga) * r)};
}

}  // namespace detail

/// Integrates h over [a,b] starting from the given breakpoints.
template <class F>
QuadratureResult integrate_on_panels(const F& h, const std::vector<double>& breaks, const QuadratureOptions& opt) {
    std::priority_queue<detail::Panel> heap;
    cplx total{0.0, 0.0};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::gk15(h, breaks[i], breaks[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!heap.empty() && err > tolerance()) {
        if (panels >= opt.max_panels) {
            throw QuadratureError("integrate: panel budget exhausted", {total, err, panels});
        }
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("integrate: panel below resolution", {total, err, panels});
        }
        heap.pop();
        const auto left = detail::gk15(h, worst.a, mid);
        const auto right = detail::gk15(h, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Re-sum to remove drift from incremental updates.
    cplx exact{0.0, 0.0};
    double e2 = 0.0;
    while (!heap.empty()) {
        exact += heap.top().value;
        e2 += heap.top().error;
        heap.pop();
    }
    return {exact, e2, panels};
}

/// Breakpoints whose panels are at most period_fraction / |f'| wide.
template <class FP>
std::vector<double> phase_breaks(const FP& fprime, double a, double b, const QuadratureOptions& opt) {
    std::vector<double> br{a};
    const double base = (b - a) / std::max(1, opt.initial_panels);
    double x = a;
    while (x < b) {
        double w = std::min(base, b - x);
        for (int it = 0; it < 60; ++it) {
            const double slope = std::max(std::abs(fprime(x)), std::abs(fprime(x + w)));
            if (slope * w <= opt.period_fraction) break;
            w = opt.period_fraction / slope;
        }
        w = std::max(w, (b - a) * 1e-9);
        x = std::min(b, x + w);
        if (b - x < 1e-14 * (b - a)) x = b;
        br.push_back(x);
    }
    return br;
}

/// Integral of g(v) e(f(v)) over [a,b]; f' is supplied analytically.
template <class G, class F, class FP>
QuadratureResult integrate_oscillatory(const G& g, const F& f, const FP& fprime, double a, double b,
                                       const QuadratureOptions& opt = {}) {
    if (!(b > a)) return {};
    const auto br = phase_breaks(fprime, a, b, opt);
    auto h = [&](double v) -> cplx { return cplx(g(v)) * unit_phase(f(v)); };
    return integrate_on_panels(h, br, opt);
}

/// Integral of a smooth non-oscillatory g over [a,b].
template <class G>
QuadratureResult integrate_smooth(const G& g, double a, double b, const QuadratureOptions& opt = {}) {
    if (!(b > a)) return {};
    std::vector<double> br;
    const int n = std::max(1, opt.initial_panels);
    for (int i = 0; i <= n; ++i) br.push_back(a + (b - a) * i / n);
    auto h = [&](double v) -> cplx { return cplx(g(v)); };
    return integrate_on_panels(h, br, opt);
}

/// Type-erased entry point.
QuadratureResult integrate(const std::function<cplx(double)>& g, const std::function<double(double)>& f,
                           const std::function<double(double)>& fprime, double a, double b,
                           const QuadratureOptions& opt = {});

/// Gauss-Legendre nodes and weights on [-1,1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

}  // namespace gl3twist
