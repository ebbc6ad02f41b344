#pragma once

/**
 * @file jet.hpp
 * @brief Truncated complex Taylor series f(x0 + e) = sum_k c_k e^k used to
 *        obtain exact derivatives of closed-form weights and phases.
 */

#include "gl3twist/arith.hpp"

#include <array>
#include <stdexcept>

namespace gl3twist {

class Jet {
public:
    static constexpr int kMaxOrder = 16;

    Jet() = default;
    Jet(int order, cplx value) : order_(check(order)) { c_[0] = value; }
    static Jet variable(int order, cplx x0) {
        Jet j(order, x0);
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    cplx value() const { return c_[0]; }
    double real_value() const { return c_[0].real(); }
    const cplx& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    cplx& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    /// k-th derivative at the expansion point.
    cplx derivative(int k) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(cplx v) { c_[0] += v; return *this; }
    Jet& operator-=(cplx v) { c_[0] -= v; return *this; }
    Jet& operator*=(cplx v);
    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
    friend Jet operator+(Jet a, cplx v) { return a += v; }
    friend Jet operator+(cplx v, Jet a) { return a += v; }
    friend Jet operator-(Jet a, cplx v) { return a -= v; }
    friend Jet operator-(cplx v, const Jet& a) { return (-a) += v; }
    friend Jet operator*(Jet a, cplx v) { return a *= v; }
    friend Jet operator*(cplx v, Jet a) { return a *= v; }
    friend Jet operator/(Jet a, cplx v) { return a *= (1.0 / v); }
    friend Jet operator/(cplx v, const Jet& a) { return Jet(a.order(), v) / a; }

private:
    static int check(int order) {
        if (order < 0 || order > kMaxOrder) throw std::invalid_argument("Jet: order out of range");
        return order;
    }
    int order_ = 0;
    std::array<cplx, kMaxOrder + 1> c_{};
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
/// a^p on the principal branch of log.
Jet pow(const Jet& a, cplx p);
Jet sqrt(const Jet& a);

/// Real part of the expansion point, used for branch decisions in
/// piecewise-defined weights evaluated on either doubles or jets.
inline double anchor(double x) { return x; }
inline double anchor(const Jet& x) { return x.real_value(); }

template <class T> T make_zero_like(const T& x);
template <> inline double make_zero_like<double>(const double&) { return 0.0; }
template <> inline Jet make_zero_like<Jet>(const Jet& x) { return Jet(x.order(), 0.0); }

template <class T> T make_const_like(const T& x, double v);
template <> inline double make_const_like<double>(const double&, double v) { return v; }
template <> inline Jet make_const_like<Jet>(const Jet& x, double v) { return Jet(x.order(), v); }

}  // namespace gl3twist
