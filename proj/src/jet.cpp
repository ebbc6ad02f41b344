#include "gl3twist/jet.hpp"

#include <cmath>

namespace gl3twist {

cplx Jet::derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[static_cast<std::size_t>(k)] * f;
}

Jet& Jet::operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(cplx v) {
    for (int k = 0; k <= order_; ++k) c_[k] *= v;
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    const int n = std::min(order_, o.order_);
    std::array<cplx, kMaxOrder + 1> r{};
    for (int k = 0; k <= n; ++k)
        for (int i = 0; i <= k; ++i) r[k] += c_[i] * o.c_[k - i];
    c_ = r;
    order_ = n;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    if (o.c_[0] == cplx{0.0, 0.0}) throw std::domain_error("Jet: division by a jet with zero value");
    const int n = std::min(order_, o.order_);
    std::array<cplx, kMaxOrder + 1> r{};
    for (int k = 0; k <= n; ++k) {
        cplx s = c_[k];
        for (int i = 1; i <= k; ++i) s -= o.c_[i] * r[k - i];
        r[k] = s / o.c_[0];
    }
    c_ = r;
    order_ = n;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = -r.c_[k];
    return r;
}

Jet exp(const Jet& a) {
    // e' = a' e  =>  k e_k = sum_{i=1}^k i a_i e_{k-i}
    Jet e(a.order(), std::exp(a[0]));
    for (int k = 1; k <= a.order(); ++k) {
        cplx s{0.0, 0.0};
        for (int i = 1; i <= k; ++i) s += static_cast<double>(i) * a[i] * e[k - i];
        e[k] = s / static_cast<double>(k);
    }
    return e;
}

Jet log(const Jet& a) {
    if (a[0] == cplx{0.0, 0.0}) throw std::domain_error("Jet: log of a jet with zero value");
    // a l' = a'  =>  k l_k a_0 = k a_k - sum_{i=1}^{k-1} i l_i a_{k-i}
    Jet l(a.order(), std::log(a[0]));
    for (int k = 1; k <= a.order(); ++k) {
        cplx s = static_cast<double>(k) * a[k];
        for (int i = 1; i < k; ++i) s -= static_cast<double>(i) * l[i] * a[k - i];
        l[k] = s / (static_cast<double>(k) * a[0]);
    }
    return l;
}

Jet pow(const Jet& a, cplx p) { return exp(log(a) * p); }

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

}  // namespace gl3twist
