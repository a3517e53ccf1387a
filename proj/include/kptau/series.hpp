#pragma once

#include <cstddef>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/scalar.hpp"

// Truncated power series in a local variable, stored by ascending coefficient.
namespace kptau::series {

template <class T>
using Series = std::vector<T>;

template <class T>
Series<T> multiply(const Series<T>& a, const Series<T>& b, std::size_t order) {
    Series<T> c(order, T(0));
    for (std::size_t i = 0; i < a.size() && i < order; ++i) {
        if (a[i] == T(0)) continue;
        for (std::size_t j = 0; j < b.size() && i + j < order; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

template <class T>
Series<T> reciprocal(const Series<T>& a, std::size_t order) {
    if (a.empty() || a[0] == T(0)) throw std::domain_error("series reciprocal of a non-unit");
    Series<T> r(order, T(0));
    if (order == 0) return r;
    r[0] = T(1) / a[0];
    for (std::size_t k = 1; k < order; ++k) {
        T s(0);
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * r[k - j];
        r[k] = -s * r[0];
    }
    return r;
}

// exp of a series with zero constant term: k b_k = sum_j j a_j b_{k-j}.
template <class T>
Series<T> exp_nilpotent(const Series<T>& a, std::size_t order) {
    Series<T> b(order, T(0));
    if (order == 0) return b;
    b[0] = T(1);
    for (std::size_t k = 1; k < order; ++k) {
        T s(0);
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) {
            if (a[j] == T(0)) continue;
            s += integer_scalar<T>(static_cast<std::int64_t>(j)) * a[j] * b[k - j];
        }
        b[k] = s / integer_scalar<T>(static_cast<std::int64_t>(k));
    }
    return b;
}

// Taylor coefficients of (x + e)^p at e = 0.
template <class T>
Series<T> power_at(const T& x, int p, std::size_t order) {
    Series<T> s(order, T(0));
    for (std::size_t d = 0; d < order && static_cast<int>(d) <= p; ++d)
        s[d] = binomial_scalar<T>(p, static_cast<int>(d)) * pow_int(x, p - static_cast<int>(d));
    return s;
}

// Taylor coefficients of (x + e)^{-p} at e = 0, p >= 0, x != 0.
template <class T>
Series<T> inverse_power_at(const T& x, int p, std::size_t order) {
    Series<T> s(order, T(0));
    const T inv = T(1) / x;
    for (std::size_t d = 0; d < order; ++d) {
        const int di = static_cast<int>(d);
        T c = binomial_scalar<T>(p + di - 1, di) * pow_int(inv, p + di);
        if (p == 0) c = (d == 0) ? T(1) : T(0);
        s[d] = (d % 2 == 0) ? c : T(-c);
    }
    return s;
}

}  // namespace kptau::series
