#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/matrix.hpp"
#include "kptau/scalar.hpp"
#include "kptau/series.hpp"

namespace kptau {

template <class T>
struct JordanBlock {
    T eigenvalue;
    int size;
};

// Block-diagonal upper-triangular Jordan matrix given by (eigenvalue, size) blocks.
// Multi-index (block j, inner index nu) flattens to offset(j) + nu - 1.
template <class T>
class JordanSpec {
public:
    JordanSpec() = default;
    explicit JordanSpec(std::vector<JordanBlock<T>> blocks) : blocks_(std::move(blocks)) {
        for (const auto& b : blocks_)
            if (b.size <= 0) throw ShapeError("Jordan block size must be positive");
    }
    static JordanSpec diagonal(const std::vector<T>& eigs) {
        std::vector<JordanBlock<T>> b;
        for (const auto& e : eigs) b.push_back({e, 1});
        return JordanSpec(std::move(b));
    }
    static JordanSpec nilpotent(int n) { return JordanSpec({{T(0), n}}); }

    const std::vector<JordanBlock<T>>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    std::size_t dim() const {
        std::size_t d = 0;
        for (const auto& b : blocks_) d += static_cast<std::size_t>(b.size);
        return d;
    }
    std::size_t offset(std::size_t j) const {
        std::size_t d = 0;
        for (std::size_t k = 0; k < j; ++k) d += static_cast<std::size_t>(blocks_[k].size);
        return d;
    }
    bool is_nilpotent() const {
        return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.eigenvalue == T(0); });
    }
    bool is_nondegenerate() const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            for (std::size_t j = i + 1; j < blocks_.size(); ++j)
                if (blocks_[i].eigenvalue == blocks_[j].eigenvalue) return false;
        return true;
    }
    double spectral_radius() const {
        double r = 0.0;
        for (const auto& b : blocks_) r = std::max(r, magnitude(b.eigenvalue));
        return r;
    }
    bool shares_eigenvalue_with(const JordanSpec& o) const {
        for (const auto& a : blocks_)
            for (const auto& b : o.blocks_)
                if (a.eigenvalue == b.eigenvalue) return true;
        return false;
    }
    // Indicator of the leading (nu = 1) slot of every block.
    Vector<T> leading_indicator() const {
        Vector<T> v(dim(), T(0));
        for (std::size_t j = 0; j < blocks_.size(); ++j) v[offset(j)] = T(1);
        return v;
    }

private:
    std::vector<JordanBlock<T>> blocks_;
};

template <class U, class T>
JordanSpec<U> spec_cast(const JordanSpec<T>& s) {
    std::vector<JordanBlock<U>> b;
    for (const auto& blk : s.blocks()) b.push_back({scalar_cast<U>(blk.eigenvalue), blk.size});
    return JordanSpec<U>(std::move(b));
}

// Finitely supported KP times t_1..t_K; index i is stored at position i-1.
template <class T>
class FlowVector {
public:
    FlowVector() : t_(1, T(0)) {}
    explicit FlowVector(std::vector<T> t) : t_(std::move(t)) {
        if (t_.empty()) throw ShapeError("flow vector needs K >= 1");
    }
    static FlowVector zero(std::size_t k) { return FlowVector(std::vector<T>(std::max<std::size_t>(k, 1), T(0))); }

    std::size_t K() const { return t_.size(); }
    // t_i for i >= 1, zero beyond K.
    T operator[](std::size_t i) const { return (i >= 1 && i <= t_.size()) ? t_[i - 1] : T(0); }
    T& at(std::size_t i) {
        if (i < 1) throw ShapeError("flow index starts at 1");
        if (i > t_.size()) t_.resize(i, T(0));
        return t_[i - 1];
    }
    const std::vector<T>& values() const { return t_; }

    friend FlowVector operator+(const FlowVector& a, const FlowVector& b) {
        std::vector<T> r(std::max(a.K(), b.K()), T(0));
        for (std::size_t i = 1; i <= r.size(); ++i) r[i - 1] = a[i] + b[i];
        return FlowVector(std::move(r));
    }
    friend FlowVector operator-(const FlowVector& a, const FlowVector& b) {
        std::vector<T> r(std::max(a.K(), b.K()), T(0));
        for (std::size_t i = 1; i <= r.size(); ++i) r[i - 1] = a[i] - b[i];
        return FlowVector(std::move(r));
    }
    FlowVector negated() const {
        std::vector<T> r = t_;
        for (auto& v : r) v = -v;
        return FlowVector(std::move(r));
    }

private:
    std::vector<T> t_;
};

template <class U, class T>
FlowVector<U> flow_cast(const FlowVector<T>& t) {
    return FlowVector<U>(vector_cast<U>(t.values()));
}

// xi(z, t) = sum_i t_i z^i.
template <class T>
T flow_phase(const T& z, const FlowVector<T>& t) {
    T s(0);
    T p = z;
    for (std::size_t i = 1; i <= t.K(); ++i) {
        s += t[i] * p;
        p *= z;
    }
    return s;
}

// Polynomial prod (z - root)^mult, kept in factored form so that Taylor
// coefficients at a root vanish exactly below the multiplicity.
template <class T>
class FactoredPolynomial {
public:
    FactoredPolynomial() = default;
    explicit FactoredPolynomial(std::vector<std::pair<T, int>> factors) : factors_(std::move(factors)) {}

    const std::vector<std::pair<T, int>>& factors() const { return factors_; }
    int degree() const {
        int d = 0;
        for (const auto& f : factors_) d += f.second;
        return d;
    }
    T operator()(const T& z) const {
        T v(1);
        for (const auto& [r, m] : factors_) v *= pow_int(T(z - r), m);
        return v;
    }
    series::Series<T> taylor_at(const T& x, std::size_t order) const {
        series::Series<T> s(order, T(0));
        if (order == 0) return s;
        s[0] = T(1);
        for (const auto& [r, m] : factors_) s = series::multiply(s, series::power_at(T(x - r), m, order), order);
        return s;
    }

private:
    std::vector<std::pair<T, int>> factors_;
};

template <class T>
FactoredPolynomial<T> char_poly(const JordanSpec<T>& s) {
    std::vector<std::pair<T, int>> f;
    for (const auto& b : s.blocks()) f.emplace_back(b.eigenvalue, b.size);
    return FactoredPolynomial<T>(std::move(f));
}

// Largest block size per distinct eigenvalue.
template <class T>
FactoredPolynomial<T> min_poly(const JordanSpec<T>& s) {
    std::vector<std::pair<T, int>> f;
    for (const auto& b : s.blocks()) {
        auto it = std::find_if(f.begin(), f.end(), [&](const auto& p) { return p.first == b.eigenvalue; });
        if (it == f.end())
            f.emplace_back(b.eigenvalue, b.size);
        else
            it->second = std::max(it->second, b.size);
    }
    return FactoredPolynomial<T>(std::move(f));
}

template <class T>
T char_poly_at(const JordanSpec<T>& s, const T& z) {
    return char_poly(s)(z);
}

template <class T>
T min_poly_at(const JordanSpec<T>& s, const T& z) {
    return min_poly(s)(z);
}

// Applies a function blockwise: `taylor(beta, size)` must return the first
// `size` Taylor coefficients at beta; block entry (mu, nu) gets coefficient nu - mu.
template <class T, class Fn>
Matrix<T> jordan_function(const JordanSpec<T>& s, Fn&& taylor) {
    const std::size_t n = s.dim();
    Matrix<T> m(n, n);
    std::size_t off = 0;
    for (const auto& b : s.blocks()) {
        const auto sz = static_cast<std::size_t>(b.size);
        series::Series<T> c = taylor(b.eigenvalue, sz);
        for (std::size_t mu = 0; mu < sz; ++mu)
            for (std::size_t nu = mu; nu < sz; ++nu) m(off + mu, off + nu) = c[nu - mu];
        off += sz;
    }
    return m;
}

template <class T>
Matrix<T> jordan_matrix(const JordanSpec<T>& s) {
    return jordan_function(s, [](const T& beta, std::size_t sz) {
        series::Series<T> c(sz, T(0));
        c[0] = beta;
        if (sz > 1) c[1] = T(1);
        return c;
    });
}

// Taylor coefficients of xi(beta + e, t) = sum_i t_i (beta + e)^i.
template <class T>
series::Series<T> flow_phase_taylor(const T& beta, const FlowVector<T>& t, std::size_t order) {
    series::Series<T> c(order, T(0));
    for (std::size_t i = 1; i <= t.K(); ++i) {
        if (t[i] == T(0)) continue;
        auto p = series::power_at(beta, static_cast<int>(i), order);
        for (std::size_t d = 0; d < order; ++d) c[d] += t[i] * p[d];
    }
    return c;
}

// exp(sum_i t_i X^i) for X the Jordan matrix of `s`.
template <class T>
Matrix<T> flow_exponential(const JordanSpec<T>& s, const FlowVector<T>& t) {
    return jordan_function(s, [&](const T& beta, std::size_t sz) {
        auto c = flow_phase_taylor(beta, t, sz);
        const T scale = exp_scalar(c[0]);
        c[0] = T(0);
        auto e = series::exp_nilpotent(c, sz);
        for (auto& v : e) v *= scale;
        return e;
    });
}

template <class T>
Matrix<T> poly_of_jordan(const FactoredPolynomial<T>& p, const JordanSpec<T>& s) {
    return jordan_function(s, [&](const T& beta, std::size_t sz) { return p.taylor_at(beta, sz); });
}

// r_D(B): characteristic polynomial of D evaluated at the Jordan matrix B.
template <class T>
Matrix<T> char_poly_of_matrix(const JordanSpec<T>& d, const JordanSpec<T>& b) {
    return poly_of_jordan(char_poly(d), b);
}

// (I - X/z) for the Jordan matrix X.
template <class T>
Matrix<T> miwa_factor(const JordanSpec<T>& s, const T& z) {
    if (z == T(0)) throw ShiftDomainError("Miwa point at the origin");
    const T inv = T(1) / z;
    return jordan_function(s, [&](const T& beta, std::size_t sz) {
        series::Series<T> c(sz, T(0));
        c[0] = T(1) - beta * inv;
        if (sz > 1) c[1] = -inv;
        return c;
    });
}

// (I - X/z)^{-1}; entries z / (z - beta)^{d+1}.
template <class T>
Matrix<T> miwa_factor_inverse(const JordanSpec<T>& s, const T& z) {
    if (z == T(0)) throw ShiftDomainError("Miwa point at the origin");
    return jordan_function(s, [&](const T& beta, std::size_t sz) {
        if (z == beta) throw ShiftDomainError("Miwa point coincides with an eigenvalue");
        series::Series<T> c(sz, T(0));
        const T w = T(1) / T(z - beta);
        T p = w;
        for (std::size_t d = 0; d < sz; ++d) {
            c[d] = z * p;
            p *= w;
        }
        return c;
    });
}

// (X - z I)^{-1}; entries -(z - beta)^{-(d+1)}.
template <class T>
Matrix<T> resolvent(const JordanSpec<T>& s, const T& z) {
    return jordan_function(s, [&](const T& beta, std::size_t sz) {
        if (z == beta) throw ShiftDomainError("resolvent evaluated at an eigenvalue");
        series::Series<T> c(sz, T(0));
        const T w = T(1) / T(z - beta);
        T p = w;
        for (std::size_t d = 0; d < sz; ++d) {
            c[d] = -p;
            p *= w;
        }
        return c;
    });
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, int e) {
    Matrix<T> r = Matrix<T>::identity(m.rows());
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

// sum_i t_i tr(X^i) = sum over blocks of size * xi(beta, t).
template <class T>
T trace_flow(const JordanSpec<T>& s, const FlowVector<T>& t) {
    T acc(0);
    for (const auto& b : s.blocks()) acc += integer_scalar<T>(b.size) * flow_phase(b.eigenvalue, t);
    return acc;
}

}  // namespace kptau
