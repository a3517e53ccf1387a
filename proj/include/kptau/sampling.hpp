#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"

namespace kptau {

// Seeded generators of admissible random data for property sweeps.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& engine() { return rng_; }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    template <class T>
    T scalar(double scale = 1.0) {
        if constexpr (std::is_same_v<T, Rational>) {
            return small_rational();
        } else if constexpr (std::is_same_v<T, GaussianRational>) {
            return GaussianRational(small_rational(), small_rational());
        } else {
            return T(uniform(-scale, scale), uniform(-scale, scale));
        }
    }

    Rational small_rational() {
        Rational q(integer(-9, 9), static_cast<unsigned long>(integer(1, 4)));
        q.canonicalize();
        return q;
    }

    template <class T>
    Matrix<T> matrix(std::size_t r, std::size_t c, double scale = 1.0) {
        Matrix<T> m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = scalar<T>(scale);
        return m;
    }

    Complex point_in_disk(double radius, bool real) {
        if (real) return Complex(uniform(-radius, radius), 0.0);
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        const double a = uniform(0.0, 6.283185307179586);
        return std::polar(r, a);
    }

    // Eigenvalues kept at least `sep` apart from each other and from `avoid`.
    std::vector<Complex> separated_points(std::size_t count, double radius, double sep, bool real,
                                          const std::vector<Complex>& avoid = {}) {
        std::vector<Complex> pts;
        int guard = 0;
        while (pts.size() < count) {
            if (++guard > 100000) throw std::runtime_error("could not place separated points");
            const Complex c = point_in_disk(radius, real);
            bool ok = true;
            for (const auto& p : pts) ok = ok && std::abs(p - c) >= sep;
            for (const auto& p : avoid) ok = ok && std::abs(p - c) >= sep;
            if (ok) pts.push_back(c);
        }
        return pts;
    }

    std::vector<int> block_sizes(std::size_t dim, int max_block) {
        std::vector<int> sizes;
        std::size_t left = dim;
        while (left > 0) {
            const int s = integer(1, static_cast<int>(std::min<std::size_t>(left, static_cast<std::size_t>(max_block))));
            sizes.push_back(s);
            left -= static_cast<std::size_t>(s);
        }
        return sizes;
    }

    JordanSpec<Complex> spec(std::size_t dim, int max_block, double radius, double sep, bool real = false,
                             const std::vector<Complex>& avoid = {}) {
        const auto sizes = block_sizes(dim, max_block);
        const auto eigs = separated_points(sizes.size(), radius, sep, real, avoid);
        std::vector<JordanBlock<Complex>> b;
        for (std::size_t i = 0; i < sizes.size(); ++i) b.push_back({eigs[i], sizes[i]});
        return JordanSpec<Complex>(std::move(b));
    }

    // Distinct rationals p/q with |p| <= 12, q <= 3, avoiding the given values.
    JordanSpec<Rational> exact_spec(std::size_t dim, int max_block, const std::vector<Rational>& avoid = {}) {
        const auto sizes = block_sizes(dim, max_block);
        std::vector<Rational> used = avoid;
        std::vector<JordanBlock<Rational>> b;
        for (int s : sizes) {
            Rational e;
            do {
                e = Rational(integer(-12, 12), static_cast<unsigned long>(integer(1, 3)));
                e.canonicalize();
            } while (std::find(used.begin(), used.end(), e) != used.end());
            used.push_back(e);
            b.push_back({e, s});
        }
        return JordanSpec<Rational>(std::move(b));
    }

    template <class T>
    FlowVector<T> flow(std::size_t k, double scale) {
        std::vector<T> t;
        for (std::size_t i = 0; i < k; ++i) {
            if constexpr (is_exact_v<T>) t.push_back(scalar<T>());
            else t.push_back(T(uniform(-scale, scale), uniform(-scale, scale)));
        }
        return FlowVector<T>(std::move(t));
    }

    template <class T>
    FlowVector<T> real_flow(std::size_t k, double scale) {
        std::vector<T> t;
        for (std::size_t i = 0; i < k; ++i) t.push_back(T(uniform(-scale, scale)));
        return FlowVector<T>(std::move(t));
    }

private:
    std::mt19937_64 rng_;
};

template <class T>
std::vector<Complex> eigenvalues_of(const JordanSpec<T>& s) {
    std::vector<Complex> v;
    for (const auto& b : s.blocks()) v.push_back(to_complex(b.eigenvalue));
    return v;
}

template <class T>
std::vector<Rational> exact_eigenvalues_of(const JordanSpec<T>& s) {
    std::vector<Rational> v;
    for (const auto& b : s.blocks()) v.push_back(b.eigenvalue);
    return v;
}

}  // namespace kptau
