#pragma once

#include <algorithm>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"
#include "kptau/partition.hpp"
#include "kptau/rank_one.hpp"
#include "kptau/tau.hpp"

namespace kptau {

// h_0..h_kmax from exp(sum t_i z^i) = sum h_k z^k via k h_k = sum_i i t_i h_{k-i}.
template <class T>
std::vector<T> complete_homogeneous(const FlowVector<T>& t, int kmax) {
    std::vector<T> h(static_cast<std::size_t>(std::max(kmax, 0) + 1), T(0));
    h[0] = T(1);
    for (int k = 1; k <= kmax; ++k) {
        T s(0);
        for (int i = 1; i <= k; ++i) {
            const T ti = t[static_cast<std::size_t>(i)];
            if (ti == T(0)) continue;
            s += integer_scalar<T>(i) * ti * h[static_cast<std::size_t>(k - i)];
        }
        h[static_cast<std::size_t>(k)] = s / integer_scalar<T>(k);
    }
    return h;
}

// Jacobi-Trudi determinant det(h_{lambda_i - i + j}).
template <class T>
T schur_eval(const Partition& lam, const std::vector<T>& h) {
    const int l = lam.length();
    Matrix<T> m(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            const int k = lam.part(i) - i + j;
            if (k >= 0 && k < static_cast<int>(h.size())) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = h[static_cast<std::size_t>(k)];
            else if (k >= static_cast<int>(h.size())) throw ShapeError("h table too short for partition");
        }
    return det(m);
}

template <class T>
T schur_eval(const Partition& lam, const FlowVector<T>& t) {
    return schur_eval(lam, complete_homogeneous(t, lam.part(0) + lam.length()));
}

// 0-based column indices lambda_i - i + n (i = 1..n) in ascending order.
inline std::vector<std::size_t> plucker_columns(const Partition& lam, int n, int k) {
    if (lam.length() > n || lam.part(0) > k) throw BoxError("partition " + lam.str() + " outside the n x k box");
    std::vector<std::size_t> cols;
    for (int i = n; i >= 1; --i) cols.push_back(static_cast<std::size_t>(lam.part(i - 1) - i + n));
    return cols;
}

template <class T>
T plucker_rational(const Matrix<T>& c, const Partition& lam, int n, int k) {
    if (static_cast<int>(c.rows()) != n || static_cast<int>(c.cols()) != n + k) throw ShapeError("C must be n x (n+k)");
    return det(c.select_columns(plucker_columns(lam, n, k)));
}

template <class T>
T affine_coord(const Vector<T>& f, const Vector<T>& g, const JordanSpec<T>& b, const JordanSpec<T>& d,
               const Matrix<T>& m, int i, int j) {
    const Matrix<T> lhs = Matrix<T>::row(g) * matrix_power(jordan_matrix(b), j);
    const Matrix<T> rhs = matrix_power(jordan_matrix(d).transpose(), i) * Matrix<T>::column(f);
    return (lhs * m * rhs)(0, 0);
}

enum class SchurConvention {
    standard,    // det(g^T B^{a_j} M (-D^T)^{b_i} f); reproduces tau with the h_k convention above
    as_printed,  // det(g^T (-B)^{b_j} M (D^T)^{a_i} f)
};

// Table of g^T B^j M (D^T)^i f for 0 <= i, j <= size.
template <class T>
class AffineTable {
public:
    AffineTable(const Vector<T>& f, const Vector<T>& g, const JordanSpec<T>& b, const JordanSpec<T>& d,
                const Matrix<T>& m, int size) {
        const Matrix<T> bm = jordan_matrix(b);
        const Matrix<T> dt = jordan_matrix(d).transpose();
        std::vector<Matrix<T>> left, right;
        Matrix<T> row = Matrix<T>::row(g);
        Matrix<T> dcol = Matrix<T>::column(f);
        for (int k = 0; k <= size; ++k) {
            left.push_back(row);
            right.push_back(m * dcol);
            row = row * bm;
            dcol = dt * dcol;
        }
        table_ = Matrix<T>(static_cast<std::size_t>(size + 1), static_cast<std::size_t>(size + 1));
        for (int i = 0; i <= size; ++i)
            for (int j = 0; j <= size; ++j)
                table_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    (left[static_cast<std::size_t>(j)] * right[static_cast<std::size_t>(i)])(0, 0);
    }

    // g^T B^j M (D^T)^i f
    const T& operator()(int i, int j) const { return table_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
    int size() const { return static_cast<int>(table_.rows()) - 1; }

    T coefficient(const FrobeniusIndex& fr, SchurConvention conv) const {
        const auto r = static_cast<std::size_t>(fr.rank());
        Matrix<T> m(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (conv == SchurConvention::standard) {
                    const int b = fr.legs[i];
                    const T v = (*this)(b, fr.arms[j]);
                    m(i, j) = (b % 2 == 0) ? v : T(-v);
                } else {
                    const int b = fr.legs[j];
                    const T v = (*this)(fr.arms[i], b);
                    m(i, j) = (b % 2 == 0) ? v : T(-v);
                }
            }
        return det(m);
    }

private:
    Matrix<T> table_;
};

template <class T>
T plucker_frobenius(const Vector<T>& f, const Vector<T>& g, const JordanSpec<T>& b, const JordanSpec<T>& d,
                    const Matrix<T>& m, const FrobeniusIndex& fr, SchurConvention conv = SchurConvention::standard) {
    int size = 0;
    for (int a : fr.arms) size = std::max(size, a);
    for (int l : fr.legs) size = std::max(size, l);
    return AffineTable<T>(f, g, b, d, m, size).coefficient(fr, conv);
}

template <class T>
struct ExpansionTerm {
    Partition lambda;
    FrobeniusIndex frobenius;
    T coefficient;    // normalized: the empty partition has coefficient 1
    T unnormalized;   // coefficient * det(F A C^T)
};

template <class T>
std::vector<ExpansionTerm<T>> schur_expansion(const RankOneSystem<T>& s, int max_weight,
                                              SchurConvention conv = SchurConvention::standard) {
    if (max_weight < 0) throw ShapeError("max weight must be nonnegative");
    const T d0 = det(Matrix<T>(s.F * s.A * s.C.transpose()));
    if (d0 == T(0)) throw SingularAtOrigin("det(F A C^T) = 0");
    const Matrix<T> m = big_cell_point(s);
    const AffineTable<T> table(s.f, s.g, s.Bspec, s.Dspec, m, max_weight);
    std::vector<ExpansionTerm<T>> out;
    for (const auto& lam : partitions_up_to_weight(max_weight)) {
        FrobeniusIndex fr = frobenius(lam);
        T c = table.coefficient(fr, conv);
        out.push_back({lam, std::move(fr), c, c * d0});
    }
    return out;
}

// sum over terms of coefficient * S_lambda(t).
template <class T>
T expansion_value(const std::vector<ExpansionTerm<T>>& terms, const FlowVector<T>& t, bool unnormalized = false) {
    int need = 0;
    for (const auto& term : terms) need = std::max(need, term.lambda.part(0) + term.lambda.length());
    const auto h = complete_homogeneous(t, need);
    T acc(0);
    for (const auto& term : terms) {
        const T& c = unnormalized ? term.unnormalized : term.coefficient;
        if (c == T(0)) continue;
        acc += c * schur_eval(term.lambda, h);
    }
    return acc;
}

// max_j |g^T B^j M mu_D(D^T) f| for 0 <= j <= jmax, with mu_D(D^T) formed as the dense
// product of (D^T - delta I)^m over distinct eigenvalues.
template <class T>
double min_poly_annihilation(const Vector<T>& f, const Vector<T>& g, const JordanSpec<T>& b, const JordanSpec<T>& d,
                             const Matrix<T>& m, int jmax) {
    const Matrix<T> dt = jordan_matrix(d).transpose();
    const Matrix<T> id = Matrix<T>::identity(d.dim());
    Matrix<T> mu = id;
    const auto mp = min_poly(d);
    for (const auto& [root, mult] : mp.factors())
        for (int k = 0; k < mult; ++k) mu = mu * (dt - id * root);
    const Matrix<T> right = m * mu * Matrix<T>::column(f);
    const Matrix<T> bm = jordan_matrix(b);
    Matrix<T> row = Matrix<T>::row(g);
    double worst = 0.0;
    for (int j = 0; j <= jmax; ++j) {
        worst = std::max(worst, magnitude((row * right)(0, 0)));
        row = row * bm;
    }
    return worst;
}

}  // namespace kptau
