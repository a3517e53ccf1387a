#pragma once

#include <string>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"
#include "kptau/partition.hpp"
#include "kptau/rank_one.hpp"
#include "kptau/schur.hpp"
#include "kptau/tau.hpp"

namespace kptau {

template <class T>
void require_full_row_rank(const Matrix<T>& m, const char* what) {
    if (m.rows() > m.cols() || rank(m) != m.rows()) throw RankError(std::string(what) + " must have full row rank");
}

template <class T>
Matrix<T> row_reversal(std::size_t n) {
    Matrix<T> p(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, n - 1 - i) = T(1);
    return p;
}

// Polynomial (rational-solution) family: B nilpotent of size n+k, D nilpotent of size n.
// The row order of [I | 0] is reversed (and undone by F) so that D is an upper Jordan block.
template <class T>
RankOneSystem<T> rational_family(int n, int k, const Matrix<T>& c) {
    if (n < 1 || k < 0) throw ShapeError("rational family needs n >= 1, k >= 0");
    const auto nn = static_cast<std::size_t>(n);
    const auto big = static_cast<std::size_t>(n + k);
    if (c.rows() != nn || c.cols() != big) throw ShapeError("C must be n x (n+k)");
    require_full_row_rank(c, "C");
    const Matrix<T> p = row_reversal<T>(nn);
    Matrix<T> id_pad(nn, big);
    id_pad.set_block(0, 0, Matrix<T>::identity(nn));
    RankOneSystem<T> s{p * id_pad, JordanSpec<T>::nilpotent(n + k), c, JordanSpec<T>::nilpotent(n), p,
                       unit_vector<T>(nn, 0), Vector<T>(big, T(0))};
    if (k > 0) s.g[nn] = T(1);
    return s;
}

template <class T>
struct SolitonFamily {
    std::vector<T> betas;
    Matrix<T> C;
    RankOneSystem<T> sys;

    int n() const { return static_cast<int>(C.rows()); }
    int N() const { return static_cast<int>(C.cols()); }
};

template <class T>
void require_distinct(const std::vector<T>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) throw EigenvalueCollision(std::string("repeated value in ") + what);
}

// Vandermonde A = V_{n,N}(beta), B = diag(beta), D = Lambda_n, f = e_1, g = beta^n.
template <class T>
SolitonFamily<T> soliton_family(const std::vector<T>& betas, const Matrix<T>& c) {
    require_distinct(betas, "betas");
    if (c.cols() != betas.size() || c.rows() == 0 || c.rows() > c.cols()) throw ShapeError("C must be n x N with n <= N");
    const int n = static_cast<int>(c.rows());
    const auto bspec = JordanSpec<T>::diagonal(betas);
    Vector<T> g;
    for (const auto& b : betas) g.push_back(pow_int(b, n));
    RankOneSystem<T> s{build_A_shift(bspec, c.rows()), bspec, c, JordanSpec<T>::nilpotent(n),
                       Matrix<T>::identity(c.rows()), unit_vector<T>(c.rows(), 0), g};
    return {betas, c, std::move(s)};
}

// Cauchy-Binet sum over lambda in the n x k box of
// det(V on columns l(lambda)) * pi_lambda(C) * exp(sum_j xi(beta_{l_j}, t)).
template <class T>
T soliton_tau_direct(const SolitonFamily<T>& fam, const FlowVector<T>& t) {
    const int n = fam.n();
    const int k = fam.N() - n;
    T acc(0);
    for (const auto& lam : partitions_in_box(n, k)) {
        const auto cols = plucker_columns(lam, n, k);
        const T pi = det(fam.C.select_columns(cols));
        if (pi == T(0)) continue;
        const T vdm = det(fam.sys.A.select_columns(cols));
        T phase(0);
        for (auto j : cols) phase += flow_phase(fam.betas[j], t);
        acc += vdm * pi * exp_scalar(phase);
    }
    return acc;
}

struct RegularityReport {
    bool regular = false;
    bool real_data = true;
    bool strictly_decreasing = true;
    std::vector<Partition> violators;  // partitions with negative Plucker coordinate
};

template <class T>
RegularityReport is_regular_soliton(const SolitonFamily<T>& fam, double tol = 1e-12) {
    RegularityReport rep;
    for (std::size_t j = 0; j < fam.betas.size(); ++j) {
        const Complex b = to_complex(fam.betas[j]);
        if (b.imag() != 0.0) rep.real_data = false;
        if (j > 0) {
            if constexpr (is_exact_v<T> && std::is_same_v<T, Rational>) {
                if (!(fam.betas[j] < fam.betas[j - 1])) rep.strictly_decreasing = false;
            } else {
                if (!(b.real() < to_complex(fam.betas[j - 1]).real())) rep.strictly_decreasing = false;
            }
        }
    }
    const double scale = std::max(fam.C.max_abs(), 1.0);
    const int n = fam.n();
    for (const auto& lam : partitions_in_box(n, fam.N() - n)) {
        const T pi = plucker_rational(fam.C, lam, n, fam.N() - n);
        const Complex pc = to_complex(pi);
        if (pc.imag() != 0.0) rep.real_data = false;
        bool negative;
        if constexpr (std::is_same_v<T, Rational>) negative = pi < 0;
        else negative = pc.real() < -tol * std::pow(scale, n);
        if (negative) rep.violators.push_back(lam);
    }
    rep.regular = rep.real_data && rep.strictly_decreasing && rep.violators.empty();
    return rep;
}

// Cauchy matrix A = [1/(beta_j - delta_i)], D = diag(delta), f = g = ones.
template <class T>
RankOneSystem<T> cauchy_family(const std::vector<T>& betas, const std::vector<T>& deltas, const Matrix<T>& c) {
    require_distinct(betas, "betas");
    require_distinct(deltas, "deltas");
    const auto bs = JordanSpec<T>::diagonal(betas);
    const auto ds = JordanSpec<T>::diagonal(deltas);
    if (c.cols() != betas.size()) throw ShapeError("C must have N columns");
    return {build_A0(bs, ds), bs, c, ds, Matrix<T>::identity(deltas.size()), Vector<T>(deltas.size(), T(1)),
            Vector<T>(betas.size(), T(1))};
}

// Rows r(beta_j) / ((beta_j - delta_k) p'(beta_j)), k = n+1..N, with r over all N deltas
// and p the characteristic polynomial of diag(beta).
template <class T>
Matrix<T> cauchy_annihilator(const std::vector<T>& betas, const std::vector<T>& all_deltas, std::size_t n) {
    const std::size_t big = betas.size();
    if (all_deltas.size() != big || n > big) throw ShapeError("need N deltas for the Cauchy annihilator");
    Matrix<T> out(big - n, big);
    for (std::size_t j = 0; j < big; ++j) {
        T r(1), dp(1);
        for (const auto& d : all_deltas) r *= T(betas[j] - d);
        for (std::size_t m = 0; m < big; ++m)
            if (m != j) dp *= T(betas[j] - betas[m]);
        for (std::size_t k = n; k < big; ++k) out(k - n, j) = r / (T(betas[j] - all_deltas[k]) * dp);
    }
    return out;
}

// Relative residual of V_{n,N}(beta) = K(delta) A0(beta, delta) r(B).
template <class T>
double kar_identity_check(const std::vector<T>& betas, const std::vector<T>& deltas) {
    const auto bs = JordanSpec<T>::diagonal(betas);
    const auto ds = JordanSpec<T>::diagonal(deltas);
    const Matrix<T> rhs = build_K(ds) * build_A0(bs, ds) * char_poly_of_matrix(ds, bs);
    return relative_difference(build_A_shift(bs, deltas.size()), rhs);
}

template <class T>
struct CalogeroMoserFamily {
    std::vector<T> betas;
    std::vector<T> xis;
    Matrix<T> V;       // V_{n,n}(beta)
    Matrix<T> Vprime;  // derivative of V in beta
    RankOneSystem<T> sys;
};

// B = [[Z, I], [0, Z]] written as Jordan blocks (beta_j, 2); column (j,1) <-> j, (j,2) <-> n+j.
template <class T>
CalogeroMoserFamily<T> calogero_moser_family(const std::vector<T>& betas, const std::vector<T>& xis) {
    require_distinct(betas, "betas");
    if (betas.empty() || xis.size() != betas.size()) throw ShapeError("betas and xis must have equal positive length");
    const std::size_t n = betas.size();
    std::vector<JordanBlock<T>> blocks;
    for (const auto& b : betas) blocks.push_back({b, 2});
    const JordanSpec<T> bspec(blocks);
    const Matrix<T> a = build_A_shift(bspec, n);
    Matrix<T> v(n, n), vp(n, n), c(n, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            v(r, j) = a(r, 2 * j);
            vp(r, j) = a(r, 2 * j + 1);
        }
        c(j, 2 * j) = T(1);
        c(j, 2 * j + 1) = xis[j];
    }
    if (det(v) == T(0)) throw DegenerateVandermonde("V_{n,n}(beta) is singular");
    const Matrix<T> bn = matrix_power(jordan_matrix(bspec), static_cast<int>(n));
    const Vector<T> g = (Matrix<T>::row(bspec.leading_indicator()) * bn).row_vector(0);
    RankOneSystem<T> s{a, bspec, c, JordanSpec<T>::nilpotent(static_cast<int>(n)), Matrix<T>::identity(n),
                       unit_vector<T>(n, 0), g};
    return {betas, xis, v, vp, std::move(s)};
}

// Relative residual between tau_gk and
// prod_j e^{xi(beta_j,t)} det V det(X0 + diag(sum_i i t_i beta_j^{i-1} xi_j)), X0 = I + V^{-1} V' Xi.
template <class T>
double cm_tau_identity(const CalogeroMoserFamily<T>& fam, const FlowVector<T>& t) {
    const std::size_t n = fam.betas.size();
    Matrix<T> xi(n, n);
    for (std::size_t j = 0; j < n; ++j) xi(j, j) = fam.xis[j];
    Matrix<T> x = Matrix<T>::identity(n) + solve(fam.V, fam.Vprime) * xi;
    T phase(0);
    for (std::size_t j = 0; j < n; ++j) {
        const T& b = fam.betas[j];
        T deriv(0);
        for (std::size_t i = 1; i <= t.K(); ++i)
            deriv += integer_scalar<T>(static_cast<std::int64_t>(i)) * t[i] * pow_int(b, static_cast<int>(i) - 1);
        x(j, j) += deriv * fam.xis[j];
        phase += flow_phase(b, t);
    }
    const T rhs = exp_scalar(phase) * det(fam.V) * det(x);
    const T lhs = tau_gk(fam.sys.A, fam.sys.Bspec, fam.sys.C, t);
    return relative_difference(lhs, rhs);
}

// A = A(B, D), f = f_D, g = (g_B^T r_D(B))^T.
template <class T>
RankOneSystem<T> generic_jordan_family(const JordanSpec<T>& b, const JordanSpec<T>& d, const Matrix<T>& c,
                                       const Matrix<T>& f) {
    require_admissible(b, d);
    if (c.cols() != b.dim()) throw ShapeError("C must have N columns");
    if (f.rows() != c.rows() || f.cols() != d.dim()) throw ShapeError("F must be l x n");
    if (c.rows() > d.dim()) throw ShapeError("need l <= n");
    require_full_row_rank(c, "C");
    require_full_row_rank(f, "F");
    const Matrix<T> rdb = char_poly_of_matrix(d, b);
    const Vector<T> g = (Matrix<T>::row(b.leading_indicator()) * rdb).row_vector(0);
    return {build_A0(b, d) * rdb, b, c, d, f, d.leading_indicator(), g};
}

}  // namespace kptau
