#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"
#include "kptau/report.hpp"
#include "kptau/series.hpp"

namespace kptau {

// Data (A, B, C, D, F, f, g) with A B - D^T A = f g^T.
template <class T>
struct RankOneSystem {
    Matrix<T> A;          // n x N
    JordanSpec<T> Bspec;  // N x N
    Matrix<T> C;          // l x N
    JordanSpec<T> Dspec;  // n x n
    Matrix<T> F;          // l x n
    Vector<T> f;          // n
    Vector<T> g;          // N

    std::size_t n() const { return A.rows(); }
    std::size_t N() const { return A.cols(); }
    std::size_t l() const { return C.rows(); }

    void validate_shapes() const {
        if (Bspec.dim() != N()) throw ShapeError("B dimension does not match columns of A");
        if (Dspec.dim() != n()) throw ShapeError("D dimension does not match rows of A");
        if (C.cols() != N()) throw ShapeError("C must have N columns");
        if (F.rows() != C.rows() || F.cols() != n()) throw ShapeError("F must be l x n");
        if (f.size() != n() || g.size() != N()) throw ShapeError("f, g lengths must be n, N");
        if (n() == 0 || N() == 0 || l() == 0) throw ShapeError("empty system");
    }
};

template <class U, class T>
RankOneSystem<U> system_cast(const RankOneSystem<T>& s) {
    return {matrix_cast<U>(s.A), spec_cast<U>(s.Bspec), matrix_cast<U>(s.C), spec_cast<U>(s.Dspec),
            matrix_cast<U>(s.F), vector_cast<U>(s.f), vector_cast<U>(s.g)};
}

template <class T>
void require_admissible(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    if (!b.is_nondegenerate()) throw EigenvalueCollision("B has repeated eigenvalues across blocks");
    if (!d.is_nondegenerate()) throw EigenvalueCollision("D has repeated eigenvalues across blocks");
    if (b.shares_eigenvalue_with(d)) throw EigenvalueCollision("B and D share an eigenvalue");
}

// Cauchy-type matrix with entries C(mu+nu-2, nu-1) (-1)^{nu+1} / (beta_j - delta_i)^{mu+nu-1}.
template <class T>
Matrix<T> build_A0(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    require_admissible(b, d);
    Matrix<T> a(d.dim(), b.dim());
    std::size_t row = 0;
    for (const auto& db : d.blocks()) {
        for (int mu = 1; mu <= db.size; ++mu, ++row) {
            std::size_t col = 0;
            for (const auto& bb : b.blocks()) {
                const T w = T(1) / T(bb.eigenvalue - db.eigenvalue);
                for (int nu = 1; nu <= bb.size; ++nu, ++col) {
                    T v = binomial_scalar<T>(mu + nu - 2, nu - 1) * pow_int(w, mu + nu - 1);
                    a(row, col) = (nu % 2 == 0) ? T(-v) : v;
                }
            }
        }
    }
    return a;
}

template <class T>
Matrix<T> build_A(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    return build_A0(b, d) * char_poly_of_matrix(d, b);
}

// Entry ((i,mu),(j,nu)) = Taylor coefficient of order nu-1 at beta_j of
// r_D(z) / (z - delta_i)^mu. Independent of the A0 * r_D(B) product route.
template <class T>
Matrix<T> build_A_residue(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    require_admissible(b, d);
    const auto r = char_poly(d);
    Matrix<T> a(d.dim(), b.dim());
    std::size_t row = 0;
    for (const auto& db : d.blocks()) {
        for (int mu = 1; mu <= db.size; ++mu, ++row) {
            std::size_t col = 0;
            for (const auto& bb : b.blocks()) {
                const auto sz = static_cast<std::size_t>(bb.size);
                auto prod = series::multiply(r.taylor_at(bb.eigenvalue, sz),
                                             series::inverse_power_at(T(bb.eigenvalue - db.eigenvalue), mu, sz), sz);
                for (std::size_t nu = 0; nu < sz; ++nu, ++col) a(row, col) = prod[nu];
            }
        }
    }
    return a;
}

// A(B) = A(B, Lambda_n): entries C(n-a, nu-1) beta_j^{n-a-nu+1}.
template <class T>
Matrix<T> build_A_shift(const JordanSpec<T>& b, std::size_t n) {
    Matrix<T> a(n, b.dim());
    for (std::size_t ai = 1; ai <= n; ++ai) {
        const int p = static_cast<int>(n - ai);
        std::size_t col = 0;
        for (const auto& bb : b.blocks()) {
            auto s = series::power_at(bb.eigenvalue, p, static_cast<std::size_t>(bb.size));
            for (int nu = 1; nu <= bb.size; ++nu, ++col) a(ai - 1, col) = s[static_cast<std::size_t>(nu - 1)];
        }
    }
    return a;
}

namespace detail {

// Coefficient of (z - delta_i)^{n_i - mu} in z^p / q_i(z) at delta_i, where
// q_i = r_D / (z - delta_i)^{n_i}; one row per p.
template <class T>
Vector<T> lagrange_row(const JordanSpec<T>& d, int p) {
    Vector<T> row(d.dim(), T(0));
    std::size_t col = 0;
    const auto& blocks = d.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto sz = static_cast<std::size_t>(blocks[i].size);
        const T& di = blocks[i].eigenvalue;
        series::Series<T> q(sz, T(0));
        q[0] = T(1);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            if (k == i) continue;
            q = series::multiply(q, series::power_at(T(di - blocks[k].eigenvalue), blocks[k].size, sz), sz);
        }
        auto s = series::multiply(series::power_at(di, p, sz), series::reciprocal(q, sz), sz);
        for (std::size_t mu = 1; mu <= sz; ++mu, ++col) row[col] = s[sz - mu];
    }
    return row;
}

}  // namespace detail

template <class T>
Matrix<T> build_K(const JordanSpec<T>& d) {
    if (!d.is_nondegenerate()) throw EigenvalueCollision("D has repeated eigenvalues across blocks");
    const std::size_t n = d.dim();
    Matrix<T> k(n, n);
    for (std::size_t a = 1; a <= n; ++a) {
        auto row = detail::lagrange_row(d, static_cast<int>(n - a));
        for (std::size_t j = 0; j < n; ++j) k(a - 1, j) = row[j];
    }
    return k;
}

template <class T>
struct CanonicalVectors {
    Vector<T> f_D;
    Vector<T> g_B;
    Vector<T> k_D;
};

template <class T>
CanonicalVectors<T> canonical_vectors(const JordanSpec<T>& b, const JordanSpec<T>& d) {
    if (!d.is_nondegenerate()) throw EigenvalueCollision("D has repeated eigenvalues across blocks");
    return {d.leading_indicator(), b.leading_indicator(), detail::lagrange_row(d, static_cast<int>(d.dim()))};
}

template <class T>
T kappa(const JordanSpec<T>& d) {
    return det(build_K(d));
}

template <class T>
Vector<T> unit_vector(std::size_t n, std::size_t i) {
    Vector<T> v(n, T(0));
    v[i] = T(1);
    return v;
}

template <class T>
Check residual_check(const std::string& name, const Matrix<T>& lhs, const Matrix<T>& rhs, double tol) {
    return make_check(name, relative_difference(lhs, rhs), tol, is_exact_v<T>);
}

// Residual of A B - D^T A - f g^T and the rank of A B (A^perp)^T, followed by
// the three canonical rank-one identities for (B, D).
template <class T>
Report verify_rank_one(const RankOneSystem<T>& sys, double tol = 1e-10) {
    Report rep;
    const Matrix<T> b = jordan_matrix(sys.Bspec);
    const Matrix<T> dt = jordan_matrix(sys.Dspec).transpose();
    rep.push_back(residual_check("system A B - D^T A = f g^T", Matrix<T>(sys.A * b - dt * sys.A), outer(sys.f, sys.g), tol));

    if (sys.n() < sys.N()) {
        try {
            const Matrix<T> perp = row_annihilator(sys.A);
            const Matrix<T> prod = sys.A * b * perp.transpose();
            const std::size_t r = rank(prod, tol);
            Check c = make_check("rank A B (A^perp)^T <= 1", r <= 1 ? 0.0 : 1.0, 0.0, true,
                                 "rank " + std::to_string(r));
            rep.push_back(c);
        } catch (const RankError& e) {
            rep.push_back(make_check("rank A B (A^perp)^T <= 1", 1.0, 0.0, true, e.what()));
        }
    } else {
        rep.push_back(skipped_check("rank A B (A^perp)^T <= 1", "A is square; annihilator is empty"));
    }

    const std::size_t n = sys.n();
    const Matrix<T> lam_t = jordan_matrix(JordanSpec<T>::nilpotent(static_cast<int>(n))).transpose();
    const Vector<T> g_b = sys.Bspec.leading_indicator();
    {
        const Matrix<T> ab = build_A_shift(sys.Bspec, n);
        const Matrix<T> rhs = outer(unit_vector<T>(n, 0), g_b) * matrix_power(b, static_cast<int>(n));
        rep.push_back(residual_check("A(B) B - Lambda^T A(B) = e1 g_B^T B^n", Matrix<T>(ab * b - lam_t * ab), rhs, tol));
    }
    const bool admissible = sys.Bspec.is_nondegenerate() && sys.Dspec.is_nondegenerate() &&
                            !sys.Bspec.shares_eigenvalue_with(sys.Dspec);
    if (admissible) {
        const Vector<T> f_d = sys.Dspec.leading_indicator();
        const Matrix<T> a0 = build_A0(sys.Bspec, sys.Dspec);
        rep.push_back(residual_check("A0 B - D^T A0 = f_D g_B^T", Matrix<T>(a0 * b - dt * a0), outer(f_d, g_b), tol));
        const Matrix<T> rdb = char_poly_of_matrix(sys.Dspec, sys.Bspec);
        const Matrix<T> abd = a0 * rdb;
        rep.push_back(residual_check("A(B,D) B - D^T A(B,D) = f_D g_B^T r_D(B)", Matrix<T>(abd * b - dt * abd),
                                     Matrix<T>(outer(f_d, g_b) * rdb), tol));
    } else {
        rep.push_back(skipped_check("A0 B - D^T A0 = f_D g_B^T", "B and D spectra collide"));
        rep.push_back(skipped_check("A(B,D) B - D^T A(B,D) = f_D g_B^T r_D(B)", "B and D spectra collide"));
    }
    return rep;
}

template <class T>
Report lemma_identities(const JordanSpec<T>& bs, const JordanSpec<T>& ds, double tol = 1e-12) {
    Report rep;
    const std::size_t n = ds.dim();
    const Matrix<T> a0 = build_A0(bs, ds);
    const Matrix<T> abd = a0 * char_poly_of_matrix(ds, bs);
    rep.push_back(residual_check("A(B,D) = A0(B,D) r_D(B)", build_A_residue(bs, ds), abd, tol));
    const Matrix<T> k = build_K(ds);
    rep.push_back(residual_check("A(B) = K(D) A(B,D)", build_A_shift(bs, n), Matrix<T>(k * abd), tol));
    const auto cv = canonical_vectors(bs, ds);
    const Matrix<T> lam_t = jordan_matrix(JordanSpec<T>::nilpotent(static_cast<int>(n))).transpose();
    const Matrix<T> dt = jordan_matrix(ds).transpose();
    rep.push_back(residual_check("Lambda^T K = K D^T - e1 k^T", Matrix<T>(lam_t * k),
                                 Matrix<T>(k * dt - outer(unit_vector<T>(n, 0), cv.k_D)), tol));
    rep.push_back(residual_check("K f_D = e1", Matrix<T>::column(mat_vec(k, cv.f_D)),
                                 Matrix<T>::column(unit_vector<T>(n, 0)), tol));
    return rep;
}

}  // namespace kptau
