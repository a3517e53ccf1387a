#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"
#include "kptau/rank_one.hpp"

namespace kptau {

// A rank-one system plus the Miwa-shift regime. With `analytic_shifts` set,
// shift points must lie outside the spectra of B and D in modulus.
template <class T>
struct TauModel {
    RankOneSystem<T> sys;
    bool analytic_shifts = false;
};

template <class U, class T>
TauModel<U> model_cast(const TauModel<T>& m) {
    return {system_cast<U>(m.sys), m.analytic_shifts};
}

template <class T>
T tau_gk(const Matrix<T>& a, const JordanSpec<T>& b, const Matrix<T>& c, const FlowVector<T>& t) {
    if (a.cols() != b.dim() || c.cols() != b.dim() || a.rows() != c.rows())
        throw ShapeError("tau_gk expects A, C of shape n x N with N = dim B");
    return det(Matrix<T>(a * flow_exponential(b, t) * c.transpose()));
}

// F exp(-sum t_i (D^T)^i) A exp(sum t_i B^i) C^T; the l x l matrix whose determinant is tau.
template <class T>
Matrix<T> tau_matrix(const RankOneSystem<T>& s, const FlowVector<T>& t) {
    s.validate_shapes();
    const Matrix<T> ed = flow_exponential(s.Dspec, t.negated()).transpose();
    return s.F * ed * s.A * flow_exponential(s.Bspec, t) * s.C.transpose();
}

template <class T>
T tau_general(const RankOneSystem<T>& s, const FlowVector<T>& t, bool require_nonsingular_origin = false) {
    if (require_nonsingular_origin && det(Matrix<T>(s.F * s.A * s.C.transpose())) == T(0))
        throw SingularAtOrigin("det(F A C^T) = 0");
    return det(tau_matrix(s, t));
}

template <class T>
T tau_general(const TauModel<T>& m, const FlowVector<T>& t) {
    return tau_general(m.sys, t);
}

template <class T>
void check_shift_point(const TauModel<T>& m, const T& z) {
    if (z == T(0)) throw ShiftDomainError("Miwa point at the origin");
    for (const auto& blk : m.sys.Dspec.blocks())
        if (blk.eigenvalue == z) throw ShiftDomainError("Miwa point coincides with an eigenvalue of D");
    if (m.analytic_shifts) {
        const double r = std::max(m.sys.Bspec.spectral_radius(), m.sys.Dspec.spectral_radius());
        if (!(magnitude(z) > r)) throw ShiftDomainError("Miwa point inside the spectral radius");
    }
}

// tau(t - sum_a [z_a^{-1}]) through the factors (I - B/z) and (I - D^T/z)^{-1}.
template <class T>
T miwa_shift_tau(const TauModel<T>& m, const FlowVector<T>& t, const std::vector<T>& zs) {
    const auto& s = m.sys;
    s.validate_shapes();
    Matrix<T> left = flow_exponential(s.Dspec, t.negated()).transpose();
    Matrix<T> right = flow_exponential(s.Bspec, t);
    for (const auto& z : zs) {
        check_shift_point(m, z);
        left = left * miwa_factor_inverse(s.Dspec, z).transpose();
        right = miwa_factor(s.Bspec, z) * right;
    }
    return det(Matrix<T>(s.F * left * s.A * right * s.C.transpose()));
}

template <class T>
T baker_akhiezer(const TauModel<T>& m, const T& z, const FlowVector<T>& t) {
    const T tau = tau_general(m, t);
    if (tau == T(0)) throw ZeroTau("tau vanishes at the requested time");
    return exp_scalar(flow_phase(z, t)) * miwa_shift_tau(m, t, {z}) / tau;
}

// The three equal expressions det(A(B,D) E C^T), det(A0 E r_D(B) C^T),
// det(A(B) E C^T) / kappa(D).
template <class T>
std::array<T, 3> tau_W_BCD(const JordanSpec<T>& b, const Matrix<T>& c, const JordanSpec<T>& d, const FlowVector<T>& t) {
    if (c.rows() != d.dim() || c.cols() != b.dim()) throw ShapeError("C must be n x N");
    const Matrix<T> a0 = build_A0(b, d);
    const Matrix<T> rdb = char_poly_of_matrix(d, b);
    const T kap = det(build_K(d));
    if (kap == T(0)) throw DegenerateK("kappa(D) = 0");
    const Matrix<T> e = flow_exponential(b, t);
    const Matrix<T> ct = c.transpose();
    return {det(Matrix<T>(a0 * rdb * e * ct)), det(Matrix<T>(a0 * e * rdb * ct)),
            det(Matrix<T>(build_A_shift(b, d.dim()) * e * ct)) / kap};
}

// Unique X with X B - D^T X = f g^T for disjoint spectra, by the blockwise recurrence
// (beta - delta) X[mu][nu] = f[mu] g[nu] - X[mu][nu-1] + X[mu-1][nu].
template <class T>
Matrix<T> solve_sylvester(const JordanSpec<T>& b, const JordanSpec<T>& d, const Vector<T>& f, const Vector<T>& g) {
    if (f.size() != d.dim() || g.size() != b.dim()) throw ShapeError("f, g lengths must match D, B");
    if (b.shares_eigenvalue_with(d)) throw EigenvalueCollision("B and D share an eigenvalue");
    Matrix<T> x(d.dim(), b.dim());
    std::size_t r0 = 0;
    for (const auto& db : d.blocks()) {
        std::size_t c0 = 0;
        for (const auto& bb : b.blocks()) {
            const T inv = T(1) / T(bb.eigenvalue - db.eigenvalue);
            for (int mu = 0; mu < db.size; ++mu) {
                for (int nu = 0; nu < bb.size; ++nu) {
                    T v = f[r0 + static_cast<std::size_t>(mu)] * g[c0 + static_cast<std::size_t>(nu)];
                    if (nu > 0) v -= x(r0 + static_cast<std::size_t>(mu), c0 + static_cast<std::size_t>(nu - 1));
                    if (mu > 0) v += x(r0 + static_cast<std::size_t>(mu - 1), c0 + static_cast<std::size_t>(nu));
                    x(r0 + static_cast<std::size_t>(mu), c0 + static_cast<std::size_t>(nu)) = v * inv;
                }
            }
            c0 += static_cast<std::size_t>(bb.size);
        }
        r0 += static_cast<std::size_t>(db.size);
    }
    return x;
}

// A exp(sum t_i B^i) - exp(sum t_i (D^T)^i) A, the closed form of the decoupling integral.
template <class T>
Matrix<T> decoupling_bracket(const Matrix<T>& a, const JordanSpec<T>& b, const JordanSpec<T>& d, const FlowVector<T>& t) {
    return a * flow_exponential(b, t) - flow_exponential(d, t).transpose() * a;
}

// Trapezoid-rule value of (1/2 pi i) oint (z - D^T)^{-1} f g^T (z - B)^{-1} e^{xi(z,t)} dz on |z| = radius.
inline Matrix<Complex> decoupling_quadrature(const Vector<Complex>& f, const Vector<Complex>& g,
                                             const JordanSpec<Complex>& b, const JordanSpec<Complex>& d,
                                             const FlowVector<Complex>& t, double radius, int nodes) {
    Matrix<Complex> acc(d.dim(), b.dim());
    const Matrix<Complex> fg = outer(f, g);
    for (int k = 0; k < nodes; ++k) {
        const Complex z = std::polar(radius, 2.0 * std::numbers::pi * k / nodes);
        const Matrix<Complex> left = resolvent(d, z).transpose();  // (D^T - z)^{-1}
        const Matrix<Complex> right = resolvent(b, z);             // (B - z)^{-1}
        acc += (left * fg * right) * (z * std::exp(flow_phase(z, t)));
    }
    return acc * Complex(1.0 / nodes);
}

template <class T>
struct GeometricTau {
    T small;  // det(I_n + X M)
    T large;  // det(I_N + M X)
};

template <class T>
GeometricTau<T> tau_geometric(const Vector<T>& f, const Vector<T>& g, const JordanSpec<T>& b, const JordanSpec<T>& d,
                              const Matrix<T>& m, const FlowVector<T>& t) {
    if (m.rows() != b.dim() || m.cols() != d.dim()) throw ShapeError("M must be N x n");
    const Matrix<T> a = solve_sylvester(b, d, f, g);
    const Matrix<T> x = flow_exponential(d, t.negated()).transpose() * decoupling_bracket(a, b, d, t);
    return {det(Matrix<T>(Matrix<T>::identity(d.dim()) + x * m)), det(Matrix<T>(Matrix<T>::identity(b.dim()) + m * x))};
}

// M = C^T (F A C^T)^{-1} F, the affine point of the big cell attached to the system.
template <class T>
Matrix<T> big_cell_point(const RankOneSystem<T>& s) {
    const Matrix<T> fac = s.F * s.A * s.C.transpose();
    try {
        return s.C.transpose() * solve(fac, s.F);
    } catch (const SingularMatrix&) {
        throw SingularAtOrigin("det(F A C^T) = 0");
    }
}

template <class T>
T gauge_factor(const JordanSpec<T>& d, const FlowVector<T>& t) {
    return exp_scalar(trace_flow(d, t));
}

// |tau_gk - e^{sum t_i tr D^i} det(A C^T) tau_geometric| / |tau_gk| for l = n, F = I.
template <class T>
double gk_gauge_relation(const RankOneSystem<T>& s, const FlowVector<T>& t) {
    const Matrix<T> act = s.A * s.C.transpose();
    const T d0 = det(act);
    if (d0 == T(0)) throw SingularAtOrigin("det(A C^T) = 0");
    const Matrix<T> m = s.C.transpose() * inverse(act);
    const T lhs = tau_gk(s.A, s.Bspec, s.C, t);
    const T rhs = gauge_factor(s.Dspec, t) * d0 * tau_geometric(s.f, s.g, s.Bspec, s.Dspec, m, t).small;
    return relative_difference(lhs, rhs);
}

}  // namespace kptau
