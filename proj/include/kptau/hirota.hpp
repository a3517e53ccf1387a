#pragma once

#include <array>
#include <utility>

#include "kptau/errors.hpp"
#include "kptau/jordan.hpp"
#include "kptau/matrix.hpp"
#include "kptau/quad.hpp"
#include "kptau/tau.hpp"

namespace kptau {

template <class T>
struct XiMatrix {
    std::array<T, 4> z;
    Matrix<T> xi;  // 4 x 4 antisymmetric
};

// xi_ij = (z_i - z_j) tau(t - [z_i^{-1}] - [z_j^{-1}]).
template <class T>
XiMatrix<T> xi_matrix(const TauModel<T>& m, const std::array<T, 4>& z, const FlowVector<T>& t) {
    XiMatrix<T> out{z, Matrix<T>(4, 4)};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (z[i] == z[j]) throw ShiftDomainError("xi matrix needs pairwise distinct points");
            const T v = T(z[i] - z[j]) * miwa_shift_tau(m, t, {z[i], z[j]});
            out.xi(i, j) = v;
            out.xi(j, i) = -v;
        }
    return out;
}

// |xi12 xi34 - xi13 xi24 + xi14 xi23| / max of the three products.
template <class T>
double plucker_relation_residual(const XiMatrix<T>& x) {
    const auto& m = x.xi;
    const T p1 = m(0, 1) * m(2, 3);
    const T p2 = m(0, 2) * m(1, 3);
    const T p3 = m(0, 3) * m(1, 2);
    const T r = p1 - p2 + p3;
    const double num = magnitude(r);
    if (num == 0.0) return 0.0;
    const double scale = std::max({magnitude(p1), magnitude(p2), magnitude(p3)});
    return scale == 0.0 ? num : num / scale;
}

// M(t) = C^T(t) (F(t) A C^T(t))^{-1} F(t) with F(t) = F e^{-sum t_i (D^T)^i}, C^T(t) = e^{sum t_i B^i} C^T.
template <class T>
Matrix<T> moving_frame(const RankOneSystem<T>& s, const FlowVector<T>& t) {
    const Matrix<T> ft = s.F * flow_exponential(s.Dspec, t.negated()).transpose();
    const Matrix<T> ct = flow_exponential(s.Bspec, t) * s.C.transpose();
    try {
        return ct * solve(Matrix<T>(ft * s.A * ct), ft);
    } catch (const SingularMatrix&) {
        throw ZeroTau("tau vanishes; M(t) undefined");
    }
}

// H(z) = tau (1 + g^T M (D^T - z)^{-1} f), G(z) = z + g^T B M (D^T - z)^{-1} f.
template <class T>
std::pair<T, T> hg_factorization(const TauModel<T>& m, const T& z, const FlowVector<T>& t) {
    const auto& s = m.sys;
    const T tau = tau_general(s, t);
    if (tau == T(0)) throw ZeroTau("tau vanishes at the requested time");
    const Matrix<T> mt = moving_frame(s, t);
    const Matrix<T> res_f = resolvent(s.Dspec, z).transpose() * Matrix<T>::column(s.f);
    const Matrix<T> gm = Matrix<T>::row(s.g) * mt;
    const T h = tau * (T(1) + (gm * res_f)(0, 0));
    const T g = z + (Matrix<T>::row(s.g) * jordan_matrix(s.Bspec) * mt * res_f)(0, 0);
    return {h, g};
}

// max |xi_ij - (G_i H_j - G_j H_i)| over max |xi_ij|.
template <class T>
double xi_rank2_check(const TauModel<T>& m, const std::array<T, 4>& z, const FlowVector<T>& t) {
    const XiMatrix<T> x = xi_matrix(m, z, t);
    std::array<T, 4> h, g;
    for (std::size_t i = 0; i < 4; ++i) std::tie(h[i], g[i]) = hg_factorization(m, z[i], t);
    Matrix<T> wedge(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) wedge(i, j) = g[i] * h[j] - g[j] * h[i];
    return relative_difference(x.xi, wedge);
}

// (D1^4 + 3 D2^2 - 4 D1 D3) tau.tau / tau^2 at t0 by central differences of step h.
template <class T>
T kp_bilinear_fd(const TauModel<T>& m, const FlowVector<T>& t0, const T& h) {
    FlowVector<T> base = t0;
    base.at(3) = t0[3];
    auto tau_at = [&](int dx, int dy, int dt) {
        FlowVector<T> t = base;
        t.at(1) += integer_scalar<T>(dx) * h;
        t.at(2) += integer_scalar<T>(dy) * h;
        t.at(3) += integer_scalar<T>(dt) * h;
        return tau_general(m.sys, t);
    };
    const T f0 = tau_at(0, 0, 0);
    if (f0 == T(0)) throw ZeroTau("tau vanishes at the base point");
    const T xp1 = tau_at(1, 0, 0), xm1 = tau_at(-1, 0, 0), xp2 = tau_at(2, 0, 0), xm2 = tau_at(-2, 0, 0);
    const T yp = tau_at(0, 1, 0), ym = tau_at(0, -1, 0);
    const T tp = tau_at(0, 0, 1), tm = tau_at(0, 0, -1);
    const T pp = tau_at(1, 0, 1), pm = tau_at(1, 0, -1), mp = tau_at(-1, 0, 1), mm = tau_at(-1, 0, -1);
    const T two(2), three(3), four(4), six(6);
    const T h2 = h * h;
    const T tx = (xp1 - xm1) / (two * h);
    const T txx = (xp1 - two * f0 + xm1) / h2;
    const T txxx = (xp2 - two * xp1 + two * xm1 - xm2) / (two * h2 * h);
    const T txxxx = (xp2 - four * xp1 + six * f0 - four * xm1 + xm2) / (h2 * h2);
    const T ty = (yp - ym) / (two * h);
    const T tyy = (yp - two * f0 + ym) / h2;
    const T tt = (tp - tm) / (two * h);
    const T txt = (pp - pm - mp + mm) / (four * h2);
    const T r = two * (f0 * txxxx - four * tx * txxx + three * txx * txx + three * (f0 * tyy - ty * ty) -
                       four * (f0 * txt - tx * tt));
    return T(r / (f0 * f0));
}

template <class T>
double kp_bilinear_residual_fd(const TauModel<T>& m, const FlowVector<T>& t0, const T& h) {
    return magnitude(kp_bilinear_fd(m, t0, h));
}

// Float models are differenced in 113-bit precision; double roundoff at h = 1e-3 is ~1e-3.
inline Complex kp_bilinear_fd(const TauModel<Complex>& m, const FlowVector<Complex>& t0, double h) {
    return ScalarOps<QuadComplex>::to_complex(
        kp_bilinear_fd(model_cast<QuadComplex>(m), flow_cast<QuadComplex>(t0),
                       ScalarOps<QuadComplex>::from_gaussian(ScalarOps<GaussianRational>::from_complex(h))));
}

inline double kp_bilinear_residual_fd(const TauModel<Complex>& m, const FlowVector<Complex>& t0, double h) {
    return std::abs(kp_bilinear_fd(m, t0, h));
}

// Richardson combination (4 R(h/2) - R(h)) / 3, which removes the O(h^2) truncation term.
template <class T>
double kp_bilinear_extrapolated(const T& r_h, const T& r_half) {
    return magnitude(T((integer_scalar<T>(4) * r_half - r_h) / integer_scalar<T>(3)));
}

}  // namespace kptau
