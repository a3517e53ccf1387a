#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "kptau/scalar.hpp"

namespace kptau {

// 113-bit mantissa complex numbers, used where double roundoff would swamp a check.
using QuadReal = boost::multiprecision::cpp_bin_float_quad;
using QuadComplex = boost::multiprecision::cpp_complex_quad;

template <>
struct ScalarOps<QuadComplex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "complex-quad";
    static double magnitude(const QuadComplex& x) { return static_cast<double>(boost::multiprecision::abs(x)); }
    static QuadComplex exp(const QuadComplex& x) { return boost::multiprecision::exp(x); }
    static Complex to_complex(const QuadComplex& x) {
        return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
    }
    static QuadReal from_rational(const Rational& q) {
        return QuadReal(q.get_num().get_str()) / QuadReal(q.get_den().get_str());
    }
    static GaussianRational to_gaussian(const QuadComplex& x) {
        return ScalarOps<GaussianRational>::from_complex(to_complex(x));
    }
    static QuadComplex from_gaussian(const GaussianRational& x) {
        return QuadComplex(from_rational(x.real()), from_rational(x.imag()));
    }
    static QuadComplex from_complex(const Complex& x) { return QuadComplex(x.real(), x.imag()); }
    static std::string str(const QuadComplex& x) { return ScalarOps<Complex>::str(to_complex(x)); }
};

}  // namespace kptau
