#pragma once

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <exception>
#include <sstream>
#include <string>

#include "kptau/errors.hpp"

namespace kptau {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Exact complex number with rational real and imaginary parts.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(int v) : re_(v), im_(0) {}   // NOLINT(google-explicit-constructor)
    GaussianRational(const Rational& re) : re_(re), im_(0) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational n = o.re_ * o.re_ + o.im_ * o.im_;
        if (n == 0) throw std::domain_error("division by zero");
        Rational r = (re_ * o.re_ + im_ * o.im_) / n;
        Rational i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

private:
    Rational re_;
    Rational im_;
};

inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ConfigError("non-finite number");
    Rational q(x);
    q.canonicalize();
    return q;
}

// Exact value of a decimal literal such as "-1.25e-3".
inline Rational parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    std::string digits;
    long exp10 = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        const char ch = s[i];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits += ch;
            seen_digit = true;
            if (seen_point) --exp10;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ConfigError("bad number: " + s);
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw ConfigError("bad number: " + s);
        std::size_t pos = 0;
        long e = 0;
        try {
            e = std::stol(s.substr(i + 1), &pos);
        } catch (const std::exception&) {
            throw ConfigError("bad exponent: " + s);
        }
        if (i + 1 + pos != s.size()) throw ConfigError("bad number: " + s);
        exp10 += e;
    }
    if (exp10 > 4000 || exp10 < -4000) throw ConfigError("exponent out of range: " + s);
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

// Shortest decimal that round-trips the double, read exactly: 0.3 -> 3/10.
inline Rational rational_from_decimal(double x) {
    if (!std::isfinite(x)) throw ConfigError("non-finite number");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return parse_decimal(std::string(buf, res.ptr));
}

inline Rational parse_rational(const std::string& s) {
    if (s.find_first_of(".eE") != std::string::npos) return parse_decimal(s);
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw ConfigError("bad rational: " + s);
    if (q.get_den() == 0) throw ConfigError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Nearest double (mpq_get_d truncates).
inline double rational_to_double(const Rational& q) {
    const double d = q.get_d();
    if (!std::isfinite(d) || Rational(d) == q) return d;
    const double other = std::nextafter(d, q > Rational(d) ? HUGE_VAL : -HUGE_VAL);
    if (!std::isfinite(other)) return d;
    const Rational gap_d = abs(Rational(q - Rational(d)));
    const Rational gap_o = abs(Rational(q - Rational(other)));
    if (gap_o < gap_d) return other;
    if (gap_d < gap_o) return d;
    std::int64_t bits = 0;
    std::memcpy(&bits, &d, sizeof bits);
    return (bits & 1) == 0 ? d : other;
}

inline std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Per-backend scalar operations. Specialized for every supported scalar type.
template <class T>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact-rational";
    static double magnitude(const Rational& x) { return std::fabs(rational_to_double(x)); }
    static Rational exp(const Rational& x) {
        if (x != 0) throw BackendUnsupported("exponential of a nonzero value on the exact backend");
        return Rational(1);
    }
    static Complex to_complex(const Rational& x) { return {rational_to_double(x), 0.0}; }
    static GaussianRational to_gaussian(const Rational& x) { return GaussianRational(x); }
    static Rational from_gaussian(const GaussianRational& x) {
        if (x.imag() != 0) throw BackendUnsupported("complex value on the real exact backend");
        return x.real();
    }
    static Rational from_complex(const Complex& x) {
        if (x.imag() != 0.0) throw BackendUnsupported("complex value on the real exact backend");
        return rational_from_double(x.real());
    }
    static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarOps<GaussianRational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact-gaussian-rational";
    static double magnitude(const GaussianRational& x) { return std::abs(to_complex(x)); }
    static GaussianRational exp(const GaussianRational& x) {
        if (x != GaussianRational(0)) throw BackendUnsupported("exponential of a nonzero value on the exact backend");
        return GaussianRational(1);
    }
    static Complex to_complex(const GaussianRational& x) { return {rational_to_double(x.real()), rational_to_double(x.imag())}; }
    static GaussianRational to_gaussian(const GaussianRational& x) { return x; }
    static GaussianRational from_gaussian(const GaussianRational& x) { return x; }
    static GaussianRational from_complex(const Complex& x) {
        return {rational_from_double(x.real()), rational_from_double(x.imag())};
    }
    static std::string str(const GaussianRational& x) {
        if (x.imag() == 0) return x.real().get_str();
        return "(" + x.real().get_str() + ")+(" + x.imag().get_str() + ")i";
    }
};

template <>
struct ScalarOps<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "complex-float";
    static double magnitude(const Complex& x) { return std::abs(x); }
    static Complex exp(const Complex& x) { return std::exp(x); }
    static Complex to_complex(const Complex& x) { return x; }
    static GaussianRational to_gaussian(const Complex& x) { return ScalarOps<GaussianRational>::from_complex(x); }
    static Complex from_gaussian(const GaussianRational& x) { return ScalarOps<GaussianRational>::to_complex(x); }
    static Complex from_complex(const Complex& x) { return x; }
    static std::string str(const Complex& x) {
        if (x.imag() == 0.0) return format_double(x.real());
        return format_double(x.real()) + (x.imag() < 0 ? "" : "+") + format_double(x.imag()) + "i";
    }
};

template <class T>
inline constexpr bool is_exact_v = ScalarOps<T>::exact;

template <class T>
double magnitude(const T& x) {
    return ScalarOps<T>::magnitude(x);
}

template <class T>
T exp_scalar(const T& x) {
    return ScalarOps<T>::exp(x);
}

template <class T>
Complex to_complex(const T& x) {
    return ScalarOps<T>::to_complex(x);
}

template <class T>
std::string to_string(const T& x) {
    return ScalarOps<T>::str(x);
}

// Converts between backends. Exact sources go through Gaussian rationals so
// that exact-to-extended conversion loses nothing beyond target precision.
template <class U, class T>
U scalar_cast(const T& x) {
    if constexpr (std::is_same_v<U, T>) {
        return x;
    } else if constexpr (is_exact_v<T>) {
        return ScalarOps<U>::from_gaussian(ScalarOps<T>::to_gaussian(x));
    } else {
        return ScalarOps<U>::from_complex(ScalarOps<T>::to_complex(x));
    }
}

template <class T>
T integer_scalar(std::int64_t v) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Rational(static_cast<long>(v));
    } else if constexpr (std::is_same_v<T, GaussianRational>) {
        return GaussianRational(Rational(static_cast<long>(v)));
    } else {
        return T(static_cast<double>(v));
    }
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r / static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) +
            r % static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

template <class T>
T binomial_scalar(int n, int k) {
    return integer_scalar<T>(static_cast<std::int64_t>(binomial(n, k)));
}

template <class T>
T pow_int(const T& x, int e) {
    T r(1);
    T b = x;
    if (e < 0) throw std::domain_error("negative exponent");
    while (e > 0) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e > 0) b *= b;
    }
    return r;
}

}  // namespace kptau
