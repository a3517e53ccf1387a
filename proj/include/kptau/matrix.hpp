#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "kptau/errors.hpp"
#include "kptau/scalar.hpp"

namespace kptau {

template <class T>
using Vector = std::vector<T>;

// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_) throw ShapeError("ragged matrix literal");
            for (const auto& v : r) data_.push_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    static Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, c); }
    static Matrix column(const Vector<T>& v) {
        Matrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }
    static Matrix row(const Vector<T>& v) {
        Matrix m(1, v.size());
        for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeError("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix select_columns(const std::vector<std::size_t>& idx) const {
        Matrix s(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = (*this)(i, idx[j]);
        return s;
    }

    Vector<T> column_vector(std::size_t j) const {
        Vector<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    Vector<T> row_vector(std::size_t i) const {
        return Vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, magnitude(v));
        return m;
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& v) { return v == T(0); });
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw ShapeError("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "\n[" : "[");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << to_string(m(i, j));
            os << "]";
        }
        return os;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> outer(const Vector<T>& f, const Vector<T>& g) {
    Matrix<T> m(f.size(), g.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) m(i, j) = f[i] * g[j];
    return m;
}

template <class T>
Vector<T> mat_vec(const Matrix<T>& a, const Vector<T>& v) {
    return (a * Matrix<T>::column(v)).column_vector(0);
}

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
    if (a.size() != b.size()) throw ShapeError("dot length mismatch");
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class U, class T>
Matrix<U> matrix_cast(const Matrix<T>& m) {
    Matrix<U> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = scalar_cast<U>(m(i, j));
    return r;
}

template <class U, class T>
Vector<U> vector_cast(const Vector<T>& v) {
    Vector<U> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(scalar_cast<U>(x));
    return r;
}

// Index of the pivot row in column `col` at or below `from`, or -1.
template <class T>
long pick_pivot(const Matrix<T>& m, std::size_t col, std::size_t from) {
    long best = -1;
    double best_mag = 0.0;
    for (std::size_t i = from; i < m.rows(); ++i) {
        if (m(i, col) == T(0)) continue;
        if constexpr (is_exact_v<T>) return static_cast<long>(i);
        double mag = magnitude(m(i, col));
        if (best < 0 || mag > best_mag) {
            best = static_cast<long>(i);
            best_mag = mag;
        }
    }
    return best;
}

template <class T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// Fraction-free (Bareiss) elimination on exact scalars, partial-pivot LU otherwise.
template <class T>
T det(Matrix<T> m) {
    if (!m.square()) throw ShapeError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return T(1);
    bool negate = false;
    if constexpr (is_exact_v<T>) {
        T prev(1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            long p = pick_pivot(m, k, k);
            if (p < 0) return T(0);
            if (static_cast<std::size_t>(p) != k) {
                swap_rows(m, k, static_cast<std::size_t>(p));
                negate = !negate;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                for (std::size_t j = k + 1; j < n; ++j) {
                    T v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                    v /= prev;
                    m(i, j) = v;
                }
                m(i, k) = T(0);
            }
            prev = m(k, k);
        }
        T d = m(n - 1, n - 1);
        return negate ? T(-d) : d;
    } else {
        T d(1);
        for (std::size_t k = 0; k < n; ++k) {
            long p = pick_pivot(m, k, k);
            if (p < 0) return T(0);
            if (static_cast<std::size_t>(p) != k) {
                swap_rows(m, k, static_cast<std::size_t>(p));
                negate = !negate;
            }
            const T piv = m(k, k);
            d *= piv;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (m(i, k) == T(0)) continue;
                T factor = m(i, k) / piv;
                for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
            }
        }
        return negate ? T(-d) : d;
    }
}

struct SingularMatrix : RankError {
    using RankError::RankError;
};

// Solves a·x = b for square a by Gaussian elimination.
template <class T>
Matrix<T> solve(Matrix<T> a, Matrix<T> b) {
    if (!a.square() || a.rows() != b.rows()) throw ShapeError("solve shape mismatch");
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        long p = pick_pivot(a, k, k);
        if (p < 0) throw SingularMatrix("singular matrix");
        swap_rows(a, k, static_cast<std::size_t>(p));
        swap_rows(b, k, static_cast<std::size_t>(p));
        const T piv = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == T(0)) continue;
            T factor = a(i, k) / piv;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= factor * b(k, j);
        }
    }
    Matrix<T> x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            T s = b(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x(j, c);
            x(ii, c) = s / a(ii, ii);
        }
    }
    return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    return solve(a, Matrix<T>::identity(a.rows()));
}

template <class T>
Eigen::MatrixXcd to_eigen(const Matrix<T>& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_complex(m(i, j));
    return e;
}

template <class T>
std::vector<double> singular_values(const Matrix<T>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

// Reduced row echelon form over exact scalars; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        long p = pick_pivot(m, c, r);
        if (p < 0) continue;
        swap_rows(m, r, static_cast<std::size_t>(p));
        const T piv = m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= piv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == T(0)) continue;
            const T factor = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Numerical rank uses singular values relative to the largest one.
template <class T>
std::size_t rank(const Matrix<T>& m, double rel_tol = 1e-10) {
    if constexpr (is_exact_v<T>) {
        Matrix<T> w = m;
        return rref(w).size();
    } else {
        auto s = singular_values(m);
        if (s.empty() || s[0] == 0.0) return 0;
        return static_cast<std::size_t>(
            std::count_if(s.begin(), s.end(), [&](double v) { return v > rel_tol * s[0]; }));
    }
}

// Rows span the right nullspace of `a`, so a * result^T = 0.
template <class T>
Matrix<T> row_annihilator(const Matrix<T>& a, double rel_tol = 1e-10) {
    const std::size_t n = a.rows();
    const std::size_t big_n = a.cols();
    if (n >= big_n) throw RankError("row annihilator needs more columns than rows");
    if constexpr (is_exact_v<T>) {
        Matrix<T> w = a;
        auto piv = rref(w);
        if (piv.size() != n) throw RankError("matrix is not of full row rank");
        std::vector<bool> is_piv(big_n, false);
        for (auto c : piv) is_piv[c] = true;
        Matrix<T> out(big_n - n, big_n);
        std::size_t r = 0;
        for (std::size_t free = 0; free < big_n; ++free) {
            if (is_piv[free]) continue;
            out(r, free) = T(1);
            for (std::size_t k = 0; k < piv.size(); ++k) out(r, piv[k]) = -w(k, free);
            ++r;
        }
        return out;
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s.size() == 0 || s(s.size() - 1) <= rel_tol * s(0)) throw RankError("matrix is not of full row rank");
        const auto& v = svd.matrixV();
        Matrix<T> out(big_n - n, big_n);
        for (std::size_t r = 0; r < big_n - n; ++r)
            for (std::size_t j = 0; j < big_n; ++j)
                out(r, j) = ScalarOps<T>::from_complex(
                    v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n + r)));
        return out;
    }
}

// max|a-b| scaled by the larger entry magnitude of the two sides; 0 when both vanish.
template <class T>
double relative_difference(const Matrix<T>& a, const Matrix<T>& b) {
    const double diff = (a - b).max_abs();
    if (diff == 0.0) return 0.0;
    const double scale = std::max(a.max_abs(), b.max_abs());
    return scale == 0.0 ? diff : diff / scale;
}

template <class T>
double relative_difference(const T& a, const T& b) {
    const T d = a - b;
    const double diff = magnitude(d);
    if (diff == 0.0) return 0.0;
    const double scale = std::max(magnitude(a), magnitude(b));
    return scale == 0.0 ? diff : diff / scale;
}

}  // namespace kptau
