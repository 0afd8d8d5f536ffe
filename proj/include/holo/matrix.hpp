#ifndef HOLO_MATRIX_HPP
#define HOLO_MATRIX_HPP

#include "holo/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace holo {

// Dense row-major matrix over an arbitrary scalar. Small sizes throughout;
// no attempt at blocking or expression templates.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, T(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw structural_error("matrix product: dimension mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& v = (*this)(i, k);
                if (v == T(0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += v * o(k, j);
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw structural_error("matrix sum: shape mismatch");
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }

    Mat operator-(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw structural_error("matrix difference: shape mismatch");
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }

    Mat operator-() const {
        Mat r = *this;
        for (auto& v : r.a_) v = -v;
        return r;
    }

    Mat& operator+=(const Mat& o) { *this = *this + o; return *this; }
    Mat& operator-=(const Mat& o) { *this = *this - o; return *this; }

    friend Mat operator*(const T& s, const Mat& m) {
        Mat r = m;
        for (auto& v : r.a_) v = s * v;
        return r;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero(double tol = 0.0) const {
        for (const auto& v : a_)
            if (!scalar_traits<T>::is_zero(v, tol)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(static_cast<double>(v)));
        return m;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

// Row echelon data produced by fraction-free (Bareiss-style) elimination for
// the exact backend; the double backend pivots on magnitude with a tolerance.
template <class T>
struct Echelon {
    Mat<T> reduced;                 // row echelon form (rational: exact)
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

template <class T>
Echelon<T> row_echelon(Mat<T> m, double tol = 1e-12) {
    Echelon<T> e;
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t piv = row;
        if constexpr (scalar_traits<T>::exact) {
            while (piv < R && m(piv, col) == T(0)) ++piv;
            if (piv == R) continue;
        } else {
            double best = 0.0;
            std::size_t bi = R;
            for (std::size_t i = row; i < R; ++i) {
                double v = std::abs(static_cast<double>(m(i, col)));
                if (v > best) { best = v; bi = i; }
            }
            if (bi == R || best <= tol) continue;
            piv = bi;
        }
        if (piv != row)
            for (std::size_t j = 0; j < C; ++j) std::swap(m(row, j), m(piv, j));
        if constexpr (scalar_traits<T>::exact) {
            // fraction-free cross-multiplication update; pivot rows are
            // normalized once at the end
            T p = m(row, col);
            for (std::size_t i = 0; i < R; ++i) {
                if (i == row) continue;
                T f = m(i, col);
                if (f == T(0)) continue;
                for (std::size_t j = 0; j < C; ++j)
                    m(i, j) = p * m(i, j) - f * m(row, j);
            }
        } else {
            T p = m(row, col);
            for (std::size_t j = 0; j < C; ++j) m(row, j) = m(row, j) / p;
            for (std::size_t i = 0; i < R; ++i) {
                if (i == row) continue;
                T f = m(i, col);
                if (f == T(0)) continue;
                for (std::size_t j = 0; j < C; ++j) m(i, j) -= f * m(row, j);
            }
        }
        e.pivot_cols.push_back(col);
        ++row;
    }
    e.rank = row;
    if constexpr (scalar_traits<T>::exact) {
        for (std::size_t r = 0; r < e.rank; ++r) {
            T p = m(r, e.pivot_cols[r]);
            for (std::size_t j = 0; j < C; ++j) m(r, j) = m(r, j) / p;
        }
    }
    e.reduced = std::move(m);
    return e;
}

template <class T>
std::size_t rank_of(const Mat<T>& m, double tol = 1e-12) {
    if (m.empty()) return 0;
    return row_echelon(m, tol).rank;
}

// Basis of the null space, as columns.
template <class T>
std::vector<std::vector<T>> kernel_basis(const Mat<T>& m, double tol = 1e-12) {
    const std::size_t C = m.cols();
    std::vector<std::vector<T>> out;
    if (m.empty()) {
        for (std::size_t j = 0; j < C; ++j) {
            std::vector<T> v(C, T(0));
            v[j] = T(1);
            out.push_back(std::move(v));
        }
        return out;
    }
    Echelon<T> e = row_echelon(m, tol);
    std::vector<bool> is_piv(C, false);
    for (auto c : e.pivot_cols) is_piv[c] = true;
    for (std::size_t free_col = 0; free_col < C; ++free_col) {
        if (is_piv[free_col]) continue;
        std::vector<T> v(C, T(0));
        v[free_col] = T(1);
        for (std::size_t r = 0; r < e.rank; ++r) {
            // pivot row r has 1 at pivot_cols[r]
            v[e.pivot_cols[r]] = -e.reduced(r, free_col);
        }
        out.push_back(std::move(v));
    }
    return out;
}

// Solve m x = b; returns false when inconsistent. Any one solution.
template <class T>
bool solve(const Mat<T>& m, const std::vector<T>& b, std::vector<T>& x, double tol = 1e-12) {
    const std::size_t R = m.rows(), C = m.cols();
    Mat<T> aug(R, C + 1);
    for (std::size_t i = 0; i < R; ++i) {
        for (std::size_t j = 0; j < C; ++j) aug(i, j) = m(i, j);
        aug(i, C) = b[i];
    }
    Echelon<T> e = row_echelon(aug, tol);
    x.assign(C, T(0));
    for (std::size_t r = 0; r < e.rank; ++r) {
        if (e.pivot_cols[r] == C) return false; // pivot in the rhs column
        x[e.pivot_cols[r]] = e.reduced(r, C);
    }
    return true;
}

} // namespace holo

#endif
