#pragma once

// Small dense linear algebra over either scalar mode. Sizes here never
// exceed a handful of rows, so everything is plain Gaussian elimination.

#include "godbersen/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace godbersen {

template <class T>
using Point = std::vector<T>;

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
T dot(const Point<T>& a, const Point<T>& b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
Point<T> operator+(const Point<T>& a, const Point<T>& b) {
    Point<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class T>
Point<T> operator-(const Point<T>& a, const Point<T>& b) {
    Point<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <class T>
Point<T> operator-(const Point<T>& a) {
    Point<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

template <class T>
Point<T> operator*(const T& s, const Point<T>& a) {
    Point<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

template <class T>
Point<T> zero_point(int d) {
    return Point<T>(static_cast<std::size_t>(d), T(0));
}

template <class T>
Point<T> unit_vector(int d, int i) {
    auto e = zero_point<T>(d);
    e[static_cast<std::size_t>(i)] = T(1);
    return e;
}

template <class T>
double max_abs(const Point<T>& p) {
    double m = 0.0;
    for (const auto& x : p) m = std::max(m, std::fabs(to_double(x)));
    return m;
}

template <class To, class From>
Point<To> point_cast(const Point<From>& p) {
    Point<To> r;
    r.reserve(p.size());
    for (const auto& x : p) r.push_back(scalar_cast<To>(x));
    return r;
}

namespace detail {

// Default pivot threshold for float-mode elimination, scaled by the
// largest entry of the matrix.
template <class T>
double pivot_tolerance(const Matrix<T>& m) {
    if constexpr (is_exact_v<T>) {
        return 0.0;
    } else {
        double s = 0.0;
        for (const auto& row : m)
            for (double x : row) s = std::max(s, std::fabs(x));
        return 1e-12 * std::max(s, 1e-300);
    }
}

template <class T>
bool is_zero(const T& x, double tol) {
    return scalar_traits<T>::sign(x, tol) == 0;
}

// In-place reduction to row echelon form on the first `cols` columns.
// Returns the pivot column of each pivot row.
template <class T>
std::vector<int> row_echelon(Matrix<T>& m, int cols, double tol, T* det_sign = nullptr) {
    std::vector<int> pivots;
    const int rows = static_cast<int>(m.size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int best = -1;
        if constexpr (is_exact_v<T>) {
            for (int i = r; i < rows; ++i)
                if (m[i][c].sign() != 0) {
                    best = i;
                    break;
                }
        } else {
            double bv = tol;
            for (int i = r; i < rows; ++i)
                if (std::fabs(m[i][c]) > bv) {
                    bv = std::fabs(m[i][c]);
                    best = i;
                }
        }
        if (best < 0) continue;
        if (best != r) {
            std::swap(m[best], m[r]);
            if (det_sign) *det_sign = -*det_sign;
        }
        for (int i = r + 1; i < rows; ++i) {
            if (is_zero(m[i][c], 0.0)) continue;
            T f = m[i][c] / m[r][c];
            for (std::size_t k = static_cast<std::size_t>(c); k < m[i].size(); ++k) m[i][k] -= f * m[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

template <class T>
int rank(Matrix<T> m, double tol = -1.0) {
    if (m.empty()) return 0;
    if (tol < 0) tol = detail::pivot_tolerance(m);
    return static_cast<int>(detail::row_echelon(m, static_cast<int>(m[0].size()), tol).size());
}

template <class T>
T determinant(Matrix<T> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return T(1);
    T sign(1);
    auto piv = detail::row_echelon(m, n, is_exact_v<T> ? 0.0 : 0.0, &sign);
    if (static_cast<int>(piv.size()) < n) return T(0);
    T d = sign;
    for (int i = 0; i < n; ++i) d *= m[i][i];
    return d;
}

/// Solves the square system A x = b; nullopt when A is singular.
template <class T>
std::optional<Point<T>> solve(const Matrix<T>& a, const Point<T>& b, double tol = -1.0) {
    const int n = static_cast<int>(a.size());
    Matrix<T> m(a);
    for (int i = 0; i < n; ++i) m[i].push_back(b[i]);
    if (tol < 0) tol = detail::pivot_tolerance(a);
    auto piv = detail::row_echelon(m, n, tol);
    if (static_cast<int>(piv.size()) < n) return std::nullopt;
    Point<T> x(n, T(0));
    for (int i = n - 1; i >= 0; --i) {
        T s = m[i][n];
        for (int k = i + 1; k < n; ++k) s -= m[i][k] * x[k];
        x[i] = s / m[i][i];
    }
    return x;
}

template <class T>
struct Hyperplane {
    Point<T> normal;
    T offset;  // <x, normal> = offset
};

/// Hyperplane through d points of R^d, or nullopt if they are affinely
/// dependent. The normal is unoriented and unnormalised.
template <class T>
std::optional<Hyperplane<T>> hyperplane_through(std::span<const Point<T>* const> pts, double tol = -1.0) {
    const int d = static_cast<int>(pts[0]->size());
    Matrix<T> m;
    m.reserve(static_cast<std::size_t>(d - 1));
    for (int i = 1; i < d; ++i) m.push_back(*pts[i] - *pts[0]);
    Point<T> normal(d, T(0));
    if (d == 1) {
        normal[0] = T(1);
        return Hyperplane<T>{normal, (*pts[0])[0]};
    }
    if (tol < 0) tol = detail::pivot_tolerance(m);
    auto piv = detail::row_echelon(m, d, tol);
    if (static_cast<int>(piv.size()) < d - 1) return std::nullopt;
    // exactly one free column
    int free_col = 0;
    {
        std::vector<bool> is_pivot(d, false);
        for (int c : piv) is_pivot[c] = true;
        while (is_pivot[free_col]) ++free_col;
    }
    normal[free_col] = T(1);
    for (int i = d - 2; i >= 0; --i) {
        int c = piv[i];
        T s(0);
        for (int k = c + 1; k < d; ++k) s += m[i][k] * normal[k];
        normal[c] = -s / m[i][c];
    }
    T off = dot(normal, *pts[0]);
    return Hyperplane<T>{std::move(normal), std::move(off)};
}

/// Indices of a maximal affinely independent subset, greedily chosen in
/// input order.
template <class T>
std::vector<int> affine_basis(const std::vector<Point<T>>& pts, double tol) {
    std::vector<int> chosen;
    if (pts.empty()) return chosen;
    chosen.push_back(0);
    Matrix<T> rows;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
        auto cand = rows;
        cand.push_back(pts[i] - pts[0]);
        if (rank(cand, tol) == static_cast<int>(cand.size())) {
            rows = std::move(cand);
            chosen.push_back(i);
            if (static_cast<int>(rows.size()) == static_cast<int>(pts[0].size())) break;
        }
    }
    return chosen;
}

}  // namespace godbersen
