#pragma once

// Max-margin point of a system A x <= b, solved with a dictionary-form
// simplex method under Bland's rule:
//
//   maximise s  subject to  A x + s 1 <= b,  s <= 1.
//
// The optimum s* > 0 certifies a nonempty interior (and x* is strictly
// inside every half-space), s* = 0 means the set is nonempty but
// lower-dimensional, s* < 0 means it is empty.

#include "godbersen/linalg.hpp"

#include <limits>
#include <vector>

namespace godbersen {

template <class T>
struct MarginSolution {
    Point<T> x;
    T margin;
};

template <class T>
MarginSolution<T> max_margin_point(const Matrix<T>& a, const Point<T>& b) {
    const int m = static_cast<int>(a.size());
    const int d = m > 0 ? static_cast<int>(a[0].size()) : 0;
    if (m == 0) return {zero_point<T>(d), T(1)};

    T s0 = b[0];
    for (int i = 1; i < m; ++i)
        if (b[i] < s0) s0 = b[i];
    // x = 0 already has margin >= 1: nothing to optimise.
    if (s0 >= T(1)) return {zero_point<T>(d), T(1)};

    // Nonbasic variables: x+_0..x+_{d-1}, x-_0..x-_{d-1}, s' (s = s0 + s').
    // Rows: the m constraints plus s' <= 1 - s0. Dictionary:
    //   basic_r = rhs_r - sum_j coef_r[j] * nonbasic_j
    const int nv = 2 * d + 1;
    const int rows = m + 1;
    double tol = 0.0;
    if constexpr (!is_exact_v<T>) {
        double sc = 1.0;
        for (const auto& r : a)
            for (double v : r) sc = std::max(sc, std::fabs(v));
        tol = 1e-12 * sc;
    }

    Matrix<T> coef(static_cast<std::size_t>(rows), Point<T>(static_cast<std::size_t>(nv), T(0)));
    Point<T> rhs(static_cast<std::size_t>(rows));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) {
            coef[i][j] = a[i][j];
            coef[i][d + j] = -a[i][j];
        }
        coef[i][2 * d] = T(1);
        rhs[i] = b[i] - s0;
    }
    coef[m][2 * d] = T(1);
    rhs[m] = T(1) - s0;

    // objective z = obj_const + sum_j obj[j] * nonbasic_j
    Point<T> obj(static_cast<std::size_t>(nv), T(0));
    obj[2 * d] = T(1);
    T obj_const(0);

    // variable labels: 0..nv-1 structural, nv..nv+rows-1 slacks
    std::vector<int> nonbasic(static_cast<std::size_t>(nv));
    std::vector<int> basic(static_cast<std::size_t>(rows));
    for (int j = 0; j < nv; ++j) nonbasic[j] = j;
    for (int i = 0; i < rows; ++i) basic[i] = nv + i;

    for (int iter = 0; iter < 10000; ++iter) {
        // Bland: entering = smallest label with positive reduced cost
        int enter = -1;
        for (int j = 0; j < nv; ++j)
            if (scalar_traits<T>::sign(obj[j], tol) > 0 && (enter < 0 || nonbasic[j] < nonbasic[enter])) enter = j;
        if (enter < 0) break;

        int leave = -1;
        T best_ratio(0);
        for (int i = 0; i < rows; ++i) {
            if (scalar_traits<T>::sign(coef[i][enter], tol) <= 0) continue;
            T ratio = rhs[i] / coef[i][enter];
            if (leave < 0 || ratio < best_ratio || (ratio == best_ratio && basic[i] < basic[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) break;  // cannot happen: s' is capped

        // pivot: nonbasic[enter] becomes basic in row `leave`
        const T piv = coef[leave][enter];
        for (int j = 0; j < nv; ++j)
            if (j != enter) coef[leave][j] /= piv;
        rhs[leave] /= piv;
        coef[leave][enter] = T(1) / piv;
        for (int i = 0; i < rows; ++i) {
            if (i == leave) continue;
            T f = coef[i][enter];
            if (scalar_traits<T>::sign(f, 0.0) == 0) continue;
            for (int j = 0; j < nv; ++j)
                if (j != enter) coef[i][j] -= f * coef[leave][j];
            rhs[i] -= f * rhs[leave];
            coef[i][enter] = -f * coef[leave][enter];
        }
        {
            T f = obj[enter];
            for (int j = 0; j < nv; ++j)
                if (j != enter) obj[j] -= f * coef[leave][j];
            obj_const += f * rhs[leave];
            obj[enter] = -f * coef[leave][enter];
        }
        std::swap(basic[leave], nonbasic[enter]);
    }

    Point<T> vals(static_cast<std::size_t>(nv), T(0));
    for (int i = 0; i < rows; ++i)
        if (basic[i] < nv) vals[basic[i]] = rhs[i];
    Point<T> x(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) x[j] = vals[j] - vals[d + j];
    return {std::move(x), s0 + vals[2 * d]};
}

}  // namespace godbersen
