#pragma once

// Closed forms for (1-l)S v (-l S) with S a centred simplex, the explicit
// body K_t = S v S_t built from the standard simplex of R^{n+1}, and the
// algebra connecting the simplex ratio with Godbersen's binomial bound.

#include "godbersen/check_report.hpp"
#include "godbersen/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace godbersen {

template <class T>
struct SimplexHullFormula {
    int n = 0;
    T lambda;
    std::vector<int> k;      // one admissible k, or two at ties
    std::vector<T> ratios;   // C(n,k)(1-l)^k l^(n-k) for each entry of k
    T ratio;                 // ratios[0]; all entries agree
    bool tie = false;
};

/// C(n,k) (1-l)^k l^(n-k)
template <class T>
T simplex_term(int n, int k, const T& lambda) {
    return from_integer<T>(binomial(n, k)) * pow_int(T(1) - lambda, k) * pow_int(lambda, n - k);
}

/// Vol((1-l)S v -lS) / Vol(S) for a centred simplex S, with k chosen from
/// (n+1)(1-l) - 1 <= k <= (n+1)(1-l), clamped to [0, n]. For l <= 1/(n+1)
/// this gives k = n, i.e. (1-l)^n.
template <class T>
SimplexHullFormula<T> simplex_hull_ratio(int n, const T& lambda) {
    if (n < 1) throw GeometryError(ErrorKind::invalid_argument, "n must be positive");
    if (lambda < T(0) || lambda > T(1)) throw GeometryError(ErrorKind::invalid_argument, "lambda outside [0, 1]");
    SimplexHullFormula<T> f;
    f.n = n;
    f.lambda = lambda;
    const T x = T(n + 1) * (T(1) - lambda);
    int hi;
    bool integral;
    if constexpr (is_exact_v<T>) {
        Integer q = numerator(x) / denominator(x);  // floor, x >= 0
        hi = static_cast<int>(q.convert_to<long>());
        integral = denominator(x) == 1;
    } else {
        double r = std::round(x);
        integral = std::fabs(x - r) <= 1e-12 * (n + 1);
        hi = integral ? static_cast<int>(r) : static_cast<int>(std::floor(x));
    }
    std::vector<int> cand;
    if (integral) {
        cand = {hi - 1, hi};
    } else {
        cand = {hi};
    }
    for (int k : cand)
        if (k >= 0 && k <= n) f.k.push_back(k);
    if (f.k.empty()) f.k.push_back(std::clamp(hi, 0, n));
    for (int k : f.k) f.ratios.push_back(simplex_term(n, k, lambda));
    f.tie = f.k.size() == 2;
    if (f.tie) {
        bool same;
        if constexpr (is_exact_v<T>)
            same = f.ratios[0] == f.ratios[1];
        else
            same = std::fabs(f.ratios[0] - f.ratios[1]) <= 1e-12;
        if (!same) throw std::logic_error("tie expressions differ");
    }
    f.ratio = f.ratios[0];
    return f;
}

template <class T>
json to_json(const SimplexHullFormula<T>& f) {
    json j;
    j["n"] = f.n;
    j["lambda"] = scalar_traits<T>::format(f.lambda);
    j["k"] = f.k;
    j["tie"] = f.tie;
    j["ratio"] = scalar_traits<T>::format(f.ratio);
    j["ratio_value"] = to_double(f.ratio);
    json rs = json::array();
    for (const auto& r : f.ratios) rs.push_back(scalar_traits<T>::format(r));
    j["ratios"] = rs;
    return j;
}

/// Vertices of K_t in R^{n+1}: e_1..e_{n+1} followed by
/// v_j = (1+t) a - t e_j, where a is the barycentre of the e_j.
template <class T>
std::vector<Point<T>> kt_points(int n, const T& t) {
    const T a = T(1) / T(n + 1);
    std::vector<Point<T>> pts;
    for (int j = 0; j <= n; ++j) pts.push_back(unit_vector<T>(n + 1, j));
    for (int j = 0; j <= n; ++j) {
        Point<T> v(static_cast<std::size_t>(n + 1), (T(1) + t) * a);
        v[static_cast<std::size_t>(j)] -= t;
        pts.push_back(std::move(v));
    }
    return pts;
}

/// Affine chart of the hyperplane sum x = 1: drop the last coordinate.
/// Volumes change by a constant factor, so volume ratios are preserved.
template <class T>
Point<T> kt_chart(const Point<T>& x) {
    return Point<T>(x.begin(), x.end() - 1);
}

/// K_t = S v S_t in the chart (an n-polytope); S itself is
/// chart(conv{e_j}) = conv{0, e_1, ..., e_n}.
template <class T>
VPolytope<T> build_Kt(int n, const T& t) {
    check_dimension(n);
    std::vector<Point<T>> pts;
    for (const auto& p : kt_points(n, t)) pts.push_back(kt_chart(p));
    return convex_hull(std::move(pts));
}

/// u_k = (-t,...,-t [k], 1,...,1 [n-k], (1+t)k - n) in R^{n+1}.
template <class T>
Point<T> kt_facet_normal(int n, int k, const T& t) {
    Point<T> u;
    for (int i = 0; i < k; ++i) u.push_back(-t);
    for (int i = k; i < n; ++i) u.push_back(T(1));
    u.push_back((T(1) + t) * T(k) - T(n));
    return u;
}

struct FacetNormalCheck {
    bool orthogonal_to_a = false;      // <a, u_k> = 0
    bool supporting = false;           // <e_j,u>, <v_j,u> >= -t for all j
    bool exact_vertex_set = false;     // equality only at the n vertices of F_k
};

/// Checks that F_k = conv{e_1..e_k, v_{k+1}..v_n} is supported by u_k.
template <class T>
FacetNormalCheck check_kt_facet_normal(int n, int k, const T& t) {
    auto pts = kt_points(n, t);
    auto u = kt_facet_normal(n, k, t);
    FacetNormalCheck c;
    Point<T> a(static_cast<std::size_t>(n + 1), T(1) / T(n + 1));
    c.orthogonal_to_a = scalar_traits<T>::sign(dot(a, u), 1e-12) == 0;
    c.supporting = true;
    c.exact_vertex_set = true;
    for (int idx = 0; idx < 2 * (n + 1); ++idx) {
        T v = dot(pts[static_cast<std::size_t>(idx)], u) + t;
        int s = scalar_traits<T>::sign(v, 1e-12);
        if (s < 0) c.supporting = false;
        int j = idx % (n + 1);
        bool in_fk = idx <= n ? (j < k) : (j >= k && j < n);
        if ((s == 0) != in_fk) c.exact_vertex_set = false;
    }
    return c;
}

/// Checks ratio(n, l) / ((1-l)^j l^(n-j)) = C(n, j) at l = (n+1-j)/(n+1).
inline CheckReport gfr_implies_godbersen_bound(int n, int j) {
    if (j < 1 || j > n - 1) throw GeometryError(ErrorKind::invalid_argument, "need 1 <= j <= n-1");
    const Rational lambda(n + 1 - j, n + 1);
    auto f = simplex_hull_ratio(n, lambda);
    Rational lhs = simplex_term(n, j, lambda) / (pow_int(Rational(1) - lambda, j) * pow_int(lambda, n - j));
    Rational rhs(binomial(n, j));
    auto r = make_report("gfr_implies_godbersen", CheckKind::identity, lhs, rhs);
    r.meta["n"] = n;
    r.meta["j"] = j;
    r.meta["lambda"] = lambda.str();
    r.meta["k"] = f.k;
    return r;
}

/// C(n, floor(n/2)) / 2^n: the simplex ratio at l = 1/2.
inline Rational fary_redei_ratio(int n) {
    return Rational(binomial(n, n / 2)) / Rational(pow_int(Integer(2), n));
}

}  // namespace godbersen
