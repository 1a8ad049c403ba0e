#pragma once

// Vertex removal for centred polygons that keeps area and centroid and never
// decreases Area((1-l)K v -lK), repeated down to a triangle.
//
// With x1, x2, x3 consecutive (ccw) and u = x3 - x1, the vertex x2 slides
// to x2 + t u. The triangle x1 (x2+tu) x3 keeps its area, so the area of K
// is unchanged and the centroid moves to theta t u, theta = A_T / (3 A_K).
// At t = alpha the point reaches the line through x_N x1 and x1 stops being
// a vertex; at t = beta it reaches the line through x3 x4 and x3 goes.

#include "godbersen/check_report.hpp"
#include "godbersen/io.hpp"
#include "godbersen/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace godbersen {

template <class T>
struct ReductionStep {
    VPolytope<T> before;
    VPolytope<T> after;
    int moved = 0;              // index of x2 in ccw_order(before)
    T alpha, beta, chosen_t;
    T theta;
    T objective_before, objective_after;
    Point<T> shift;             // -theta t u
    std::string removed;        // "x1" (t = alpha) or "x3" (t = beta)
    bool capped = false;        // |t| hit the 1e6 * diameter cap
};

enum class VertexPolicy { min_perturbation, first, random };

inline const char* policy_name(VertexPolicy p) {
    switch (p) {
        case VertexPolicy::min_perturbation: return "min-perturbation";
        case VertexPolicy::first: return "first";
        case VertexPolicy::random: return "random";
    }
    return "?";
}

inline VertexPolicy parse_policy(const std::string& s) {
    if (s == "min-perturbation") return VertexPolicy::min_perturbation;
    if (s == "first") return VertexPolicy::first;
    if (s == "random") return VertexPolicy::random;
    throw GeometryError(ErrorKind::invalid_argument, "unknown vertex policy '" + s + "'");
}

namespace detail {

template <class T>
T cross2(const Point<T>& a, const Point<T>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

// upper half plane (angle in [0, pi)) first
template <class T>
bool upper_half(const Point<T>& p) {
    int s1 = scalar_traits<T>::sign(p[1], 0.0);
    return s1 > 0 || (s1 == 0 && scalar_traits<T>::sign(p[0], 0.0) > 0);
}

template <class T>
void require_polygon(const VPolytope<T>& k) {
    if (k.dim() != 2) throw GeometryError(ErrorKind::invalid_argument, "planar reduction needs a polygon");
}

template <class T>
void require_centred(const VPolytope<T>& k) {
    auto c = centroid(k);
    bool ok;
    if constexpr (is_exact_v<T>)
        ok = c == zero_point<T>(2);
    else
        ok = max_abs(c) <= 1e-9 * std::max(1.0, std::sqrt(std::fabs(volume(k))));
    if (!ok) throw GeometryError(ErrorKind::not_centered, "polygon must have its centroid at the origin");
}

// signed distance-like value of p from the line through a, b (positive on
// the left, i.e. inside for a ccw edge a -> b)
template <class T>
T side(const Point<T>& a, const Point<T>& b, const Point<T>& p) {
    return cross2(b - a, p - a);
}

template <class T>
double diameter(const std::vector<Point<T>>& v) {
    double d = 0.0;
    for (const auto& a : v)
        for (const auto& b : v) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double t = to_double(a[i]) - to_double(b[i]);
                s += t * t;
            }
            d = std::max(d, std::sqrt(s));
        }
    return d;
}

}  // namespace detail

/// Vertices in counterclockwise order around the centroid, starting from
/// the first vertex at angle >= 0.
template <class T>
std::vector<Point<T>> ccw_order(const VPolytope<T>& k) {
    detail::require_polygon(k);
    const auto c = vertex_average(k);
    std::vector<Point<T>> v = k.vertices();
    std::sort(v.begin(), v.end(), [&](const Point<T>& a, const Point<T>& b) {
        auto pa = a - c, pb = b - c;
        bool ua = detail::upper_half(pa), ub = detail::upper_half(pb);
        if (ua != ub) return ua;
        return scalar_traits<T>::sign(detail::cross2(pa, pb), 0.0) > 0;
    });
    return v;
}

/// Area((1-l)K v -lK)
template <class T>
T planar_objective(const VPolytope<T>& k, const T& lambda) {
    return volume(weighted_reflection_hull(k, k, lambda));
}

/// Interval [alpha, beta] for moving vertex i of the ccw order.
template <class T>
struct SlideGeometry {
    std::vector<Point<T>> ccw;
    int i = 0;
    Point<T> u;
    T alpha, beta, theta;
    bool capped = false;
};

template <class T>
SlideGeometry<T> slide_geometry(const VPolytope<T>& k, int vertex_index) {
    detail::require_polygon(k);
    SlideGeometry<T> g;
    g.ccw = ccw_order(k);
    const int n = static_cast<int>(g.ccw.size());
    if (n < 4) throw GeometryError(ErrorKind::too_few_vertices, "need at least 4 vertices to remove one");
    if (vertex_index < 0 || vertex_index >= n) throw GeometryError(ErrorKind::invalid_argument, "vertex index out of range");
    g.i = vertex_index;
    auto at = [&](int j) -> const Point<T>& { return g.ccw[static_cast<std::size_t>(((j % n) + n) % n)]; };
    const auto& xn = at(vertex_index - 2);
    const auto& x1 = at(vertex_index - 1);
    const auto& x2 = at(vertex_index);
    const auto& x3 = at(vertex_index + 1);
    const auto& x4 = at(vertex_index + 2);
    g.u = x3 - x1;
    // side(l1, x2 + t u) = side(l1, x2) + t (side(l1, x3) - side(l1, x1)), and x1 is on l1
    T d2 = detail::side(xn, x1, x2), d3 = detail::side(xn, x1, x3);
    T e2 = detail::side(x3, x4, x2), e1 = detail::side(x3, x4, x1);
    g.alpha = -d2 / d3;
    g.beta = e2 / e1;
    const double cap = 1e6 * detail::diameter(g.ccw) / std::max(std::sqrt(to_double(dot(g.u, g.u))), 1e-300);
    if (to_double(-g.alpha) > cap) {
        g.alpha = -scalar_cast<T>(cap);
        g.capped = true;
    }
    if (to_double(g.beta) > cap) {
        g.beta = scalar_cast<T>(cap);
        g.capped = true;
    }
    const T tri = detail::cross2(x2 - x1, x3 - x1) / T(2);
    g.theta = tri / (T(3) * volume(k));
    return g;
}

/// K_t = conv{x1, x2 + t u, x3, ..., x_N} - theta t u. At t = alpha (beta)
/// the point x1 (x3) is left out explicitly instead of being found
/// collinear.
template <class T>
VPolytope<T> slide(const SlideGeometry<T>& g, const T& t) {
    const int n = static_cast<int>(g.ccw.size());
    const Point<T> shift = (-(g.theta * t)) * g.u;
    const bool at_alpha = !g.capped && t == g.alpha;
    const bool at_beta = !g.capped && t == g.beta;
    std::vector<Point<T>> pts;
    for (int j = 0; j < n; ++j) {
        int rel = ((j - g.i) % n + n) % n;
        if (at_alpha && rel == n - 1) continue;  // x1
        if (at_beta && rel == 1) continue;       // x3
        Point<T> p = g.ccw[static_cast<std::size_t>(j)];
        if (rel == 0) p = p + t * g.u;
        pts.push_back(p + shift);
    }
    return convex_hull(std::move(pts));
}

template <class T>
T objective_along(const VPolytope<T>& k, const T& lambda, int vertex_index, const T& t) {
    return planar_objective(slide(slide_geometry(k, vertex_index), t), lambda);
}

/// One removal of vertex `vertex_index` (position in ccw_order(k)): both
/// endpoints are evaluated and the larger objective wins, alpha on ties.
template <class T>
ReductionStep<T> remove_vertex_step(const VPolytope<T>& k, const T& lambda, int vertex_index) {
    detail::require_polygon(k);
    detail::require_centred(k);
    auto g = slide_geometry(k, vertex_index);
    ReductionStep<T> s;
    s.before = k;
    s.moved = vertex_index;
    s.alpha = g.alpha;
    s.beta = g.beta;
    s.theta = g.theta;
    s.capped = g.capped;
    s.objective_before = planar_objective(k, lambda);
    auto ka = slide(g, g.alpha);
    auto kb = slide(g, g.beta);
    T oa = planar_objective(ka, lambda);
    T ob = planar_objective(kb, lambda);
    bool take_alpha;
    if constexpr (is_exact_v<T>)
        take_alpha = oa >= ob;
    else
        take_alpha = oa >= ob - 1e-12 * std::max(1.0, std::fabs(ob));
    s.chosen_t = take_alpha ? g.alpha : g.beta;
    s.after = take_alpha ? std::move(ka) : std::move(kb);
    s.objective_after = take_alpha ? oa : ob;
    s.removed = take_alpha ? "x1" : "x3";
    s.shift = (-(g.theta * s.chosen_t)) * g.u;
    return s;
}

/// Picks the vertex to move. min-perturbation minimises |alpha| + |beta|
/// (first index on ties); random draws uniformly from a seeded generator.
template <class T>
int choose_vertex(const VPolytope<T>& k, VertexPolicy policy, std::mt19937_64* rng = nullptr) {
    const int n = static_cast<int>(k.size());
    switch (policy) {
        case VertexPolicy::first: return 0;
        case VertexPolicy::random: {
            if (!rng) throw GeometryError(ErrorKind::invalid_argument, "random policy needs a generator");
            return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(*rng));
        }
        case VertexPolicy::min_perturbation: break;
    }
    int best = 0;
    T best_len(0);
    for (int i = 0; i < n; ++i) {
        auto g = slide_geometry(k, i);
        T len = g.beta - g.alpha;  // alpha < 0 < beta
        if (i == 0 || len < best_len) {
            best = i;
            best_len = len;
        }
    }
    return best;
}

/// Removes vertices until a triangle is left. The process is scale
/// invariant, so K is not normalised to unit area.
template <class T>
std::vector<ReductionStep<T>> reduce_to_triangle(const VPolytope<T>& k, const T& lambda, VertexPolicy policy = VertexPolicy::min_perturbation,
                                                 std::uint64_t seed = 0) {
    detail::require_polygon(k);
    detail::require_centred(k);
    std::mt19937_64 rng(seed);
    std::vector<ReductionStep<T>> steps;
    VPolytope<T> cur = k;
    while (cur.size() > 3) {
        int i = choose_vertex(cur, policy, &rng);
        steps.push_back(remove_vertex_step(cur, lambda, i));
        cur = steps.back().after;
    }
    return steps;
}

/// Invariants of one step: equal areas, centroid at 0, one vertex fewer,
/// objective not decreasing. Exact comparisons in exact mode.
struct StepAudit {
    bool area_preserved = false;
    bool centred = false;
    bool one_fewer_vertex = false;
    bool objective_monotone = false;
    bool ok() const { return area_preserved && centred && one_fewer_vertex && objective_monotone; }
};

template <class T>
StepAudit audit_step(const ReductionStep<T>& s) {
    StepAudit a;
    const T va = volume(s.after), vb = volume(s.before);
    const auto c = centroid(s.after);
    if constexpr (is_exact_v<T>) {
        a.area_preserved = va == vb;
        a.centred = c == zero_point<T>(2);
        a.objective_monotone = s.objective_after >= s.objective_before;
    } else {
        a.area_preserved = std::fabs(va - vb) <= 1e-9 * vb;
        a.centred = max_abs(c) <= 1e-9 * std::sqrt(vb);
        a.objective_monotone = s.objective_after >= s.objective_before - 1e-9 * vb;
    }
    a.one_fewer_vertex = s.after.size() + 1 == s.before.size();
    return a;
}

/// Area((1-l)(K-c) v l(c-K)) <= C(2,k)(1-l)^k l^(2-k) Area(K), c the centroid.
template <class T>
CheckReport verify_planar_gfr(const VPolytope<T>& k, const T& lambda) {
    detail::require_polygon(k);
    auto kc = translate(k, -centroid(k));
    const T lhs = planar_objective(kc, lambda);
    const auto f = simplex_hull_ratio(2, lambda);
    const T rhs = f.ratio * volume(k);
    auto r = make_report("planar_gfr", CheckKind::theorem, lhs, rhs, is_exact_v<T> ? 0.0 : 1e-9 * to_double(rhs));
    r.meta["n"] = 2;
    r.meta["lambda"] = scalar_traits<T>::format(lambda);
    r.meta["vertices"] = k.size();
    r.meta["simplex_ratio"] = scalar_traits<T>::format(f.ratio);
    return r;
}

template <class T>
json to_json(const ReductionStep<T>& s) {
    json j;
    j["before"] = to_json(s.before);
    j["after"] = to_json(s.after);
    j["moved_vertex"] = s.moved;
    j["alpha"] = scalar_traits<T>::format(s.alpha);
    j["beta"] = scalar_traits<T>::format(s.beta);
    j["chosen_t"] = scalar_traits<T>::format(s.chosen_t);
    j["theta"] = scalar_traits<T>::format(s.theta);
    j["objective_before"] = scalar_traits<T>::format(s.objective_before);
    j["objective_after"] = scalar_traits<T>::format(s.objective_after);
    json sh = json::array();
    for (const auto& c : s.shift) sh.push_back(scalar_traits<T>::format(c));
    j["shift"] = sh;
    j["removed"] = s.removed;
    j["capped"] = s.capped;
    return j;
}

}  // namespace godbersen
