#pragma once

// Half-space representation and the conversions between the two
// representations. Vertex enumeration goes through polarity: after moving
// a strictly interior point (found by max_margin_point) to the origin, the
// vertices of {<a_i, x> <= b_i} are the polars of the facets of
// conv{a_i / b_i}.

#include "godbersen/lp.hpp"
#include "godbersen/polytope.hpp"

#include <optional>
#include <vector>

namespace godbersen {

template <class T>
struct Halfspace {
    Point<T> normal;
    T offset;  // <x, normal> <= offset
};

enum class HStatus { ok, empty, lower_dimensional };

template <class T>
struct HPolytope {
    int dim = 0;
    std::vector<Halfspace<T>> halfspaces;
    HStatus status = HStatus::ok;
    std::optional<Point<T>> interior_point;

    bool empty() const { return status != HStatus::ok; }
};

template <class T>
HPolytope<T> to_hrep(const VPolytope<T>& p) {
    HPolytope<T> h;
    h.dim = p.dim();
    for (const auto& f : p.facets()) h.halfspaces.push_back({f.outward_normal, f.offset});
    h.interior_point = vertex_average(p);
    return h;
}

template <class T>
bool satisfies(const HPolytope<T>& h, const Point<T>& x, double tol = -1.0) {
    if (tol < 0) {
        tol = 0.0;
        if constexpr (!is_exact_v<T>) tol = 1e-9 * std::max(1.0, max_abs(x));
    }
    for (const auto& hs : h.halfspaces)
        if (scalar_traits<T>::sign(dot(hs.normal, x) - hs.offset, tol) > 0) return false;
    return true;
}

namespace detail {

template <class T>
MarginSolution<T> interior_of(const HPolytope<T>& h) {
    Matrix<T> a;
    Point<T> b;
    for (const auto& hs : h.halfspaces) {
        a.push_back(hs.normal);
        b.push_back(hs.offset);
    }
    auto sol = max_margin_point(a, b);
    if (sol.x.empty()) sol.x = zero_point<T>(h.dim);
    return sol;
}

template <class T>
double margin_tolerance(const HPolytope<T>& h) {
    if constexpr (is_exact_v<T>) {
        return 0.0;
    } else {
        double s = 1.0;
        for (const auto& hs : h.halfspaces) s = std::max({s, max_abs(hs.normal), std::fabs(hs.offset)});
        return 1e-10 * s;
    }
}

}  // namespace detail

/// Vertex enumeration. Throws EmptyIntersection for an empty or
/// lower-dimensional set and Unbounded for a nontrivial recession cone.
template <class T>
VPolytope<T> to_vrep(const HPolytope<T>& h) {
    if (h.halfspaces.empty()) throw GeometryError(ErrorKind::unbounded, "no half-spaces");
    Point<T> x0;
    if (h.interior_point && satisfies(h, *h.interior_point, 0.0)) {
        // need strict interiority; verified below through the offsets
        x0 = *h.interior_point;
    }
    auto strictly_inside = [&](const Point<T>& x) {
        for (const auto& hs : h.halfspaces)
            if (!(dot(hs.normal, x) < hs.offset)) return false;
        return true;
    };
    if (x0.empty() || !strictly_inside(x0)) {
        auto sol = detail::interior_of(h);
        if (scalar_traits<T>::sign(sol.margin, detail::margin_tolerance(h)) <= 0)
            throw GeometryError(ErrorKind::empty_intersection, "half-space system has empty interior");
        x0 = std::move(sol.x);
    }

    std::vector<Point<T>> dual;
    dual.reserve(h.halfspaces.size());
    for (const auto& hs : h.halfspaces) {
        T slack = hs.offset - dot(hs.normal, x0);
        dual.push_back(T(1) / slack * hs.normal);
    }
    VPolytope<T> dh;
    try {
        dh = convex_hull(std::move(dual));
    } catch (const GeometryError& e) {
        if (e.kind() == ErrorKind::degenerate_input)
            throw GeometryError(ErrorKind::unbounded, "normals do not positively span R^d");
        throw;
    }
    std::vector<Point<T>> verts;
    verts.reserve(dh.facets().size());
    for (const auto& f : dh.facets()) {
        if (scalar_traits<T>::sign(f.offset, dh.tolerance()) <= 0)
            throw GeometryError(ErrorKind::unbounded, "recession cone is nontrivial");
        verts.push_back(T(1) / f.offset * f.outward_normal + x0);
    }
    return convex_hull(std::move(verts));
}

/// P ∩ Q with redundant half-spaces pruned (the result's half-spaces are
/// exactly the facets of the intersection). Empty or lower-dimensional
/// intersections are reported through `status` instead of throwing.
template <class T>
HPolytope<T> intersect(const HPolytope<T>& p, const HPolytope<T>& q) {
    if (p.dim != q.dim) throw GeometryError(ErrorKind::invalid_argument, "dimension mismatch in intersect");
    HPolytope<T> all;
    all.dim = p.dim;
    all.halfspaces = p.halfspaces;
    all.halfspaces.insert(all.halfspaces.end(), q.halfspaces.begin(), q.halfspaces.end());
    auto sol = detail::interior_of(all);
    int s = scalar_traits<T>::sign(sol.margin, detail::margin_tolerance(all));
    if (s < 0) {
        all.status = HStatus::empty;
        return all;
    }
    if (s == 0) {
        all.status = HStatus::lower_dimensional;
        return all;
    }
    all.interior_point = sol.x;
    auto v = to_vrep(all);
    auto out = to_hrep(v);
    out.interior_point = sol.x;
    return out;
}

/// s * P for an H-polytope (s > 0).
template <class T>
HPolytope<T> scale(const HPolytope<T>& h, const T& s) {
    HPolytope<T> out = h;
    for (auto& hs : out.halfspaces) hs.offset *= s;
    if (out.interior_point) out.interior_point = s * *out.interior_point;
    return out;
}

/// Volume of an H-polytope; 0 when it is empty or lower-dimensional.
template <class T>
T volume(const HPolytope<T>& h) {
    if (h.empty()) return T(0);
    return volume(to_vrep(h));
}

// Polarity. Both directions require the origin in the interior.

template <class T>
HPolytope<T> polar(const VPolytope<T>& p) {
    if (!contains_in_interior(p, zero_point<T>(p.dim())))
        throw GeometryError(ErrorKind::origin_not_interior, "polar needs 0 in the interior");
    HPolytope<T> h;
    h.dim = p.dim();
    for (const auto& v : p.vertices()) h.halfspaces.push_back({v, T(1)});
    h.interior_point = zero_point<T>(p.dim());
    return h;
}

template <class T>
VPolytope<T> polar(const HPolytope<T>& h) {
    std::vector<Point<T>> pts;
    for (const auto& hs : h.halfspaces) {
        if (scalar_traits<T>::sign(hs.offset, 0.0) <= 0)
            throw GeometryError(ErrorKind::origin_not_interior, "polar needs 0 in the interior");
        pts.push_back(T(1) / hs.offset * hs.normal);
    }
    return convex_hull(std::move(pts));
}

/// Polar body as a vertex polytope: conv of facet normals scaled by
/// 1/offset.
template <class T>
VPolytope<T> polar_body(const VPolytope<T>& p) {
    return polar(to_hrep(p));
}

/// (K° + L°)° for bodies containing the origin, possibly on the boundary.
///
/// x lies in (K° + L°)° iff ||x||_K + ||x||_L <= 1, with the gauge written
/// through the facets of each body: facets through the origin contribute
/// cone constraints <a, x> <= 0, the others (scaled to offset 1) are summed
/// pairwise. This never forms an unbounded polar.
template <class T>
HPolytope<T> polar_sum_polar(const VPolytope<T>& k, const VPolytope<T>& l) {
    const int d = k.dim();
    const Point<T> origin = zero_point<T>(d);
    if (!contains(k, origin) || !contains(l, origin))
        throw GeometryError(ErrorKind::origin_not_contained, "both bodies must contain 0");
    auto split = [&](const VPolytope<T>& b, std::vector<Point<T>>& gauge, std::vector<Point<T>>& cone) {
        for (const auto& f : b.facets()) {
            if (scalar_traits<T>::sign(f.offset, b.tolerance()) == 0)
                cone.push_back(f.outward_normal);
            else
                gauge.push_back(T(1) / f.offset * f.outward_normal);
        }
    };
    std::vector<Point<T>> gk, gl, cone;
    split(k, gk, cone);
    split(l, gl, cone);
    HPolytope<T> h;
    h.dim = d;
    for (const auto& c : cone) h.halfspaces.push_back({c, T(0)});
    for (const auto& a : gk)
        for (const auto& b : gl) h.halfspaces.push_back({a + b, T(1)});
    return h;
}

/// Section by fixing coordinates: keeps the coordinates listed in `free`
/// and sets every other coordinate i to `at[i]`. The result lives in
/// R^{free.size()}.
template <class T>
HPolytope<T> coordinate_section(const HPolytope<T>& h, const std::vector<int>& free, const Point<T>& at) {
    const int d = h.dim;
    std::vector<bool> is_free(static_cast<std::size_t>(d), false);
    for (int i : free) is_free[static_cast<std::size_t>(i)] = true;
    HPolytope<T> out;
    out.dim = static_cast<int>(free.size());
    for (const auto& hs : h.halfspaces) {
        Point<T> n;
        T off = hs.offset;
        bool nonzero = false;
        for (int i = 0; i < d; ++i) {
            if (is_free[static_cast<std::size_t>(i)])
                continue;
            off -= hs.normal[static_cast<std::size_t>(i)] * at[static_cast<std::size_t>(i)];
        }
        for (int i : free) {
            n.push_back(hs.normal[static_cast<std::size_t>(i)]);
            if (scalar_traits<T>::sign(n.back(), 0.0) != 0) nonzero = true;
        }
        if (!nonzero) {
            // constraint 0 <= off on the section: either vacuous or infeasible
            if (scalar_traits<T>::sign(off, 1e-12) < 0) {
                out.status = HStatus::empty;
            }
            continue;
        }
        out.halfspaces.push_back({std::move(n), std::move(off)});
    }
    return out;
}

/// Orthogonal projection onto the listed coordinates.
template <class T>
VPolytope<T> coordinate_projection(const VPolytope<T>& p, const std::vector<int>& keep) {
    std::vector<Point<T>> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) {
        Point<T> w;
        for (int i : keep) w.push_back(v[static_cast<std::size_t>(i)]);
        pts.push_back(std::move(w));
    }
    return convex_hull(std::move(pts));
}

/// Gauge ||x||_P = min{t >= 0 : x in tP} for P with 0 in its interior.
template <class T>
T gauge(const VPolytope<T>& p, const Point<T>& x) {
    T best(0);
    for (const auto& f : p.facets()) {
        if (scalar_traits<T>::sign(f.offset, p.tolerance()) <= 0)
            throw GeometryError(ErrorKind::origin_not_interior, "gauge needs 0 in the interior");
        T v = dot(f.outward_normal, x) / f.offset;
        if (v > best) best = v;
    }
    return best;
}

}  // namespace godbersen
