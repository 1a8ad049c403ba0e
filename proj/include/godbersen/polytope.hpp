#pragma once

// Vertex representation of a full-dimensional polytope together with the
// operations that act on vertices directly: volume, centroid, support
// function, affine images, Minkowski sums and convex hulls of unions.

#include "godbersen/hull.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace godbersen {

template <class T>
struct Facet {
    std::vector<int> vertex_indices;  // sorted, into VPolytope::vertices()
    Point<T> outward_normal;
    T offset;
};

template <class T>
class VPolytope {
public:
    VPolytope() = default;

    int dim() const { return dim_; }
    const std::vector<Point<T>>& vertices() const { return vertices_; }
    const std::vector<Facet<T>>& facets() const { return facets_; }

    /// Triangulation of the boundary into (d-1)-simplices, as sorted
    /// vertex-index tuples. Every vertex referenced is extreme.
    const std::vector<std::vector<int>>& boundary_simplices() const { return simplices_; }

    std::size_t size() const { return vertices_.size(); }

    /// Tolerance used by the hull predicates (0 in exact mode).
    double tolerance() const { return eps_; }

    friend bool operator==(const VPolytope& a, const VPolytope& b) {
        return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
    }

    template <class U>
    friend VPolytope<U> convex_hull(std::vector<Point<U>> points);

private:
    int dim_ = 0;
    double eps_ = 0.0;
    std::vector<Point<T>> vertices_;
    std::vector<Facet<T>> facets_;
    std::vector<std::vector<int>> simplices_;
};

namespace detail {

template <class T>
Point<T> canonical_normal(Point<T> n, T& offset) {
    if constexpr (is_exact_v<T>) {
        for (const auto& x : n) {
            if (x.sign() != 0) {
                Rational s = scalar_traits<Rational>::abs(x);
                for (auto& y : n) y /= s;
                offset /= s;
                break;
            }
        }
    }
    return n;
}

// Groups boundary simplices by supporting hyperplane. Returns, for each
// true facet, the sorted input indices lying on it and a representative
// simplex.
template <class T>
std::vector<std::pair<std::vector<int>, int>> group_facets(const std::vector<Point<T>>& pts, const RawHull<T>& raw) {
    std::map<std::vector<int>, int> seen;
    for (int s = 0; s < static_cast<int>(raw.simplices.size()); ++s) {
        const auto& bs = raw.simplices[static_cast<std::size_t>(s)];
        std::vector<int> on;
        for (int i : raw.used)
            if (scalar_traits<T>::sign(dot(bs.normal, pts[static_cast<std::size_t>(i)]) - bs.offset, raw.eps) == 0)
                on.push_back(i);
        seen.emplace(std::move(on), s);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace detail

/// Convex hull of a point set; interior and non-extreme points are dropped.
/// Throws DegenerateInput when the points do not span R^d.
template <class T>
VPolytope<T> convex_hull(std::vector<Point<T>> points) {
    auto raw = beneath_beyond(points);
    const int d = raw.dim;
    auto groups = detail::group_facets(points, raw);

    // A boundary point is a vertex iff the normals of the facets through it
    // span R^d.
    std::vector<int> extreme;
    for (int i : raw.used) {
        Matrix<T> normals;
        for (const auto& [on, rep] : groups)
            if (std::binary_search(on.begin(), on.end(), i))
                normals.push_back(raw.simplices[static_cast<std::size_t>(rep)].normal);
        if (static_cast<int>(normals.size()) >= d && rank(normals, is_exact_v<T> ? 0.0 : 1e-9) == d)
            extreme.push_back(i);
    }

    if (extreme.size() != raw.used.size()) {
        std::vector<Point<T>> reduced;
        reduced.reserve(extreme.size());
        for (int i : extreme) reduced.push_back(std::move(points[static_cast<std::size_t>(i)]));
        return convex_hull(std::move(reduced));
    }

    std::vector<int> order = raw.used;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return points[static_cast<std::size_t>(a)] < points[static_cast<std::size_t>(b)];
    });
    std::vector<int> remap(points.size(), -1);
    VPolytope<T> out;
    out.dim_ = d;
    out.eps_ = raw.eps;
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
        remap[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
        out.vertices_.push_back(points[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
    }
    // duplicates of an extreme point never enter the boundary, so remap is total
    for (const auto& [on, rep] : groups) {
        Facet<T> f;
        for (int i : on) f.vertex_indices.push_back(remap[static_cast<std::size_t>(i)]);
        std::sort(f.vertex_indices.begin(), f.vertex_indices.end());
        const auto& bs = raw.simplices[static_cast<std::size_t>(rep)];
        f.offset = bs.offset;
        f.outward_normal = detail::canonical_normal(bs.normal, f.offset);
        out.facets_.push_back(std::move(f));
    }
    std::sort(out.facets_.begin(), out.facets_.end(),
              [](const Facet<T>& a, const Facet<T>& b) { return a.vertex_indices < b.vertex_indices; });
    for (const auto& bs : raw.simplices) {
        std::vector<int> idx;
        for (int i : bs.idx) idx.push_back(remap[static_cast<std::size_t>(i)]);
        std::sort(idx.begin(), idx.end());
        out.simplices_.push_back(std::move(idx));
    }
    std::sort(out.simplices_.begin(), out.simplices_.end());
    return out;
}

template <class T>
Point<T> vertex_average(const VPolytope<T>& p) {
    Point<T> c = zero_point<T>(p.dim());
    for (const auto& v : p.vertices()) c = c + v;
    return T(1) / T(static_cast<long>(p.size())) * c;
}

namespace detail {

template <class T>
T simplex_det(const VPolytope<T>& p, const std::vector<int>& idx, const Point<T>& apex) {
    Matrix<T> m;
    m.reserve(idx.size());
    for (int i : idx) m.push_back(p.vertices()[static_cast<std::size_t>(i)] - apex);
    T det = determinant(std::move(m));
    return scalar_traits<T>::abs(det);
}

}  // namespace detail

/// d-dimensional volume via a fan of simplices from an interior point.
template <class T>
T volume(const VPolytope<T>& p) {
    const Point<T> apex = vertex_average(p);
    T total(0);
    for (const auto& s : p.boundary_simplices()) total += detail::simplex_det(p, s, apex);
    return total / from_integer<T>(factorial(p.dim()));
}

/// Centre of mass, computed over the same fan as volume().
template <class T>
Point<T> centroid(const VPolytope<T>& p) {
    const int d = p.dim();
    const Point<T> apex = vertex_average(p);
    T total(0);
    Point<T> moment = zero_point<T>(d);
    for (const auto& s : p.boundary_simplices()) {
        T w = detail::simplex_det(p, s, apex);
        Point<T> c = apex;
        for (int i : s) c = c + p.vertices()[static_cast<std::size_t>(i)];
        moment = moment + w * c;
        total += w;
    }
    return T(1) / (total * T(d + 1)) * moment;
}

/// h_P(u) = max over vertices of <v, u>.
template <class T>
T support(const VPolytope<T>& p, const Point<T>& u) {
    T best = dot(p.vertices()[0], u);
    for (std::size_t i = 1; i < p.size(); ++i) {
        T v = dot(p.vertices()[i], u);
        if (v > best) best = v;
    }
    return best;
}

/// Membership by facet inequalities; boundary points count as inside.
template <class T>
bool contains(const VPolytope<T>& p, const Point<T>& x) {
    double tol = p.tolerance();
    if constexpr (!is_exact_v<T>) tol = std::max(tol, 1e-12 * std::max(1.0, max_abs(x)));
    for (const auto& f : p.facets())
        if (scalar_traits<T>::sign(dot(f.outward_normal, x) - f.offset, tol) > 0) return false;
    return true;
}

/// True if x lies in the interior of p.
template <class T>
bool contains_in_interior(const VPolytope<T>& p, const Point<T>& x) {
    double tol = p.tolerance();
    for (const auto& f : p.facets())
        if (scalar_traits<T>::sign(dot(f.outward_normal, x) - f.offset, tol) >= 0) return false;
    return true;
}

template <class T>
bool contains_polytope(const VPolytope<T>& outer, const VPolytope<T>& inner) {
    return std::all_of(inner.vertices().begin(), inner.vertices().end(),
                       [&](const Point<T>& v) { return contains(outer, v); });
}

/// x -> A x + b. The hull is recomputed, which also covers singular A.
template <class T>
VPolytope<T> affine_image(const VPolytope<T>& p, const Matrix<T>& a, const Point<T>& b) {
    std::vector<Point<T>> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) {
        Point<T> w = b;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t k = 0; k < v.size(); ++k) w[i] += a[i][k] * v[k];
        pts.push_back(std::move(w));
    }
    return convex_hull(std::move(pts));
}

template <class T>
VPolytope<T> translate(const VPolytope<T>& p, const Point<T>& b) {
    std::vector<Point<T>> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) pts.push_back(v + b);
    return convex_hull(std::move(pts));
}

/// s * P; s may be negative.
template <class T>
VPolytope<T> scale(const VPolytope<T>& p, const T& s) {
    std::vector<Point<T>> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) pts.push_back(s * v);
    return convex_hull(std::move(pts));
}

template <class T>
VPolytope<T> negate(const VPolytope<T>& p) {
    return scale(p, T(-1));
}

/// Hull of all pairwise sums of two generator sets (which may be
/// lower-dimensional on their own, e.g. segments).
template <class T>
VPolytope<T> minkowski_sum(const std::vector<Point<T>>& a, const std::vector<Point<T>>& b) {
    std::vector<Point<T>> pts;
    pts.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) pts.push_back(x + y);
    return convex_hull(std::move(pts));
}

template <class T>
VPolytope<T> minkowski_sum(const VPolytope<T>& p, const VPolytope<T>& q) {
    return minkowski_sum(p.vertices(), q.vertices());
}

template <class T>
VPolytope<T> minkowski_sum(const VPolytope<T>& p, const Point<T>& b) {
    return translate(p, b);
}

/// A v B: convex hull of the union.
template <class T>
VPolytope<T> hull_union(const VPolytope<T>& a, const VPolytope<T>& b) {
    std::vector<Point<T>> pts = a.vertices();
    pts.insert(pts.end(), b.vertices().begin(), b.vertices().end());
    return convex_hull(std::move(pts));
}

/// (1-lambda) K v (-lambda L), the body appearing throughout the
/// difference-body family of inequalities.
template <class T>
VPolytope<T> weighted_reflection_hull(const VPolytope<T>& k, const VPolytope<T>& l, const T& lambda) {
    std::vector<Point<T>> pts;
    pts.reserve(k.size() + l.size());
    const T a = T(1) - lambda;
    for (const auto& v : k.vertices()) pts.push_back(a * v);
    for (const auto& v : l.vertices()) pts.push_back((-lambda) * v);
    return convex_hull(std::move(pts));
}

template <class To, class From>
VPolytope<To> polytope_cast(const VPolytope<From>& p) {
    std::vector<Point<To>> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) pts.push_back(point_cast<To>(v));
    return convex_hull(std::move(pts));
}

/// Largest numerator/denominator bit size over all vertex coordinates.
template <class T>
std::size_t coefficient_bits(const VPolytope<T>& p) {
    std::size_t b = 0;
    for (const auto& v : p.vertices())
        for (const auto& x : v) b = std::max(b, scalar_traits<T>::bits(x));
    return b;
}

// Common fixtures.

/// [lo, hi]^d
template <class T>
VPolytope<T> cube(int d, const T& lo, const T& hi) {
    std::vector<Point<T>> pts;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Point<T> p(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? hi : lo;
        pts.push_back(std::move(p));
    }
    return convex_hull(std::move(pts));
}

/// conv{0, e_1, ..., e_d}
template <class T>
VPolytope<T> standard_simplex(int d) {
    std::vector<Point<T>> pts{zero_point<T>(d)};
    for (int i = 0; i < d; ++i) pts.push_back(unit_vector<T>(d, i));
    return convex_hull(std::move(pts));
}

/// conv{0, e_1, ..., e_d} translated so that its centroid is the origin.
template <class T>
VPolytope<T> centered_simplex(int d) {
    Point<T> shift(static_cast<std::size_t>(d), -(T(1) / T(d + 1)));
    return translate(standard_simplex<T>(d), shift);
}

template <class T>
VPolytope<T> cross_polytope(int d) {
    std::vector<Point<T>> pts;
    for (int i = 0; i < d; ++i) {
        pts.push_back(unit_vector<T>(d, i));
        pts.push_back(-unit_vector<T>(d, i));
    }
    return convex_hull(std::move(pts));
}

}  // namespace godbersen
