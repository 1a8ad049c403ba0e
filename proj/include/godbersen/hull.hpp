#pragma once

// Incremental beneath-beyond convex hull in dimension 1 <= d <= 6.
//
// The boundary is maintained as a simplicial complex of oriented
// (d-1)-simplices. A point is inserted only if it lies strictly beyond at
// least one boundary simplex; coplanar points are therefore never added,
// but a point that is extreme when inserted may end up in the relative
// interior of a face later. Callers (see polytope.hpp) detect such points
// and rebuild from the extreme subset.

#include "godbersen/error.hpp"
#include "godbersen/linalg.hpp"

#include <map>
#include <vector>

namespace godbersen {

template <class T>
struct BoundarySimplex {
    std::vector<int> idx;  // sorted indices into the input point list
    Point<T> normal;       // outward; unit length in float mode
    T offset;              // points inside satisfy <x, normal> <= offset
};

template <class T>
struct RawHull {
    int dim = 0;
    double eps = 0.0;  // tolerance used by the predicates (0 in exact mode)
    std::vector<BoundarySimplex<T>> simplices;
    std::vector<int> used;  // sorted input indices appearing in the boundary
};

/// Predicate tolerance for a point set: 0 in exact mode, 1e-12 times the
/// coordinate scale in float mode.
template <class T>
double hull_tolerance(const std::vector<Point<T>>& pts) {
    if constexpr (is_exact_v<T>) {
        return 0.0;
    } else {
        double s = 0.0;
        for (const auto& p : pts) s = std::max(s, max_abs(p));
        return 1e-12 * std::max(s, 1.0e-300);
    }
}

namespace detail {

template <class T>
void normalise_if_float(Hyperplane<T>& h) {
    if constexpr (!is_exact_v<T>) {
        double n = std::sqrt(dot(h.normal, h.normal));
        for (auto& x : h.normal) x /= n;
        h.offset /= n;
    }
}

template <class T>
BoundarySimplex<T> make_boundary_simplex(const std::vector<Point<T>>& pts, std::vector<int> idx,
                                         const Point<T>& interior) {
    std::vector<const Point<T>*> ptrs;
    ptrs.reserve(idx.size());
    for (int i : idx) ptrs.push_back(&pts[static_cast<std::size_t>(i)]);
    auto h = hyperplane_through<T>(std::span<const Point<T>* const>(ptrs));
    if (!h) throw GeometryError(ErrorKind::degenerate_input, "numerically degenerate boundary simplex");
    normalise_if_float(*h);
    if (dot(h->normal, interior) > h->offset) {
        for (auto& x : h->normal) x = -x;
        h->offset = -h->offset;
    }
    return BoundarySimplex<T>{std::move(idx), std::move(h->normal), std::move(h->offset)};
}

}  // namespace detail

template <class T>
RawHull<T> beneath_beyond(const std::vector<Point<T>>& pts) {
    if (pts.empty()) throw GeometryError(ErrorKind::degenerate_input, "empty point set");
    const int d = static_cast<int>(pts[0].size());
    check_dimension(d);
    for (const auto& p : pts)
        if (static_cast<int>(p.size()) != d)
            throw GeometryError(ErrorKind::invalid_argument, "points of mixed dimension");

    RawHull<T> out;
    out.dim = d;
    out.eps = hull_tolerance(pts);

    auto basis = affine_basis(pts, out.eps);
    if (static_cast<int>(basis.size()) < d + 1)
        throw GeometryError(ErrorKind::degenerate_input, "affine hull has dimension " +
                                                             std::to_string(basis.size() - 1) + " < " +
                                                             std::to_string(d));

    Point<T> interior = zero_point<T>(d);
    for (int i : basis) interior = interior + pts[static_cast<std::size_t>(i)];
    interior = T(1) / T(d + 1) * interior;

    std::vector<BoundarySimplex<T>> facets;
    std::vector<bool> alive;
    for (int skip = 0; skip <= d; ++skip) {
        std::vector<int> idx;
        for (int k = 0; k <= d; ++k)
            if (k != skip) idx.push_back(basis[static_cast<std::size_t>(k)]);
        std::sort(idx.begin(), idx.end());
        facets.push_back(detail::make_boundary_simplex(pts, std::move(idx), interior));
        alive.push_back(true);
    }

    std::vector<bool> in_basis(pts.size(), false);
    for (int i : basis) in_basis[static_cast<std::size_t>(i)] = true;

    std::map<std::vector<int>, int> ridge_count;
    std::vector<int> visible;
    for (int pi = 0; pi < static_cast<int>(pts.size()); ++pi) {
        if (in_basis[static_cast<std::size_t>(pi)]) continue;
        const auto& p = pts[static_cast<std::size_t>(pi)];
        visible.clear();
        for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
            if (!alive[static_cast<std::size_t>(f)]) continue;
            const auto& fc = facets[static_cast<std::size_t>(f)];
            if (scalar_traits<T>::sign(dot(fc.normal, p) - fc.offset, out.eps) > 0) visible.push_back(f);
        }
        if (visible.empty()) continue;

        ridge_count.clear();
        for (int f : visible) {
            const auto& idx = facets[static_cast<std::size_t>(f)].idx;
            for (int drop = 0; drop < d; ++drop) {
                std::vector<int> ridge;
                ridge.reserve(static_cast<std::size_t>(d - 1));
                for (int k = 0; k < d; ++k)
                    if (k != drop) ridge.push_back(idx[static_cast<std::size_t>(k)]);
                ++ridge_count[ridge];
            }
            alive[static_cast<std::size_t>(f)] = false;
        }
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            std::vector<int> idx = ridge;
            idx.insert(std::upper_bound(idx.begin(), idx.end(), pi), pi);
            facets.push_back(detail::make_boundary_simplex(pts, std::move(idx), interior));
            alive.push_back(true);
        }
        // keep the facet list compact once it is mostly dead
        if (facets.size() > 64 && std::count(alive.begin(), alive.end(), false) * 2 > static_cast<long>(facets.size())) {
            std::vector<BoundarySimplex<T>> keep;
            for (std::size_t f = 0; f < facets.size(); ++f)
                if (alive[f]) keep.push_back(std::move(facets[f]));
            facets = std::move(keep);
            alive.assign(facets.size(), true);
        }
    }

    std::vector<bool> used(pts.size(), false);
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (!alive[f]) continue;
        for (int i : facets[f].idx) used[static_cast<std::size_t>(i)] = true;
        out.simplices.push_back(std::move(facets[f]));
    }
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (used[static_cast<std::size_t>(i)]) out.used.push_back(i);
    return out;
}

}  // namespace godbersen
