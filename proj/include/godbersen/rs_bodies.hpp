#pragma once

// Rogers-Shephard type bodies and the inequalities built on them.
//
// C(K, L) = conv(L x {0}, -K x {1}) in R^{n+1}; its slice at height s is
// (1-s)L - sK. The (2n+1)-dimensional body G(K, L) is never built, only its
// volume Vol(K)Vol(L) n!n!/(2n+1)! is used.

#include "godbersen/check_report.hpp"
#include "godbersen/hrep.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

namespace godbersen {

template <class T>
struct CKLBody {
    VPolytope<T> base_K;
    VPolytope<T> base_L;
    VPolytope<T> body;  // dimension n+1
    bool slices_checked = false;
    bool slices_ok = false;
};

/// (1-s)L - sK, the slice of C(K, L) at height s.
template <class T>
VPolytope<T> ckl_slice_formula(const VPolytope<T>& k, const VPolytope<T>& l, const T& s) {
    if (scalar_traits<T>::sign(s, 0.0) == 0) return l;
    if (scalar_traits<T>::sign(s - T(1), 0.0) == 0) return negate(k);
    return minkowski_sum(scale(l, T(1) - s), scale(k, -s));
}

/// Slice of an (n+1)-polytope at last coordinate s, as an n-polytope.
template <class T>
VPolytope<T> height_slice(const VPolytope<T>& body, const T& s) {
    const int n = body.dim() - 1;
    std::vector<int> free;
    for (int i = 0; i < n; ++i) free.push_back(i);
    Point<T> at = zero_point<T>(n + 1);
    at[static_cast<std::size_t>(n)] = s;
    auto sec = coordinate_section(to_hrep(body), free, at);
    if (sec.status != HStatus::ok) throw GeometryError(ErrorKind::empty_section, "slice is empty");
    return to_vrep(sec);
}

template <class T>
CKLBody<T> build_C(const VPolytope<T>& k, const VPolytope<T>& l, bool check_slices = true) {
    const int n = k.dim();
    if (l.dim() != n) throw GeometryError(ErrorKind::invalid_argument, "K and L live in different dimensions");
    if (n > 4) throw GeometryError(ErrorKind::dimension_out_of_range, "C(K, L) is limited to n <= 4");
    std::vector<Point<T>> pts;
    for (const auto& v : l.vertices()) {
        Point<T> p = v;
        p.push_back(T(0));
        pts.push_back(std::move(p));
    }
    for (const auto& w : k.vertices()) {
        Point<T> p = -w;
        p.push_back(T(1));
        pts.push_back(std::move(p));
    }
    CKLBody<T> c{k, l, convex_hull(std::move(pts))};
    if (check_slices) {
        c.slices_checked = true;
        c.slices_ok = true;
        for (int i = 0; i <= 4; ++i) {
            T s = T(i) / T(4);
            auto got = height_slice(c.body, s);
            auto want = ckl_slice_formula(k, l, s);
            bool same;
            if constexpr (is_exact_v<T>) {
                same = got == want;
            } else {
                same = got.size() == want.size() && std::fabs(volume(got) - volume(want)) <= 1e-9 * volume(want);
            }
            c.slices_ok = c.slices_ok && same;
        }
    }
    return c;
}

/// Vol_{2n+1}(G(K, L)) = Vol(K) Vol(L) n! n! / (2n+1)!
template <class T>
T g_volume_closed_form(const VPolytope<T>& k, const VPolytope<T>& l) {
    const int n = k.dim();
    return volume(k) * volume(l) * from_integer<T>(factorial(n) * factorial(n)) / from_integer<T>(factorial(2 * n + 1));
}

/// The same volume by Fubini over s in [0, 1]: the fibre of G at height s
/// has volume Vol(sK) Vol((1-s)L), with K and L read off the end slices of
/// C(K, L). Composite Simpson rule on `points` (odd) nodes.
template <class T>
double g_volume_by_quadrature(const CKLBody<T>& c, int points = 101) {
    if (points < 3 || points % 2 == 0) throw GeometryError(ErrorKind::invalid_argument, "Simpson needs an odd node count >= 3");
    const auto l = height_slice(c.body, T(0));
    const auto k = negate(height_slice(c.body, T(1)));
    const double vk = to_double(volume(k));
    const double vl = to_double(volume(l));
    const int n = k.dim();
    const double h = 1.0 / (points - 1);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        double s = i * h;
        double f = std::pow(s, n) * vk * std::pow(1.0 - s, n) * vl;
        double w = (i == 0 || i == points - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0;
}

/// Vol_{n+1}(C(K, L)) as the integral of the slice volumes
/// Vol_n((1-s)L - sK) over s in [0, 1] (composite Simpson). The slice volume
/// is a polynomial of degree n in s, so the rule is exact for n <= 3.
template <class T>
T ckl_volume_by_slices(const VPolytope<T>& k, const VPolytope<T>& l, int points = 101) {
    if (points < 3 || points % 2 == 0) throw GeometryError(ErrorKind::invalid_argument, "Simpson needs an odd node count >= 3");
    T sum(0);
    for (int i = 0; i < points; ++i) {
        const T s = T(i) / T(points - 1);
        const T f = volume(ckl_slice_formula(k, l, s));
        const int w = (i == 0 || i == points - 1) ? 1 : (i % 2 ? 4 : 2);
        sum += T(w) * f;
    }
    return sum / T(3 * (points - 1));
}

/// Axis-aligned affine subspace: point + span{e_i : i in coords}.
template <class T>
struct CoordinateSubspace {
    std::vector<int> coords;
    Point<T> point;
};

/// j!(n-j)!/n! Vol_j(P cap E) Vol_{n-j}(P | E^perp) <= Vol_n(P).
template <class T>
CheckReport section_projection_check(const VPolytope<T>& p, const CoordinateSubspace<T>& e) {
    const int n = p.dim();
    const int j = static_cast<int>(e.coords.size());
    if (j < 1 || j > n - 1) throw GeometryError(ErrorKind::invalid_argument, "subspace dimension must be in [1, n-1]");
    auto sec = coordinate_section(to_hrep(p), e.coords, e.point);
    if (sec.status != HStatus::ok) throw GeometryError(ErrorKind::empty_section, "section is empty");
    VPolytope<T> h;
    try {
        h = to_vrep(sec);
    } catch (const GeometryError& err) {
        if (err.kind() == ErrorKind::empty_intersection) throw GeometryError(ErrorKind::empty_section, "section is empty or degenerate");
        throw;
    }
    std::vector<int> perp;
    for (int i = 0; i < n; ++i)
        if (std::find(e.coords.begin(), e.coords.end(), i) == e.coords.end()) perp.push_back(i);
    auto proj = coordinate_projection(p, perp);
    const T factor = from_integer<T>(factorial(j) * factorial(n - j)) / from_integer<T>(factorial(n));
    const T vh = volume(h), vp = volume(proj), vol = volume(p);
    auto r = make_report("section_projection", CheckKind::theorem, factor * vh * vp, vol, is_exact_v<T> ? 0.0 : 1e-9 * to_double(vol));
    r.meta["n"] = n;
    r.meta["j"] = j;
    r.meta["vol_section"] = to_double(vh);
    r.meta["vol_projection"] = to_double(vp);
    return r;
}

/// h_{P°}(u), i.e. the gauge of P at u, for P containing the origin
/// (possibly on its boundary). nullopt stands for +infinity.
template <class T>
std::optional<T> polar_support(const VPolytope<T>& p, const Point<T>& u) {
    T best(0);
    for (const auto& f : p.facets()) {
        T a = dot(f.outward_normal, u);
        if (scalar_traits<T>::sign(f.offset, p.tolerance()) <= 0) {
            if (scalar_traits<T>::sign(a, p.tolerance()) > 0) return std::nullopt;
            continue;
        }
        T v = a / f.offset;
        if (v > best) best = v;
    }
    return best;
}

/// Nonzero vectors of {-1, 0, 1}^n.
template <class T>
std::vector<Point<T>> sign_directions(int n) {
    std::vector<Point<T>> out;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        Point<T> u;
        int c = code;
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            u.push_back(T(c % 3 - 1));
            nonzero = nonzero || c % 3 != 1;
            c /= 3;
        }
        if (nonzero) out.push_back(std::move(u));
    }
    return out;
}

namespace detail {

// theta K cap (1-theta) L; nullopt when lower-dimensional (including the
// endpoints theta in {0, 1} for bodies containing the origin).
template <class T>
std::optional<T> lens_volume(const VPolytope<T>& k, const VPolytope<T>& l, const T& theta) {
    if (scalar_traits<T>::sign(theta, 0.0) <= 0 || scalar_traits<T>::sign(theta - T(1), 0.0) >= 0) return std::nullopt;
    auto i = intersect(to_hrep(scale(k, theta)), to_hrep(scale(l, T(1) - theta)));
    if (i.status != HStatus::ok) return std::nullopt;
    return volume(i);
}

template <class T>
void require_origin(const VPolytope<T>& k, const VPolytope<T>& l) {
    const auto o = zero_point<T>(k.dim());
    if (!contains(k, o) || !contains(l, o)) throw GeometryError(ErrorKind::origin_not_contained, "0 must lie in K and L");
}

template <class T>
double report_tol(const T& scale_value) {
    if constexpr (is_exact_v<T>)
        return 0.0;
    else
        return 1e-9 * std::max(1.0, std::fabs(scale_value));
}

}  // namespace detail

/// Vol_{n+1}(C(K, L)) <= Vol(K) Vol(L) / ((n+1) Vol(theta K cap (1-theta) L)).
/// A lower-dimensional intersection makes the bound vacuous: the report
/// passes with meta.vacuous = true.
template <class T>
CheckReport verify_ckl_bound(const VPolytope<T>& k, const VPolytope<T>& l, const T& theta,
                             const CKLBody<T>* prebuilt = nullptr) {
    const int n = k.dim();
    std::optional<CKLBody<T>> own;
    if (!prebuilt) own = build_C(k, l, false);
    const auto& c = prebuilt ? *prebuilt : *own;
    const T vc = volume(c.body);
    auto lens = detail::lens_volume(k, l, theta);
    CheckReport r;
    if (!lens) {
        r.name = "ckl_bound";
        r.kind = CheckKind::theorem;
        r.lhs = to_double(vc);
        r.rhs = std::numeric_limits<double>::infinity();
        r.pass = true;
        r.meta["vacuous"] = true;
    } else {
        T rhs = volume(k) * volume(l) / (T(n + 1) * *lens);
        r = make_report("ckl_bound", CheckKind::theorem, vc, rhs, detail::report_tol(rhs));
        r.meta["vacuous"] = false;
        r.meta["vol_lens"] = to_double(*lens);
    }
    r.meta["n"] = n;
    r.meta["theta"] = to_double(theta);
    return r;
}

/// Vol(L v -K) Vol(theta K cap (1-theta) L) <= Vol(K) Vol(L), 0 in K cap L.
/// When equality holds the homothety (1-theta)L = theta K is tested too.
template <class T>
CheckReport verify_KL_inequality(const VPolytope<T>& k, const VPolytope<T>& l, const T& theta) {
    detail::require_origin(k, l);
    const T hull = volume(hull_union(l, negate(k)));
    const T lens = detail::lens_volume(k, l, theta).value_or(T(0));
    const T rhs = volume(k) * volume(l);
    auto r = make_report("kl_inequality", CheckKind::theorem, hull * lens, rhs, detail::report_tol(rhs));
    r.meta["n"] = k.dim();
    r.meta["theta"] = to_double(theta);
    r.meta["vol_hull"] = to_double(hull);
    r.meta["vol_lens"] = to_double(lens);
    if (r.equality && scalar_traits<T>::sign(lens, 0.0) > 0) {
        bool homothetic;
        if constexpr (is_exact_v<T>)
            homothetic = scale(l, T(1) - theta) == scale(k, theta);
        else
            homothetic = std::fabs(to_double(volume(scale(l, T(1) - theta))) - to_double(volume(scale(k, theta)))) <= 1e-9;
        r.meta["homothetic"] = homothetic;
        // h_{L°} = ((1-theta)/theta) h_{K°} on sampled directions
        bool support_identity = true;
        const T ratio = (T(1) - theta) / theta;
        for (const auto& u : sign_directions<T>(k.dim())) {
            auto hk = polar_support(k, u);
            auto hl = polar_support(l, u);
            if (!hk || !hl) {
                support_identity = support_identity && !hk && !hl;
                continue;
            }
            support_identity = support_identity && scalar_traits<T>::sign(*hl - ratio * *hk, 1e-9) == 0;
        }
        r.meta["polar_support_identity"] = support_identity;
    }
    return r;
}

/// Vol((1-l)K v -lK) <= Vol(K) for 0 in K, obtained from verify_KL_inequality
/// with (1-l)K, lK and theta = l; the report carries the direct form.
template <class T>
CheckReport verify_reflection_hull(const VPolytope<T>& k, const T& lambda) {
    const auto o = zero_point<T>(k.dim());
    if (!contains(k, o)) throw GeometryError(ErrorKind::origin_not_contained, "0 must lie in K");
    const T lhs = volume(weighted_reflection_hull(k, k, lambda));
    const T rhs = volume(k);
    auto r = make_report("reflection_hull", CheckKind::theorem, lhs, rhs, detail::report_tol(rhs));
    r.meta["lambda"] = to_double(lambda);
    if (scalar_traits<T>::sign(lambda, 0.0) > 0 && scalar_traits<T>::sign(lambda - T(1), 0.0) < 0) {
        auto via = verify_KL_inequality(scale(k, T(1) - lambda), scale(k, lambda), lambda);
        r.meta["via_kl_pass"] = via.pass;
        r.meta["via_kl_ratio"] = via.ratio;
    }
    return r;
}

/// Both links of the appendix argument for the KL inequality:
///   Vol(-K v L) / (n+1) <= Vol(C(K,L)) <= Vol(K)Vol(L) / ((n+1) Vol(lens)).
template <class T>
std::vector<CheckReport> verify_appendix_chain(const VPolytope<T>& k, const VPolytope<T>& l, const T& theta) {
    detail::require_origin(k, l);
    const int n = k.dim();
    auto c = build_C(k, l, false);
    const T vc = volume(c.body);
    const T first = volume(hull_union(negate(k), l)) / T(n + 1);
    std::vector<CheckReport> out;
    auto link = make_report("ckl_projection_link", CheckKind::theorem, first, vc, detail::report_tol(vc));
    link.meta["theta"] = to_double(theta);
    out.push_back(std::move(link));
    out.push_back(verify_ckl_bound(k, l, theta, &c));
    out.push_back(verify_KL_inequality(k, l, theta));
    return out;
}

/// Vol(K v -L) Vol((K° + L°)°) <= Vol(K) Vol(L) for 0 interior to K and L.
/// (K° + L°)° is formed as polar -> Minkowski sum -> polar and compared
/// with the gauge construction; the inclusion
/// theta K cap (1-theta) L in (K° + L°)° is checked on theta = 1/10..9/10.
template <class T>
CheckReport verify_strange(const VPolytope<T>& k, const VPolytope<T>& l) {
    const auto o = zero_point<T>(k.dim());
    if (!contains_in_interior(k, o) || !contains_in_interior(l, o))
        throw GeometryError(ErrorKind::origin_not_interior, "0 must be interior to K and L");
    auto psp = polar(to_hrep(minkowski_sum(polar_body(k), polar_body(l))));
    auto gauge_route = to_vrep(polar_sum_polar(k, l));
    const T vpsp = volume(psp);
    const T hull = volume(hull_union(k, negate(l)));
    const T rhs = volume(k) * volume(l);
    auto r = make_report("polar_sum_inequality", CheckKind::theorem, hull * vpsp, rhs, detail::report_tol(rhs));
    r.meta["n"] = k.dim();
    r.meta["vol_hull"] = to_double(hull);
    r.meta["vol_polar_sum_polar"] = to_double(vpsp);
    if constexpr (is_exact_v<T>)
        r.meta["gauge_route_agrees"] = gauge_route == psp;
    else
        r.meta["gauge_route_agrees"] = std::fabs(volume(gauge_route) - vpsp) <= 1e-9 * vpsp;
    const auto h = to_hrep(psp);
    bool inclusion = true;
    for (int i = 1; i <= 9; ++i) {
        const T theta = T(i) / T(10);
        auto lens = intersect(to_hrep(scale(k, theta)), to_hrep(scale(l, T(1) - theta)));
        if (lens.status != HStatus::ok) continue;
        const auto lv = to_vrep(lens);
        for (const auto& v : lv.vertices()) inclusion = inclusion && satisfies(h, v);
    }
    r.meta["lens_inclusion"] = inclusion;
    return r;
}

/// Orthogonal simplices K = conv{0, e_i}, L = conv{0, l_i e_i}: returns the
/// geometry-core values of Vol(K v -L), Vol((K° + L°)°) and Vol(K)Vol(L)
/// next to the closed forms prod(1+l_i)/n!, prod l_i/(1+l_i)/n! and
/// prod l_i/n!^2.
template <class T>
struct OrthogonalSimplexCheck {
    T hull, hull_closed;
    T polar_sum, polar_sum_closed;
    T product, product_closed;
    bool all_equal = false;
};

template <class T>
OrthogonalSimplexCheck<T> orthogonal_simplex_check(const std::vector<T>& lambdas) {
    const int n = static_cast<int>(lambdas.size());
    check_dimension(n);
    auto k = standard_simplex<T>(n);
    std::vector<Point<T>> lp{zero_point<T>(n)};
    for (int i = 0; i < n; ++i) lp.push_back(lambdas[static_cast<std::size_t>(i)] * unit_vector<T>(n, i));
    auto l = convex_hull(std::move(lp));
    OrthogonalSimplexCheck<T> c;
    const T nf = from_integer<T>(factorial(n));
    c.hull = volume(hull_union(k, negate(l)));
    c.polar_sum = volume(to_vrep(polar_sum_polar(k, l)));
    c.product = c.hull * c.polar_sum;
    T p1(1), p2(1), p3(1);
    for (const auto& x : lambdas) {
        p1 *= T(1) + x;
        p2 *= x / (T(1) + x);
        p3 *= x;
    }
    c.hull_closed = p1 / nf;
    c.polar_sum_closed = p2 / nf;
    c.product_closed = p3 / (nf * nf);
    if constexpr (is_exact_v<T>) {
        c.all_equal = c.hull == c.hull_closed && c.polar_sum == c.polar_sum_closed && c.product == c.product_closed &&
                      c.product == volume(k) * volume(l);
    } else {
        auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
        c.all_equal = near(c.hull, c.hull_closed) && near(c.polar_sum, c.polar_sum_closed) &&
                      near(c.product, c.product_closed);
    }
    return c;
}

}  // namespace godbersen
