#pragma once

// Mixed volumes by two independent routes.
//
// Interpolation: f(s) = Vol(sK + T) = sum_j C(n,j) s^j V(K[j], T[n-j]) is a
// polynomial of degree n, so n+1 samples determine every V(K[j], T[n-j]).
//
// Polarization: V(K_1..K_n) = (1/n!) sum_{S != {}} (-1)^{n-|S|} Vol(sum_S K_i).
// Equal bodies are detected, so that a subset sum only depends on how many
// copies of each distinct body it contains; this turns the 2^n - 1 hulls
// into at most prod (c_i + 1) - 1.

#include "godbersen/check_report.hpp"
#include "godbersen/polytope.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace godbersen {

enum class MixedVolumeMethod { interpolation, polarization };

inline const char* method_name(MixedVolumeMethod m) {
    return m == MixedVolumeMethod::interpolation ? "interpolation" : "polarization";
}

template <class T>
struct MixedVolumeResult {
    T value;
    MixedVolumeMethod method = MixedVolumeMethod::interpolation;
    std::vector<std::string> bodies;
    std::vector<int> multiplicities;  // (j, n-j) for pairs
    double condition_estimate = 1.0;  // float-mode interpolation only
};

/// All coefficients V(K[j], T[n-j]), j = 0..n, from one interpolation.
template <class T>
struct MixedVolumeCoefficients {
    std::vector<T> values;  // index j
    std::vector<T> nodes;
    std::vector<T> samples;  // f(node)
    double condition_estimate = 1.0;
};

namespace detail {

template <class T>
std::vector<T> default_nodes(int n) {
    std::vector<T> s;
    for (int i = 0; i <= n; ++i) {
        if constexpr (is_exact_v<T>) {
            s.push_back(T(i));
        } else {
            // Chebyshev points mapped to [0, 1]
            s.push_back(0.5 * (1.0 + std::cos((2.0 * i + 1.0) * std::numbers::pi / (2.0 * (n + 1)))));
        }
    }
    return s;
}

// 1-norm condition number of a small square matrix (explicit inverse).
inline double condition_number(const Matrix<double>& a) {
    const auto n = a.size();
    auto norm1 = [n](const Matrix<double>& m) {
        double best = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += std::fabs(m[r][c]);
            best = std::max(best, s);
        }
        return best;
    };
    Matrix<double> inv(n, Point<double>(n, 0.0));
    for (std::size_t c = 0; c < n; ++c) {
        Point<double> e(n, 0.0);
        e[c] = 1.0;
        auto col = solve(a, e, 0.0);
        if (!col) return std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n; ++r) inv[r][c] = (*col)[r];
    }
    return norm1(a) * norm1(inv);
}

}  // namespace detail

/// V(K[j], T[n-j]) for all j by sampling Vol(sK + T) at the given nodes
/// (default: 0..n exact, Chebyshev nodes on [0,1] in float mode).
template <class T>
MixedVolumeCoefficients<T> mixed_volume_coefficients(const VPolytope<T>& k, const VPolytope<T>& t,
                                                     std::vector<T> nodes = {}) {
    const int n = k.dim();
    if (t.dim() != n) throw GeometryError(ErrorKind::invalid_argument, "mixed volume of bodies in different dimensions");
    if (nodes.empty()) nodes = detail::default_nodes<T>(n);
    if (static_cast<int>(nodes.size()) != n + 1)
        throw GeometryError(ErrorKind::invalid_argument, "need n+1 interpolation nodes");

    MixedVolumeCoefficients<T> out;
    Matrix<T> vander;
    for (const auto& s : nodes) {
        T f;
        if (scalar_traits<T>::sign(s, 0.0) == 0)
            f = volume(t);
        else
            f = volume(minkowski_sum(scale(k, s), t));
        out.samples.push_back(f);
        Point<T> row;
        T p(1);
        for (int j = 0; j <= n; ++j) {
            row.push_back(p * from_integer<T>(binomial(n, j)));
            p *= s;
        }
        vander.push_back(std::move(row));
    }
    auto sol = solve(vander, out.samples);
    if (!sol) throw GeometryError(ErrorKind::degenerate_input, "interpolation nodes are not distinct");
    out.values = std::move(*sol);
    if constexpr (!is_exact_v<T>) {
        out.condition_estimate = detail::condition_number(vander);
        // mixed volumes are nonnegative; clamp round-off
        for (auto& v : out.values) v = std::max(v, 0.0);
    }
    out.nodes = std::move(nodes);
    return out;
}

/// V(K[j], T[n-j]) by interpolation.
template <class T>
MixedVolumeResult<T> mixed_volume_pair(const VPolytope<T>& k, const VPolytope<T>& t, int j) {
    const int n = k.dim();
    if (j < 0 || j > n) throw GeometryError(ErrorKind::invalid_argument, "j outside [0, n]");
    auto c = mixed_volume_coefficients(k, t);
    MixedVolumeResult<T> r;
    r.value = c.values[static_cast<std::size_t>(j)];
    r.method = MixedVolumeMethod::interpolation;
    r.bodies = {"K", "T"};
    r.multiplicities = {j, n - j};
    r.condition_estimate = c.condition_estimate;
    return r;
}

/// V(K_1, ..., K_n) by polarization. Restricted to n <= 4.
template <class T>
MixedVolumeResult<T> mixed_volume_general(const std::vector<VPolytope<T>>& bodies) {
    const int n = static_cast<int>(bodies.size());
    if (n == 0 || n > 4) throw GeometryError(ErrorKind::dimension_out_of_range, "polarization is limited to n <= 4");
    for (const auto& b : bodies)
        if (b.dim() != n) throw GeometryError(ErrorKind::invalid_argument, "need n bodies in R^n");

    // distinct bodies and, per argument, its class
    std::vector<int> cls(static_cast<std::size_t>(n));
    std::vector<int> reps;
    for (int i = 0; i < n; ++i) {
        int c = -1;
        for (int r = 0; r < static_cast<int>(reps.size()); ++r)
            if (bodies[static_cast<std::size_t>(reps[static_cast<std::size_t>(r)])] == bodies[static_cast<std::size_t>(i)]) c = r;
        if (c < 0) {
            c = static_cast<int>(reps.size());
            reps.push_back(i);
        }
        cls[static_cast<std::size_t>(i)] = c;
    }

    std::map<std::vector<int>, T> cache;
    auto subset_volume = [&](const std::vector<int>& counts) -> T {
        auto it = cache.find(counts);
        if (it != cache.end()) return it->second;
        std::vector<Point<T>> acc{zero_point<T>(n)};
        for (std::size_t r = 0; r < counts.size(); ++r) {
            if (counts[r] == 0) continue;
            const auto& b = bodies[static_cast<std::size_t>(reps[r])];
            const T c(counts[r]);
            std::vector<Point<T>> gen;
            for (const auto& v : b.vertices()) gen.push_back(c * v);
            std::vector<Point<T>> next;
            for (const auto& x : acc)
                for (const auto& y : gen) next.push_back(x + y);
            // prune to extreme points once the sum is full-dimensional
            try {
                acc = convex_hull(next).vertices();
            } catch (const GeometryError&) {
                acc = std::move(next);
            }
        }
        T v = volume(convex_hull(acc));
        cache.emplace(counts, v);
        return v;
    };

    T total(0);
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> counts(reps.size(), 0);
        int size = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) {
                ++counts[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])];
                ++size;
            }
        T v = subset_volume(counts);
        if ((n - size) % 2 == 0)
            total += v;
        else
            total -= v;
    }
    MixedVolumeResult<T> r;
    r.value = total / from_integer<T>(factorial(n));
    if constexpr (!is_exact_v<T>) r.value = std::max(r.value, 0.0);
    r.method = MixedVolumeMethod::polarization;
    for (int i = 0; i < n; ++i) r.bodies.push_back("K" + std::to_string(cls[static_cast<std::size_t>(i)] + 1));
    return r;
}

/// V(K[j], T[n-j]) through the polarization route.
template <class T>
MixedVolumeResult<T> mixed_volume_pair_polarized(const VPolytope<T>& k, const VPolytope<T>& t, int j) {
    const int n = k.dim();
    std::vector<VPolytope<T>> bodies;
    for (int i = 0; i < j; ++i) bodies.push_back(k);
    for (int i = j; i < n; ++i) bodies.push_back(t);
    auto r = mixed_volume_general(bodies);
    r.bodies = {"K", "T"};
    r.multiplicities = {j, n - j};
    return r;
}

/// n^n / (j^j (n-j)^(n-j)), exact.
inline Rational proved_godbersen_bound(int n, int j) {
    return Rational(pow_int(Integer(n), n)) / Rational(pow_int(Integer(j), j) * pow_int(Integer(n - j), n - j));
}

namespace detail {

template <class T>
CheckReport godbersen_report(const VPolytope<T>& k, int j, const T& vol, const T& mixed, double cond) {
    const int n = k.dim();
    T lhs = mixed / vol;
    T rhs = scalar_cast<T>(proved_godbersen_bound(n, j));
    if constexpr (is_exact_v<T>) rhs = proved_godbersen_bound(n, j);
    double tol = is_exact_v<T> ? 0.0 : 1e-9 * std::max(1.0, cond) * to_double(rhs);
    auto r = make_report("godbersen_bound", CheckKind::theorem, lhs, rhs, tol);
    T conj = from_integer<T>(binomial(n, j));
    r.meta["n"] = n;
    r.meta["j"] = j;
    r.meta["rhs_conjectured"] = to_double(conj);
    r.meta["ratio_to_conjectured"] = to_double(lhs) / to_double(conj);
    bool holds;
    if constexpr (is_exact_v<T>)
        holds = lhs <= conj;
    else
        holds = lhs <= conj + tol;
    r.meta["conjecture_holds"] = holds;
    if constexpr (!is_exact_v<T>) r.meta["condition_estimate"] = cond;
    return r;
}

}  // namespace detail

/// V(K[j], -K[n-j]) / Vol(K) against the proved bound n^n/(j^j(n-j)^(n-j));
/// the conjectured C(n, j) is recorded in meta.
template <class T>
CheckReport godbersen_ratio(const VPolytope<T>& k, int j) {
    const int n = k.dim();
    if (j < 1 || j > n - 1) throw GeometryError(ErrorKind::invalid_argument, "godbersen_ratio needs 1 <= j <= n-1");
    auto c = mixed_volume_coefficients(k, negate(k));
    return detail::godbersen_report(k, j, volume(k), c.values[static_cast<std::size_t>(j)], c.condition_estimate);
}

/// Every j at once (one interpolation).
template <class T>
std::vector<CheckReport> godbersen_ratios(const VPolytope<T>& k) {
    const int n = k.dim();
    auto c = mixed_volume_coefficients(k, negate(k));
    T vol = volume(k);
    std::vector<CheckReport> out;
    for (int j = 1; j <= n - 1; ++j)
        out.push_back(detail::godbersen_report(k, j, vol, c.values[static_cast<std::size_t>(j)], c.condition_estimate));
    return out;
}

/// Vol(K - K)/Vol(K) against C(2n, n). The expansion
/// Vol(K - K) = sum_j C(n,j) V(K[j], -K[n-j]) is checked with mixed volumes
/// interpolated at nodes 0, 2, 3, ..., n+1, so the node s = 1 (which is
/// K - K itself) is not used to obtain them.
template <class T>
CheckReport difference_body_check(const VPolytope<T>& k) {
    const int n = k.dim();
    const auto neg = negate(k);
    const T vol = volume(k);
    const T diff = volume(minkowski_sum(k, neg));
    std::vector<T> nodes{T(0)};
    for (int i = 2; i <= n + 1; ++i) nodes.push_back(T(i));
    auto c = mixed_volume_coefficients(k, neg, nodes);
    T expansion(0);
    for (int j = 0; j <= n; ++j) expansion += from_integer<T>(binomial(n, j)) * c.values[static_cast<std::size_t>(j)];

    T lhs = diff / vol;
    T rhs = from_integer<T>(binomial(2 * n, n));
    double tol = is_exact_v<T> ? 0.0 : 1e-9 * to_double(rhs);
    auto r = make_report("difference_body", CheckKind::theorem, lhs, rhs, tol);
    r.meta["n"] = n;
    r.meta["vol_difference_body"] = to_double(diff);
    r.meta["expansion_sum"] = to_double(expansion);
    if constexpr (is_exact_v<T>) {
        r.meta["expansion_identity"] = expansion == diff;
        r.meta["vol_difference_body_exact"] = diff.str();
    } else {
        r.meta["expansion_identity"] = std::fabs(expansion - diff) <= 1e-7 * diff;
    }
    json mv = json::array();
    for (const auto& v : c.values) mv.push_back(to_double(v));
    r.meta["mixed_volumes"] = mv;
    return r;
}

}  // namespace godbersen
