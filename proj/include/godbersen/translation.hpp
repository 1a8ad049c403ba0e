#pragma once

// min over x in K of Vol((1-l)(K-x) v l(x-K)).
//
// Coordinatewise golden-section sweeps in double precision, restarted from
// the centroid and from the 2n boundary points c +- s e_i. The objective is
// treated as convex but nothing depends on it: the value returned is the
// objective at the best point found, an upper bound on the minimum. In
// exact mode that point is rounded to a dyadic inside K and re-evaluated
// exactly.

#include "godbersen/hrep.hpp"

#include <cmath>
#include <vector>

namespace godbersen {

struct ConvexityCertificate {
    int midpoint_tests = 0;
    int midpoint_failures = 0;  // f(mid) > (f(a) + f(b)) / 2 on a search chord
};

template <class T>
struct TranslationSolution {
    Point<T> x_star;
    T value;
    T value_at_centroid;
    int iterations = 0;   // coordinate line searches
    int evaluations = 0;
    ConvexityCertificate certificate;
    bool inside = false;  // x_star in K by the half-space test
};

template <class T>
T translation_objective(const VPolytope<T>& k, const T& lambda, const Point<T>& x) {
    auto kx = translate(k, -x);
    return volume(weighted_reflection_hull(kx, kx, lambda));
}

namespace detail {

// [lo, hi] such that x + t e_i stays in the half-spaces
inline std::pair<double, double> chord(const HPolytope<double>& h, const Point<double>& x, int i) {
    double lo = -1e300, hi = 1e300;
    for (const auto& hs : h.halfspaces) {
        double a = hs.normal[static_cast<std::size_t>(i)];
        double slack = hs.offset - dot(hs.normal, x);
        if (slack < 0.0) slack = 0.0;
        if (a > 1e-15)
            hi = std::min(hi, slack / a);
        else if (a < -1e-15)
            lo = std::max(lo, slack / a);
    }
    return {lo, hi};
}

}  // namespace detail

template <class T>
TranslationSolution<T> minimize_over_translation(const VPolytope<T>& k, const T& lambda, double rel_tol = 1e-8, int max_sweeps = 100) {
    const int n = k.dim();
    const auto kd = polytope_cast<double>(k);
    const auto hd = to_hrep(kd);
    const double lam = to_double(lambda);
    TranslationSolution<T> sol;
    auto f = [&](const Point<double>& x) {
        ++sol.evaluations;
        return translation_objective(kd, lam, x);
    };
    const Point<T> ce = centroid(k);
    const Point<double> c = point_cast<double>(ce);

    std::vector<Point<double>> starts{c};
    for (int i = 0; i < n; ++i) {
        auto [lo, hi] = detail::chord(hd, c, i);
        Point<double> a = c, b = c;
        a[static_cast<std::size_t>(i)] += lo;
        b[static_cast<std::size_t>(i)] += hi;
        starts.push_back(a);
        starts.push_back(b);
    }

    constexpr double invphi = 0.6180339887498949;
    Point<double> best_x = c;
    double best = f(c);
    for (const auto& s : starts) {
        Point<double> x = s;
        double v = f(x);
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            const double before = v;
            for (int i = 0; i < n; ++i) {
                ++sol.iterations;
                const auto ii = static_cast<std::size_t>(i);
                auto [lo, hi] = detail::chord(hd, x, i);
                double a = x[ii] + lo, b = x[ii] + hi;
                if (!(b - a > 1e-14)) continue;
                auto at = [&](double t) {
                    Point<double> y = x;
                    y[ii] = t;
                    return f(y);
                };
                double fa = at(a), fb = at(b), fm = at(0.5 * (a + b));
                ++sol.certificate.midpoint_tests;
                if (fm > 0.5 * (fa + fb) + 1e-12 * std::max(1.0, std::fabs(fm))) ++sol.certificate.midpoint_failures;
                double p = b - invphi * (b - a), q = a + invphi * (b - a);
                double fp = at(p), fq = at(q);
                while (b - a > 1e-11 * std::max(1.0, std::fabs(a) + std::fabs(b))) {
                    if (fp <= fq) {
                        b = q;
                        q = p;
                        fq = fp;
                        p = b - invphi * (b - a);
                        fp = at(p);
                    } else {
                        a = p;
                        p = q;
                        fp = fq;
                        q = a + invphi * (b - a);
                        fq = at(q);
                    }
                }
                double t = fp <= fq ? p : q;
                double ft = std::min(fp, fq);
                for (auto [tt, ff] : {std::pair{x[ii] + lo, fa}, std::pair{x[ii] + hi, fb}, std::pair{0.5 * (x[ii] + lo + x[ii] + hi), fm}})
                    if (ff < ft) {
                        t = tt;
                        ft = ff;
                    }
                if (ft < v) {
                    x[ii] = t;
                    v = ft;
                }
            }
            if (before - v <= rel_tol * std::fabs(before)) break;
        }
        if (v < best) {
            best = v;
            best_x = x;
        }
    }

    if constexpr (is_exact_v<T>) {
        // dyadic point, pulled towards the centroid until it is in K
        Point<T> x;
        for (double xi : best_x) x.push_back(round_to_dyadic(xi, 40));
        for (int tries = 0; !contains(k, x) && tries < 60; ++tries) x = ce + T(1, 2) * (x - ce);
        if (!contains(k, x)) x = ce;
        sol.x_star = x;
    } else {
        sol.x_star = best_x;
    }
    sol.value = translation_objective(k, lambda, sol.x_star);
    sol.value_at_centroid = translation_objective(k, lambda, ce);
    if (sol.value_at_centroid < sol.value) {
        sol.value = sol.value_at_centroid;
        sol.x_star = ce;
    }
    sol.inside = satisfies(to_hrep(k), sol.x_star);
    return sol;
}

}  // namespace godbersen
