#pragma once

// Seeded random bodies for sweeps. Every output is centred (centroid at the
// origin, exactly so in exact mode) and scaled to volume close to 1. In
// exact mode coordinates are rounded to dyadic rationals before hulling, and
// the unit-volume scale factor is itself a short dyadic, so the volume is 1
// only up to that rounding.

#include "godbersen/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace godbersen {

enum class RandomFlavor { gaussian_hull, sphere_hull, perturbed_simplex };

inline const char* flavor_name(RandomFlavor f) {
    switch (f) {
        case RandomFlavor::gaussian_hull: return "hull-of-gaussians";
        case RandomFlavor::sphere_hull: return "hull-of-sphere-points";
        case RandomFlavor::perturbed_simplex: return "perturbed-simplex";
    }
    return "?";
}

inline RandomFlavor parse_flavor(std::string_view s) {
    if (s == "hull-of-gaussians") return RandomFlavor::gaussian_hull;
    if (s == "hull-of-sphere-points") return RandomFlavor::sphere_hull;
    if (s == "perturbed-simplex") return RandomFlavor::perturbed_simplex;
    throw std::invalid_argument("unknown random flavor '" + std::string(s) + "'");
}

struct RandomOptions {
    RandomFlavor flavor = RandomFlavor::gaussian_hull;
    double perturbation = 0.15;  // perturbed-simplex only
    int bits = 10;               // dyadic precision of exact coordinates
    bool normalise_volume = true;
};

namespace detail {

inline std::vector<std::vector<double>> raw_sample(int n, int m, std::mt19937_64& rng, const RandomOptions& opt) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    if (opt.flavor == RandomFlavor::perturbed_simplex) {
        // conv{0, e_1, ..., e_n} plus noise; m is ignored
        for (int i = 0; i <= n; ++i) {
            std::vector<double> p(static_cast<std::size_t>(n), 0.0);
            if (i > 0) p[static_cast<std::size_t>(i - 1)] = 1.0;
            for (auto& x : p) x += opt.perturbation * g(rng);
            pts.push_back(std::move(p));
        }
        return pts;
    }
    for (int i = 0; i < m; ++i) {
        std::vector<double> p(static_cast<std::size_t>(n));
        double norm = 0.0;
        for (auto& x : p) {
            x = g(rng);
            norm += x * x;
        }
        if (opt.flavor == RandomFlavor::sphere_hull) {
            norm = std::sqrt(norm);
            for (auto& x : p) x /= norm;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

template <class T>
T from_sample(double x, int bits) {
    if constexpr (is_exact_v<T>)
        return round_to_dyadic(x, bits);
    else
        return x;
}

}  // namespace detail

/// Random centred polytope in R^n from m sample points (perturbed-simplex
/// uses n+1). Deterministic per seed; DegenerateInput is retried with a
/// derived seed up to 10 times.
template <class T>
VPolytope<T> random_polytope(int n, int m, std::uint64_t seed, const RandomOptions& opt = {}) {
    check_dimension(n);
    if (opt.flavor != RandomFlavor::perturbed_simplex && m < n + 1)
        throw GeometryError(ErrorKind::invalid_argument, "need m >= n+1 points");
    for (int attempt = 0;; ++attempt) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
        auto raw = detail::raw_sample(n, m, rng, opt);
        std::vector<Point<T>> pts;
        for (const auto& r : raw) {
            Point<T> p;
            for (double x : r) p.push_back(detail::from_sample<T>(x, opt.bits));
            pts.push_back(std::move(p));
        }
        try {
            auto p = convex_hull(std::move(pts));
            p = translate(p, -centroid(p));
            if (opt.normalise_volume) {
                double v = to_double(volume(p));
                T s = detail::from_sample<T>(std::pow(v, -1.0 / n), opt.bits);
                p = scale(p, s);
            }
            return p;
        } catch (const GeometryError& e) {
            if (e.kind() != ErrorKind::degenerate_input || attempt >= 10) throw;
        }
    }
}

/// Random centred polygon with exactly `vertices` vertices: points on a
/// perturbed circle at sorted random angles, so every sample is extreme.
template <class T>
VPolytope<T> random_polygon(int vertices, std::uint64_t seed, int bits = 10) {
    if (vertices < 3) throw GeometryError(ErrorKind::too_few_vertices, "a polygon needs 3 vertices");
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 1000) throw GeometryError(ErrorKind::degenerate_input, "could not sample a polygon");
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> ang;
        for (int i = 0; i < vertices; ++i) ang.push_back(2.0 * std::numbers::pi * u(rng));
        std::sort(ang.begin(), ang.end());
        std::vector<Point<T>> pts;
        for (double a : ang) {
            double r = 1.0 + 0.1 * (u(rng) - 0.5);
            pts.push_back({detail::from_sample<T>(r * std::cos(a), bits), detail::from_sample<T>(r * std::sin(a), bits)});
        }
        try {
            auto p = convex_hull(std::move(pts));
            if (static_cast<int>(p.size()) != vertices) continue;
            return translate(p, -centroid(p));
        } catch (const GeometryError& e) {
            if (e.kind() != ErrorKind::degenerate_input) throw;
        }
    }
}

}  // namespace godbersen
