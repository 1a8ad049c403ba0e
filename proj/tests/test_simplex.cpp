#include "godbersen/simplex.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace godbersen;
using Q = Rational;

namespace {

// lambda = i/20 together with every tie value (n+1-j)/(n+1)
std::set<Q> lambda_grid(int n) {
    std::set<Q> g;
    for (int i = 0; i <= 20; ++i) g.insert(Q(i, 20));
    for (int j = 0; j <= n + 1; ++j) g.insert(Q(n + 1 - j, n + 1));
    return g;
}

}  // namespace

TEST(SimplexHullRatio, PaperValues) {
    auto a = simplex_hull_ratio(2, Q(1, 2));
    EXPECT_EQ(a.k, std::vector<int>{1});
    EXPECT_EQ(a.ratio, Q(1, 2));
    auto b = simplex_hull_ratio(3, Q(1, 2));
    EXPECT_EQ(b.k, (std::vector<int>{1, 2}));
    EXPECT_TRUE(b.tie);
    EXPECT_EQ(b.ratios[0], Q(3, 8));
    EXPECT_EQ(b.ratios[1], Q(3, 8));
    EXPECT_EQ(simplex_hull_ratio(4, Q(0)).ratio, Q(1));
    EXPECT_EQ(simplex_hull_ratio(4, Q(1)).ratio, Q(1));
}

TEST(SimplexHullRatio, SmallLambdaIsInclusionCase) {
    for (int n = 1; n <= 6; ++n) {
        Q lam(1, n + 2);
        auto f = simplex_hull_ratio(n, lam);
        EXPECT_EQ(f.k.back(), n);
        EXPECT_EQ(f.ratio, pow_int(Q(1) - lam, n));
    }
}

TEST(SimplexHullRatio, AdmissibleKAndTies) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& lam : lambda_grid(n)) {
            auto f = simplex_hull_ratio(n, lam);
            Q x = Q(n + 1) * (Q(1) - lam);
            for (int k : f.k) {
                if (k == n && x >= Q(n)) continue;  // clamped inclusion range
                EXPECT_LE(x - 1, Q(k));
                EXPECT_LE(Q(k), x);
            }
            for (const auto& r : f.ratios) EXPECT_EQ(r, f.ratio);
        }
}

TEST(SimplexHullRatio, Symmetry) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& lam : lambda_grid(n)) EXPECT_EQ(simplex_hull_ratio(n, lam).ratio, simplex_hull_ratio(n, Q(1) - lam).ratio);
}

TEST(SimplexHullRatio, ContinuityAtTies) {
    for (int n = 2; n <= 6; ++n)
        for (int j = 1; j <= n; ++j) {
            Q lam(n + 1 - j, n + 1);
            EXPECT_EQ(simplex_term(n, j - 1, lam), simplex_term(n, j, lam));
        }
}

TEST(SimplexHullRatio, MatchesGeometryCore) {
    for (int n = 2; n <= 3; ++n) {
        auto s = centered_simplex<Q>(n);
        Q vs = volume(s);
        for (const auto& lam : lambda_grid(n))
            EXPECT_EQ(volume(weighted_reflection_hull(s, s, lam)), simplex_hull_ratio(n, lam).ratio * vs) << n << " " << lam;
    }
}

TEST(SimplexHullRatio, FloatAgrees) {
    for (int n = 2; n <= 4; ++n)
        for (const auto& lam : lambda_grid(n)) {
            auto e = simplex_hull_ratio(n, lam);
            auto f = simplex_hull_ratio(n, to_double(lam));
            EXPECT_NEAR(f.ratio, to_double(e.ratio), 1e-14);
            EXPECT_EQ(f.tie, e.tie);
        }
}

TEST(SimplexHullRatio, VertexAtOriginSumsToOne) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& lam : lambda_grid(n)) {
            Q sum(0);
            for (int k = 0; k <= n; ++k) sum += simplex_term(n, k, lam);
            EXPECT_EQ(sum, Q(1));
        }
    for (int n = 2; n <= 3; ++n) {
        auto s = standard_simplex<Q>(n);
        for (Q lam : {Q(1, 4), Q(1, 2), Q(3, 4), Q(1, 3)}) EXPECT_EQ(volume(weighted_reflection_hull(s, s, lam)), volume(s));
    }
}

TEST(SimplexHullRatio, FaryRedei) {
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(simplex_hull_ratio(n, Q(1, 2)).ratio, fary_redei_ratio(n));
}

TEST(BuildKt, VolumeRatio) {
    for (int n = 2; n <= 4; ++n) {
        Q vs = volume(standard_simplex<Q>(n));
        for (int i = 0; i <= 10; ++i) {
            Q t = Q(1, n) + (Q(1) - Q(1, n)) * Q(i, 10);
            Q lam = t / (1 + t);
            auto f = simplex_hull_ratio(n, lam);
            Q expect = Q(binomial(n, f.k[0])) * pow_int(t, n - f.k[0]);
            EXPECT_EQ(volume(build_Kt(n, t)) / vs, expect) << "n=" << n << " t=" << t;
        }
    }
}

TEST(BuildKt, GenericFacetsHaveNVerticesKFromS) {
    for (int n = 2; n <= 4; ++n)
        for (Q t : {Q(1, n) + Q(1, 97), Q(2, 3) + Q(1, 101), Q(9, 10)}) {
            auto f = simplex_hull_ratio(n, t / (1 + t));
            if (f.tie) continue;
            const int k = f.k[0];
            auto kt = build_Kt(n, t);
            // chart images of e_1..e_{n+1}
            std::set<Point<Q>> svert;
            for (int j = 0; j <= n; ++j) svert.insert(kt_chart(unit_vector<Q>(n + 1, j)));
            EXPECT_EQ(kt.facets().size(), static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(binomial(n, k)));
            for (const auto& fc : kt.facets()) {
                EXPECT_EQ(static_cast<int>(fc.vertex_indices.size()), n);
                int from_s = 0;
                for (int i : fc.vertex_indices) from_s += svert.count(kt.vertices()[static_cast<std::size_t>(i)]) ? 1 : 0;
                EXPECT_EQ(from_s, k);
            }
        }
}

TEST(BuildKt, FacetNormalConditions) {
    for (int n = 2; n <= 5; ++n)
        for (int i = 0; i <= 10; ++i) {
            Q t = Q(1, n) + (Q(1) - Q(1, n)) * Q(i, 10);
            Q x = Q(n + 1) / (1 + t);
            for (int k = 1; k <= n; ++k) {
                auto c = check_kt_facet_normal(n, k, t);
                EXPECT_TRUE(c.orthogonal_to_a);
                bool strict = x - 1 < Q(k) && Q(k) < x;
                EXPECT_EQ(c.supporting && c.exact_vertex_set, strict) << n << " " << k << " " << t;
            }
        }
}

TEST(BuildKt, FacetNormalMatchesHull) {
    // u_k in the chart: the hyperplane <x,u> = -t restricted to sum x = 1
    const int n = 3;
    const Q t(3, 5);
    const int k = simplex_hull_ratio(n, t / (1 + t)).k[0];
    auto kt = build_Kt(n, t);
    auto u = kt_facet_normal(n, k, t);
    Point<Q> normal;
    for (int i = 0; i < n; ++i) normal.push_back(-(u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(n)]));
    Q off = t + u[static_cast<std::size_t>(n)];
    auto canon = detail::canonical_normal(normal, off);
    bool found = false;
    for (const auto& f : kt.facets()) found |= f.outward_normal == canon && f.offset == off;
    EXPECT_TRUE(found);
}

TEST(GfrImpliesGodbersen, Identity) {
    auto a = gfr_implies_godbersen_bound(3, 1);
    EXPECT_TRUE(a.pass);
    EXPECT_EQ(a.lhs, 3.0);
    EXPECT_EQ(gfr_implies_godbersen_bound(2, 1).lhs, 2.0);
    for (int n = 2; n <= 8; ++n)
        for (int j = 1; j < n; ++j) {
            auto r = gfr_implies_godbersen_bound(n, j);
            EXPECT_TRUE(r.pass) << n << " " << j;
            EXPECT_TRUE(r.equality);
        }
}

TEST(Json, SimplexFormula) {
    auto j = to_json(simplex_hull_ratio(3, Q(1, 2)));
    EXPECT_EQ(j["ratio"], "3/8");
    EXPECT_EQ(j["k"], json::array({1, 2}));
}
