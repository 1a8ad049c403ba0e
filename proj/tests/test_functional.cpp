#include "godbersen/functional.hpp"
#include "godbersen/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace godbersen;

namespace {

double lambda_abs(double a, double lam) { return a >= 0.0 ? a / (1.0 - lam) : -a / lam; }

GridFunction gaussian(int n, int res, double sigma, std::vector<double> center, double lo = -8.0, double hi = 8.0) {
    BuiltinOptions o;
    o.resolution = res;
    o.sigma = sigma;
    o.center = std::move(center);
    o.lo.assign(static_cast<std::size_t>(n), lo);
    o.hi.assign(static_cast<std::size_t>(n), hi);
    return builtin_function("gaussian", n, o);
}

// Delta by exhaustive search over all pairs of input nodes a (for f) and b
// (for g): the pair contributes f(a)^(1-l) g(b)^l at z = (1-l)^2 a - l^2 b.
// Values landing on the same z (up to 1e-9) are maxed.
std::vector<std::pair<Point<double>, double>> brute_delta(const GridFunction& f, const GridFunction& g, double lam) {
    std::vector<std::pair<Point<double>, double>> out;
    std::map<std::vector<long long>, std::size_t> where;
    const double a = (1 - lam) * (1 - lam), b = lam * lam;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (f.values[i] == 0.0) continue;
        auto x = f.shape.node(i);
        for (std::size_t k = 0; k < g.values.size(); ++k) {
            if (g.values[k] == 0.0) continue;
            auto y = g.shape.node(k);
            Point<double> z(x.size());
            std::vector<long long> key;
            for (std::size_t d = 0; d < x.size(); ++d) {
                z[d] = a * x[d] - b * y[d];
                key.push_back(std::llround(z[d] * 1e9));
            }
            double v = std::pow(f.values[i], 1 - lam) * std::pow(g.values[k], lam);
            auto it = where.find(key);
            if (it == where.end()) {
                where[key] = out.size();
                out.emplace_back(z, v);
            } else {
                out[it->second].second = std::max(out[it->second].second, v);
            }
        }
    }
    return out;
}

}  // namespace

TEST(GridFunction, JsonRoundTripAndEvaluation) {
    auto f = gaussian(2, 9, 1.0, {0.5, -0.25});
    auto g = grid_function_from_json(to_json(f));
    EXPECT_EQ(g.values, f.values);
    EXPECT_TRUE(same_shape(f.shape, g.shape));
    EXPECT_DOUBLE_EQ(evaluate(f, f.shape.node(17)), f.values[17]);
    EXPECT_EQ(evaluate(f, {100.0, 0.0}), 0.0);
    // log-linear data is reproduced exactly between nodes
    auto e = sample(cube_shape(2, 0.0, 4.0, 5), [](const Point<double>& x) { return std::exp(-x[0] - 2 * x[1]); });
    EXPECT_NEAR(evaluate(e, {0.3, 1.7}), std::exp(-0.3 - 3.4), 1e-14);
}

TEST(GridFunction, RejectsNegativeValues) {
    auto j = to_json(gaussian(1, 5, 1.0, {}));
    j["values"][2] = -1.0;
    EXPECT_THROW(grid_function_from_json(j), GeometryError);
}

TEST(Integrate, IndicatorOfUnitBox) {
    auto f = sample(cube_shape(2, 0.0, 1.0, 11), [](const Point<double>&) { return 1.0; });
    EXPECT_NEAR(integrate(f).value, 1.0, 1e-14);
}

TEST(Integrate, TruncatedExponential) {
    auto f = sample(cube_shape(2, 0.0, 10.0, 41), [](const Point<double>& x) { return std::exp(-x[0] - x[1]); });
    auto q = integrate(f);
    EXPECT_NEAR(q.value, 1.0, 1e-3);
    // analytic value of the truncated integral
    EXPECT_NEAR(q.value, std::pow(1 - std::exp(-10.0), 2), 1e-12);
}

TEST(Integrate, RefinementWithinRichardsonEstimate) {
    for (int n = 1; n <= 2; ++n) {
        auto coarse = integrate(gaussian(n, 33, 1.0, {}));
        auto fine = integrate(gaussian(n, 65, 1.0, {}));
        EXPECT_LT(std::fabs(fine.value - coarse.value), coarse.error) << n;
        EXPECT_NEAR(fine.value, std::pow(2 * std::numbers::pi, n / 2.0), 5 * fine.error + 1e-12);
    }
}

TEST(LambdaDifference, SharpExponentialClosedForm) {
    for (int n = 1; n <= 2; ++n)
        for (double lam : {0.25, 0.5, 0.75}) {
            BuiltinOptions o;
            o.resolution = 129;
            auto g = builtin_function("sharp-exponential", n, o);
            auto d = lambda_difference(g, g, lam);
            double worst = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
                auto z = d.shape.node(i);
                double e = 0.0;
                for (double c : z) e += lambda_abs(c, lam);
                double want = std::exp(-e);
                if (want < 1e-10) continue;
                worst = std::max(worst, std::fabs(d.values[i] - want) / want);
            }
            EXPECT_LT(worst, 1e-9) << n << " " << lam;
            EXPECT_NEAR(integrate(d).value, 1.0, 1e-3);
            EXPECT_NEAR(integrate(g).value, 1.0, 1e-3);
        }
}

TEST(LambdaDifference, BoxIndicatorsAtOneHalf) {
    auto f = sample(cube_shape(2, -1.0, 1.0, 17), [](const Point<double>&) { return 1.0; });
    auto d = lambda_difference(f, f, 0.5, 33);
    // support is (1/4)[-1,1]^2 + (1/4)[-1,1]^2 = [-1/2, 1/2]^2
    for (std::size_t i = 0; i < d.values.size(); ++i) EXPECT_DOUBLE_EQ(d.values[i], 1.0);
    EXPECT_NEAR(d.shape.lo[0], -0.5, 1e-12);
    EXPECT_NEAR(d.shape.hi[1], 0.5, 1e-12);
}

TEST(LambdaDifference, MatchesExhaustivePairSearch) {
    // at l = 1/2 with output resolution 2(r-1)+1 the output lattice is
    // exactly the set of pair sums, so the two must agree node by node
    for (int n = 1; n <= 2; ++n) {
        auto f = gaussian(n, 17, 1.3, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        auto g = gaussian(n, 17, 0.8, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        auto d = lambda_difference(f, g, 0.5, 33);
        auto brute = brute_delta(f, g, 0.5);
        ASSERT_EQ(brute.size(), d.values.size());
        for (const auto& [z, v] : brute) {
            if (v < 1e-10) continue;
            EXPECT_NEAR(evaluate(d, z), v, 1e-12 * std::max(1.0, v));
        }
    }
}

TEST(LambdaDifference, GaussianClosedForm) {
    // f = g = exp(-|x|^2/2): Delta(z) = exp(-|z|^2 / (2((1-l)^3 + l^3))).
    // The lattice sup can only undershoot. In log terms the loss is at most
    // the curvature of log F + log G, which is 1/(1-l)^3 + 1/l^3, times
    // half the squared distance to the nearest lattice decomposition, plus
    // the interpolation error s^2/8 per axis of the input grid.
    for (double lam : {0.3, 0.5}) {
        auto f = gaussian(2, 65, 1.0, {0.0, 0.0});
        auto d = lambda_difference(f, f, lam);
        const double s = std::pow(1 - lam, 3) + std::pow(lam, 3);
        const double h = d.shape.step(0), sf = f.shape.step(0);
        const double bound = 0.5 * (1 / std::pow(1 - lam, 3) + 1 / std::pow(lam, 3)) * (2 * h * h / 4) + 2 * sf * sf / 8;
        for (std::size_t i = 0; i < d.values.size(); ++i) {
            auto z = d.shape.node(i);
            double r2 = z[0] * z[0] + z[1] * z[1];
            if (r2 > 2.0) continue;
            double want = std::exp(-r2 / (2 * s));
            EXPECT_LE(d.values[i], want * (1 + 1e-12));
            EXPECT_GE(d.values[i], want * std::exp(-bound));
        }
    }
}

TEST(LambdaDifference, TranslationCompatibility) {
    // f_a(x) = f(x + a): Delta^{f_a, g_b}(z) = Delta^{f, g}(z + (1-l)^2 a - l^2 b)
    const double lam = 0.4;
    const double a = 0.5, b = -1.0;
    auto f = gaussian(1, 161, 1.0, {0.0}, -8, 8);
    auto g = gaussian(1, 161, 0.7, {0.0}, -8, 8);
    auto fa = gaussian(1, 161, 1.0, {-a}, -8, 8);
    auto gb = gaussian(1, 161, 0.7, {-b}, -8, 8);
    auto d = lambda_difference(f, g, lam, 161);
    auto ds = lambda_difference(fa, gb, lam, 161);
    const double shift = (1 - lam) * (1 - lam) * a - lam * lam * b;
    for (double z = -1.5; z <= 1.5; z += 0.25) {
        double want = evaluate(d, {z + shift});
        // both sides carry the lattice undershoot, which differs with alignment
        EXPECT_NEAR(evaluate(ds, {z}), want, 1e-2 * want) << z;
    }
}

TEST(LambdaDifference, ScalingAndLogConcavity) {
    const double lam = 0.35;
    auto f = gaussian(2, 33, 1.0, {0.3, 0.0});
    auto g = sample(f.shape, [](const Point<double>& x) { return (x[0] >= 0 && x[1] >= 0 && x[0] + x[1] <= 2) ? 1.0 : 0.0; }, true);
    auto d = lambda_difference(f, g, lam);
    auto f3 = f, g5 = g;
    for (auto& v : f3.values) v *= 3.0;
    for (auto& v : g5.values) v *= 5.0;
    auto ds = lambda_difference(f3, g5, lam);
    const double c = std::pow(3.0, 1 - lam) * std::pow(5.0, lam);
    ASSERT_EQ(d.values.size(), ds.values.size());
    for (std::size_t i = 0; i < d.values.size(); ++i) EXPECT_NEAR(ds.values[i], c * d.values[i], 1e-12 * c);
    EXPECT_TRUE(midpoint_log_concave(d, 1e-9));
}

TEST(LambdaDifference, RejectsBadInput) {
    auto f = gaussian(1, 9, 1.0, {});
    auto g = gaussian(2, 9, 1.0, {});
    EXPECT_THROW(lambda_difference(f, g, 0.5), GeometryError);
    EXPECT_THROW(lambda_difference(f, f, 0.0), GeometryError);
    EXPECT_THROW(lambda_difference(f, f, 1.0), GeometryError);
}

TEST(GeometricMean, BasicIdentities) {
    auto f = gaussian(2, 17, 1.0, {0.2, 0.1});
    auto g = gaussian(2, 17, 0.6, {-0.5, 0.0}, -8, 8);
    auto m = geometric_mean(f, f, 0.3);
    for (std::size_t i = 0; i < f.values.size(); ++i) EXPECT_NEAR(m.values[i], f.values[i], 1e-15);
    auto a = geometric_mean(f, g, 0.3);
    auto b = geometric_mean(g, f, 0.7);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-14 * a.values[i]);
    auto other = gaussian(2, 9, 1.0, {});
    EXPECT_THROW(geometric_mean(f, other, 0.5), GeometryError);
}

TEST(GeometricMean, SupportFunctionExponentials) {
    // (e^{-h_A})^l (e^{-h_B})^(1-l) = e^{-h_{lA + (1-l)B}}
    auto k = random_polytope<double>(2, 7, 3);
    auto l = random_polytope<double>(2, 6, 4);
    const double lam = 0.3;
    auto ka = polar_body(k), la = polar_body(l);
    auto mix = minkowski_sum(scale(ka, lam), scale(la, 1 - lam));
    auto shape = cube_shape(2, -3.0, 3.0, 13);
    auto fk = sample(shape, [&](const Point<double>& x) { return std::exp(-support(ka, x)); });
    auto fl = sample(shape, [&](const Point<double>& x) { return std::exp(-support(la, x)); });
    auto gm = geometric_mean(fk, fl, lam);
    for (std::size_t i = 0; i < gm.values.size(); ++i)
        EXPECT_NEAR(gm.values[i], std::exp(-support(mix, shape.node(i))), 1e-12);
}

TEST(FunctionalInequality, SharpExponentialIsEquality) {
    BuiltinOptions o;
    o.resolution = 129;
    for (int n = 1; n <= 2; ++n)
        for (double lam : {0.25, 0.5, 0.75}) {
            auto g = builtin_function("sharp-exponential", n, o);
            auto r = verify_functional_inequality(g, g, lam);
            EXPECT_TRUE(r.pass);
            EXPECT_TRUE(r.meta["near_equality"].get<bool>()) << r.lhs << " " << r.rhs;
            EXPECT_TRUE(r.meta["pl_pass"].get<bool>());
            EXPECT_NEAR(r.meta["integral_delta"].get<double>(), 1.0, 1e-3);
        }
}

TEST(FunctionalInequality, TruncatedGaussiansStrict) {
    auto f = gaussian(2, 65, 1.0, {0.5, 0.0}, -6, 6);
    auto g = gaussian(2, 65, 0.7, {-0.3, 0.4}, -6, 6);
    auto r = verify_functional_inequality(f, g, 1.0 / 3.0);
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.lhs, r.rhs);
    EXPECT_FALSE(r.meta["near_equality"].get<bool>());
    EXPECT_TRUE(r.meta["pl_pass"].get<bool>());
    EXPECT_LE(r.meta["pl_lower"].get<double>(), r.meta["integral_delta"].get<double>());
}

TEST(FunctionalInequality, HomogeneousUnderScaling) {
    auto f = gaussian(1, 129, 1.0, {0.5});
    auto g = gaussian(1, 129, 2.0, {0.0}, -8, 8);
    auto r1 = verify_functional_inequality(f, g, 0.4);
    for (auto& v : f.values) v *= 7.0;
    auto r2 = verify_functional_inequality(f, g, 0.4);
    EXPECT_NEAR(r2.lhs, 7 * r1.lhs, 1e-10 * r2.lhs);
    EXPECT_NEAR(r2.rhs, 7 * r1.rhs, 1e-10 * r2.rhs);
}

TEST(FunctionalInequality, RejectsNonLogConcave) {
    auto f = sample(cube_shape(1, -4.0, 4.0, 33), [](const Point<double>& x) {
        return std::exp(-(x[0] - 2) * (x[0] - 2)) + std::exp(-(x[0] + 2) * (x[0] + 2));
    });
    try {
        verify_functional_inequality(f, f, 0.5);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_log_concave);
    }
}

TEST(Legendre, HalfSquareIsSelfDual) {
    auto phi = sample_convex(cube_shape(1, -6.0, 6.0, 241), [](const Point<double>& x) { return 0.5 * x[0] * x[0]; });
    auto l = legendre(phi, cube_shape(1, -3.0, 3.0, 61));
    for (std::size_t i = 0; i < l.values.size(); ++i) {
        double x = l.shape.node(i)[0];
        // discrete transform is below the true one by at most h^2/8
        EXPECT_LE(l.values[i], 0.5 * x * x + 1e-12);
        EXPECT_NEAR(l.values[i], 0.5 * x * x, 0.05 * 0.05 / 8 + 1e-12);
    }
}

TEST(Legendre, SupportFunctionGivesIndicator) {
    auto k = cube<double>(2, -1.0, 1.0);
    auto h = sample_convex(cube_shape(2, -20.0, 20.0, 81), [&](const Point<double>& x) { return support(k, x); });
    auto l = legendre(h, cube_shape(2, -2.0, 2.0, 17));
    for (std::size_t i = 0; i < l.values.size(); ++i) {
        auto x = l.shape.node(i);
        if (std::max(std::fabs(x[0]), std::fabs(x[1])) <= 1.0)
            EXPECT_NEAR(l.values[i], 0.0, 1e-12);
        else
            EXPECT_GE(l.values[i], 4.9);
    }
}

TEST(InfConvolution, MatchesExhaustiveSearch) {
    auto phi = sample_convex(cube_shape(2, -1.0, 1.0, 9), [](const Point<double>& x) { return std::fabs(x[0]) + 2 * x[1] * x[1]; });
    auto psi = sample_convex(cube_shape(2, -2.0, 0.0, 9), [](const Point<double>& x) { return std::max(x[0], -x[1]) + x[0] * x[0]; });
    auto c = inf_convolution(phi, psi);
    ASSERT_EQ(c.shape.resolution, (std::vector<int>{17, 17}));
    for (std::size_t zi = 0; zi < c.values.size(); ++zi) {
        auto z = c.shape.node(zi);
        double best = kPosInf;
        for (std::size_t i = 0; i < phi.values.size(); ++i)
            for (std::size_t k = 0; k < psi.values.size(); ++k) {
                auto s = phi.shape.node(i) + psi.shape.node(k);
                if (std::fabs(s[0] - z[0]) < 1e-9 && std::fabs(s[1] - z[1]) < 1e-9) best = std::min(best, phi.values[i] + psi.values[k]);
            }
        EXPECT_NEAR(c.values[zi], best, 1e-12);
        EXPECT_DOUBLE_EQ(inf_convolution_at(phi, psi, c.shape.unflatten(zi)), c.values[zi]);
    }
}

TEST(InfConvolution, AgreesWithDoubleLegendre) {
    // phi box psi = L(L phi + L psi) for convex phi, psi
    const double h = 0.05;
    auto phi = sample_convex(cube_shape(1, -4.0, 4.0, 161), [](const Point<double>& x) { return 0.5 * x[0] * x[0]; });
    auto psi = sample_convex(cube_shape(1, -4.0, 4.0, 161), [](const Point<double>& x) { return std::fabs(x[0] - 0.5); });
    auto direct = inf_convolution(phi, psi);
    auto dual = cube_shape(1, -1.0, 1.0, 41);
    auto lp = legendre(phi, dual);
    auto ls = legendre(psi, dual);
    ConvexGrid sum{dual, lp.values};
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += ls.values[i];
    auto back = legendre(sum, cube_shape(1, -2.0, 2.0, 81));
    for (std::size_t i = 0; i < back.values.size(); ++i) {
        double z = back.shape.node(i)[0];
        double d = direct.values[static_cast<std::size_t>(std::lround((z - direct.shape.lo[0]) / h))];
        // closed form: Huber function of z - 1/2
        double t = std::fabs(z - 0.5);
        double want = t <= 1 ? 0.5 * t * t : t - 0.5;
        EXPECT_NEAR(d, want, 1e-9);
        EXPECT_NEAR(back.values[i], want, 2e-3);
    }
}

TEST(DeltaSupport, CenteredSquare) {
    auto k = cube<Rational>(2, Rational(-1, 2), Rational(1, 2));
    auto r = delta_support_identity_check(k, k, Rational(1, 2));
    EXPECT_TRUE(r.pass) << to_json(r).dump();
    EXPECT_EQ(r.meta["directions"].get<int>(), 16);
    EXPECT_TRUE(r.meta["normalization_K"]["pass"].get<bool>());
}

TEST(DeltaSupport, Interval) {
    auto k = cube<Rational>(1, Rational(-1), Rational(1));
    auto r = delta_support_identity_check(k, k, Rational(1, 3));
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.meta["normalization_K"]["integral"].get<double>(), 2.0, 1e-6);
    // gauge of (2/3)[-1,1] v -(1/3)[-1,1] = (2/3)[-1,1] is exact on the lattice
    EXPECT_NEAR(r.lhs, 0.0, 1e-12);
}

TEST(DeltaSupport, RandomCentredPairs) {
    for (unsigned s = 0; s < 3; ++s) {
        auto k = random_polytope<Rational>(2, 6, 50 + s);
        auto l = random_polytope<Rational>(2, 7, 60 + s);
        auto r = delta_support_identity_check(k, l, Rational(2, 5));
        EXPECT_TRUE(r.pass) << s;
        EXPECT_TRUE(r.meta["normalization_K"]["pass"].get<bool>()) << r.meta["normalization_K"].dump();
        EXPECT_TRUE(r.meta["normalization_L"]["pass"].get<bool>()) << r.meta["normalization_L"].dump();
    }
}

TEST(DeltaSupport, RequiresInteriorOrigin) {
    auto k = standard_simplex<Rational>(2);
    EXPECT_THROW(delta_support_identity_check(k, k, Rational(1, 2)), GeometryError);
}
