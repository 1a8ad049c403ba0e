#include "godbersen/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace godbersen;
using Q = Rational;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<json> lines(const std::string& path) {
    std::vector<json> out;
    std::ifstream in(path);
    std::string l;
    while (std::getline(in, l))
        if (!l.empty()) out.push_back(json::parse(l));
    return out;
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / ("godbersen_test_" + name)).string(); }

}  // namespace

TEST(Translation, SimplexAtOneHalfIsCentroid) {
    auto s = centered_simplex<Q>(2);
    auto sol = minimize_over_translation(s, Q(1, 2));
    EXPECT_EQ(sol.value, simplex_hull_ratio(2, Q(1, 2)).ratio * volume(s));
    EXPECT_TRUE(sol.inside);
    EXPECT_EQ(sol.certificate.midpoint_failures, 0);
}

TEST(Translation, LambdaZeroIsVolume) {
    auto k = random_polytope<Q>(3, 7, 5, {});
    auto sol = minimize_over_translation(k, Q(0));
    EXPECT_EQ(sol.value, volume(k));
}

TEST(Translation, NeverAboveCentroid) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto k = random_polytope<double>(2, 6, seed, {});
        for (double lam : {0.2, 0.5, 0.8}) {
            auto sol = minimize_over_translation(k, lam);
            EXPECT_LE(sol.value, sol.value_at_centroid);
            EXPECT_TRUE(sol.inside);
            EXPECT_LE(sol.value, simplex_hull_ratio(2, lam).ratio * volume(k) * (1 + 1e-9));
        }
    }
}

TEST(Translation, SquareOptimumIsCentre) {
    // centrally symmetric: the objective is minimised at the centre
    auto sq = translate(cube<Q>(2, Q(-1), Q(1)), Point<Q>{Q(3), Q(1)});
    for (Q lam : {Q(1, 4), Q(1, 2)}) {
        auto sol = minimize_over_translation(sq, lam);
        EXPECT_EQ(sol.value, sol.value_at_centroid);
        EXPECT_EQ(sol.value, translation_objective(sq, lam, Point<Q>{Q(3), Q(1)}));
    }
}

TEST(Translation, ObjectiveMatchesDefinition) {
    auto k = random_polytope<Q>(2, 6, 3, {});
    Point<Q> x{Q(1, 16), Q(-1, 32)};
    auto kx = translate(k, -x);
    EXPECT_EQ(translation_objective(k, Q(1, 3), x), volume(hull_union(scale(kx, Q(2, 3)), scale(negate(kx), Q(1, 3)))));
}

TEST(Config, ParseExactValue) {
    EXPECT_EQ(parse_exact_value("0.35"), Q(7, 20));
    EXPECT_EQ(parse_exact_value("-1.5"), Q(-3, 2));
    EXPECT_EQ(parse_exact_value("3/8"), Q(3, 8));
    EXPECT_EQ(parse_exact_value("2"), Q(2));
    EXPECT_THROW(parse_exact_value("1e-3"), std::invalid_argument);
    EXPECT_THROW(parse_exact_value("."), std::invalid_argument);
}

TEST(Config, FromJson) {
    auto c = config_from_json(json::parse(R"({"kind":"gfr","n":3,"lambda_grid":["1/3",0.5,1],"mode":"float"})"));
    EXPECT_EQ(c.kind, ExperimentKind::gfr);
    ASSERT_EQ(c.lambda_grid.size(), 3u);
    EXPECT_EQ(c.lambda_grid[0], Q(1, 3));
    EXPECT_EQ(c.lambda_grid[1], Q(1, 2));
    EXPECT_EQ(c.lambda_grid[2], Q(1));
    EXPECT_EQ(c.mode, Mode::floating);
    EXPECT_THROW(config_from_json(json::parse(R"({"kind":"gfr","lamda_grid":[]})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"({"kind":"gfr"})"), ExperimentKind::kl), std::invalid_argument);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.kind = ExperimentKind::godbersen;
    c.n = 2;
    c.j_list = {2};
    EXPECT_THROW(normalised(c), std::invalid_argument);
    c.j_list = {1};
    c.lambda_grid = {Q(3, 2)};
    EXPECT_THROW(normalised(c), std::invalid_argument);
    c.lambda_grid = {};
    c.output_path = "/tmp/x/out.jsonl";
    auto d = normalised(c);
    EXPECT_EQ(d.csv_path, "/tmp/x/out.csv");
    EXPECT_EQ(d.summary_path, "/tmp/x/out.summary.csv");
    EXPECT_EQ(d.lambda_grid.size(), 9u);
    c.kind = ExperimentKind::planar;
    c.n = 5;
    EXPECT_EQ(normalised(c).n, 2);
}

TEST(TrialSeed, Deterministic) {
    EXPECT_EQ(trial_seed(1, 0), trial_seed(1, 0));
    EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
    EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

namespace {

ExperimentConfig small(ExperimentKind kind, const std::string& tag, Mode mode = Mode::exact) {
    ExperimentConfig c;
    c.kind = kind;
    c.n = 2;
    c.trials = 3;
    c.seed = 42;
    c.mode = mode;
    c.lambda_grid = {Q(1, 4), Q(1, 2)};
    c.theta_grid = {Q(1, 2)};
    c.functional_resolution = 33;
    c.output_path = tmp(tag + ".jsonl");
    return c;
}

void expect_clean(const ExperimentConfig& c) {
    auto s = run_experiment(c);
    EXPECT_EQ(s.exit_code(), 0) << kind_name(c.kind);
    EXPECT_EQ(s.theorem_failures, 0) << kind_name(c.kind);
    EXPECT_EQ(s.trial_errors, 0) << kind_name(c.kind);
    EXPECT_GT(s.records, 0);
    auto ls = lines(c.output_path);
    ASSERT_GE(ls.size(), 3u);
    EXPECT_EQ(ls.front()["type"], "config");
    EXPECT_EQ(ls.back()["type"], "summary");
    EXPECT_EQ(static_cast<int>(ls.size()), s.records + 2);
}

}  // namespace

TEST(Experiment, EveryKindRunsCleanExact) {
    for (auto k : {ExperimentKind::godbersen, ExperimentKind::gfr, ExperimentKind::godbersen_via_gfr, ExperimentKind::kl,
                   ExperimentKind::strange, ExperimentKind::ckl, ExperimentKind::planar})
        expect_clean(small(k, std::string("exact_") + kind_name(k)));
}

TEST(Experiment, EveryKindRunsCleanFloat) {
    for (auto k : {ExperimentKind::godbersen, ExperimentKind::gfr, ExperimentKind::kl, ExperimentKind::strange, ExperimentKind::ckl,
                   ExperimentKind::functional, ExperimentKind::planar})
        expect_clean(small(k, std::string("float_") + kind_name(k), Mode::floating));
}

TEST(Experiment, ByteIdenticalAcrossThreadCounts) {
    auto a = small(ExperimentKind::kl, "repro_a");
    a.trials = 6;
    a.threads = 1;
    auto b = a;
    b.output_path = tmp("repro_b.jsonl");
    b.threads = 3;
    run_experiment(a);
    run_experiment(b);
    EXPECT_EQ(slurp(a.output_path), slurp(b.output_path));
    EXPECT_EQ(slurp(normalised(a).csv_path), slurp(normalised(b).csv_path));
    EXPECT_EQ(slurp(normalised(a).summary_path), slurp(normalised(b).summary_path));
}

TEST(Experiment, CsvColumns) {
    auto c = small(ExperimentKind::godbersen, "csv");
    run_experiment(c);
    std::ifstream in(normalised(c).csv_path);
    std::string header, row;
    std::getline(in, header);
    EXPECT_EQ(header, "kind,n,j,lambda,theta,seed,trial,lhs,rhs,ratio,pass");
    std::getline(in, row);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
    EXPECT_EQ(row.rfind("godbersen/", 0), 0u);
    std::ifstream sin(normalised(c).summary_path);
    std::getline(sin, header);
    EXPECT_EQ(header, "kind,check,n,j,lambda,theta,count,min_ratio,max_ratio,mean_ratio,failures,violation_candidates");
}

TEST(Experiment, ConjectureRecordsCarryKind) {
    auto c = small(ExperimentKind::godbersen, "kinds");
    run_experiment(c);
    int conj = 0, thm = 0;
    for (const auto& l : lines(c.output_path)) {
        if (l["type"] != "check") continue;
        if (l["report"]["kind"] == "conjecture") ++conj;
        if (l["report"]["kind"] == "theorem") ++thm;
    }
    EXPECT_EQ(conj, 3);
    EXPECT_EQ(thm, 6);
}

TEST(Experiment, UnwritableOutputThrows) {
    auto c = small(ExperimentKind::strange, "x");
    c.output_path = "/nonexistent-dir/out.jsonl";
    EXPECT_THROW(run_experiment(c), std::runtime_error);
}

TEST(Experiment, ExitCodeOnlyFromHardFailures) {
    ExperimentSummary s;
    EXPECT_EQ(s.exit_code(), 0);
    s.violation_candidates = 4;
    s.float_flags_cleared = 2;
    EXPECT_EQ(s.exit_code(), 0);
    s.theorem_failures = 1;
    EXPECT_EQ(s.exit_code(), 2);
}
