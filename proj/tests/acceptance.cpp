// Acceptance run: one PASS/FAIL line per criterion, with timing.
// Exit status is the number of failed criteria.

#include "godbersen/godbersen.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace godbersen;
using Q = Rational;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string tmp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "godbersen_acceptance";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<json> check_lines(const std::string& path) {
    std::vector<json> out;
    std::ifstream in(path);
    std::string l;
    while (std::getline(in, l)) {
        if (l.empty()) continue;
        auto j = json::parse(l);
        if (j["type"] == "check") out.push_back(std::move(j));
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

// 1. simplex formula against geometry-core, exact, 21 lambdas plus ties
Outcome simplex_formula() {
    int cases = 0, bad = 0;
    for (int n = 2; n <= 4; ++n) {
        std::vector<Q> lams;
        for (int i = 0; i <= 20; ++i) lams.emplace_back(i, 20);
        for (int j = 0; j <= n + 1; ++j) {
            Q t(n + 1 - j, n + 1);
            if (std::find(lams.begin(), lams.end(), t) == lams.end()) lams.push_back(t);
        }
        auto s = centered_simplex<Q>(n);
        const Q vs = volume(s);
        for (const auto& l : lams) {
            ++cases;
            if (volume(weighted_reflection_hull(s, s, l)) != simplex_hull_ratio(n, l).ratio * vs) ++bad;
        }
    }
    return {bad == 0, std::to_string(cases) + " (n, lambda) cases, " + std::to_string(bad) + " mismatches"};
}

// 2. V(S[j], -S[n-j]) = C(n,j) Vol(S), both methods
Outcome godbersen_simplex_equality() {
    int cases = 0, bad = 0;
    for (int n = 2; n <= 4; ++n) {
        auto s = centered_simplex<Q>(n);
        auto ns = negate(s);
        const Q vs = volume(s);
        for (int j = 0; j <= n; ++j) {
            ++cases;
            Q a = mixed_volume_pair(s, ns, j).value;
            Q b = mixed_volume_pair_polarized(s, ns, j).value;
            if (a != b || a != Q(binomial(n, j)) * vs) ++bad;
        }
    }
    return {bad == 0, std::to_string(cases) + " (n, j) cases, " + std::to_string(bad) + " mismatches"};
}

// 3 and 4 share one exact corpus: 50 random centred polytopes per n.
struct Corpus {
    std::vector<json> records;
    int trial_errors = 0;
    bool ran = false;
};

Corpus& godbersen_corpus() {
    static Corpus c;
    if (c.ran) return c;
    c.ran = true;
    for (int n = 2; n <= 4; ++n) {
        ExperimentConfig cfg;
        cfg.kind = ExperimentKind::godbersen;
        cfg.n = n;
        cfg.trials = 50;
        cfg.seed = 2024;
        cfg.mode = Mode::exact;
        cfg.output_path = tmp_path("godbersen_n" + std::to_string(n) + ".jsonl");
        auto s = run_experiment(cfg);
        c.trial_errors += s.trial_errors;
        for (auto& r : check_lines(cfg.output_path)) c.records.push_back(std::move(r));
    }
    return c;
}

Outcome godbersen_bound() {
    auto& c = godbersen_corpus();
    int checked = 0, bad = 0;
    double worst = 0.0, conj = 0.0;
    for (const auto& r : c.records) {
        const auto& rep = r["report"];
        if (rep["name"] == "godbersen_bound") {
            ++checked;
            if (r["status"] != "ok" || !rep["pass"].get<bool>()) ++bad;
            worst = std::max(worst, rep["lhs"].get<double>() / rep["rhs"].get<double>());
        }
        if (rep["name"] == "godbersen_conjecture") conj = std::max(conj, rep["ratio"].get<double>());
    }
    return {bad == 0 && c.trial_errors == 0 && checked == 50 * (1 + 2 + 3),
            std::to_string(checked) + " exact checks, " + std::to_string(bad) + " violations, " + std::to_string(c.trial_errors) +
                " trial errors, max V/Vol over bound " + fmt(worst) + ", max ratio to C(n,j) " + fmt(conj)};
}

Outcome difference_body() {
    auto& c = godbersen_corpus();
    int checked = 0, bad = 0;
    for (const auto& r : c.records) {
        const auto& rep = r["report"];
        if (rep["name"] != "difference_body") continue;
        ++checked;
        if (!rep["meta"]["expansion_identity"].get<bool>() || !rep["pass"].get<bool>()) ++bad;
    }
    auto tri = translate(standard_simplex<Q>(2), Point<Q>{Q(1, 3), Q(-2, 7)});
    auto t = difference_body_check(tri);
    const bool tri_ok = t.pass && t.equality && volume(minkowski_sum(tri, negate(tri))) == Q(6) * volume(tri);
    return {bad == 0 && checked == 150 && tri_ok,
            std::to_string(checked) + " expansion identities, " + std::to_string(bad) + " failures; triangle Vol(K-K) = 6 Area: " +
                (tri_ok ? "yes" : "no")};
}

// 5. equality cases of the reflection-hull bound and the KL inequality
Outcome equality_cases() {
    int cases = 0, bad = 0;
    for (int n = 2; n <= 3; ++n) {
        auto s = standard_simplex<Q>(n);
        for (Q lam : {Q(1, 4), Q(1, 2), Q(3, 4)}) {
            ++cases;
            auto r = verify_reflection_hull(s, lam);
            if (!r.equality || volume(weighted_reflection_hull(s, s, lam)) != volume(s)) ++bad;
        }
        ++cases;
        auto kl = verify_KL_inequality(s, s, Q(1, 2));
        if (!kl.equality || !kl.pass) ++bad;
    }
    return {bad == 0, std::to_string(cases) + " exact equality cases, " + std::to_string(bad) + " failures"};
}

// 6. orthogonal simplices
Outcome orthogonal_simplices() {
    const std::vector<Q> vals{Q(1, 2), Q(1), Q(2)};
    int cases = 0, bad = 0;
    for (const auto& a : vals)
        for (const auto& b : vals) {
            ++cases;
            if (!orthogonal_simplex_check<Q>({a, b}).all_equal) ++bad;
            for (const auto& c : vals) {
                ++cases;
                if (!orthogonal_simplex_check<Q>({a, b, c}).all_equal) ++bad;
            }
        }
    return {bad == 0, std::to_string(cases) + " lambda tuples, " + std::to_string(bad) + " mismatches"};
}

// 7. G(K,L) volume by quadrature and the appendix chain on random pairs
Outcome appendix_bodies() {
    double worst = 0.0;
    for (unsigned s = 0; s < 5; ++s) {
        auto k = random_polytope<Q>(2, 6, 700 + s);
        auto l = random_polytope<Q>(2, 6, 800 + s);
        const double closed = to_double(g_volume_closed_form(k, l));
        const double quad = g_volume_by_quadrature(build_C(k, l, false));
        worst = std::max(worst, std::fabs(quad - closed) / closed);
    }
    int failures = 0, records = 0, errors = 0;
    for (int n = 2; n <= 3; ++n) {
        ExperimentConfig cfg;
        cfg.kind = ExperimentKind::ckl;
        cfg.n = n;
        cfg.trials = 50;
        cfg.seed = 77;
        cfg.mode = Mode::exact;
        cfg.output_path = tmp_path("ckl_n" + std::to_string(n) + ".jsonl");
        auto s = run_experiment(cfg);
        failures += s.theorem_failures;
        records += s.records;
        errors += s.trial_errors;
    }
    return {worst <= 1e-3 && failures == 0 && errors == 0,
            "G quadrature worst relative error " + fmt(worst) + "; chain: " + std::to_string(records) + " exact checks on 100 pairs, " +
                std::to_string(failures) + " failures, " + std::to_string(errors) + " trial errors"};
}

// 8. functional inequality
Outcome functional() {
    double worst = 0.0;
    for (int n = 1; n <= 2; ++n) {
        auto f = builtin_function("sharp-exponential", n);
        const double ig = integrate(f).value;
        worst = std::max(worst, std::fabs(ig - 1.0));
        for (double lam : {0.25, 0.5, 0.75}) worst = std::max(worst, std::fabs(integrate(lambda_difference(f, f, lam)).value - 1.0));
    }
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::functional;
    cfg.n = 2;
    cfg.trials = 10;
    cfg.seed = 5;
    cfg.mode = Mode::floating;
    cfg.lambda_grid = {Q(1, 4), Q(1, 2), Q(3, 4)};
    cfg.output_path = tmp_path("functional.jsonl");
    auto s = run_experiment(cfg);
    int sandwich = 0, bad = 0, support = 0, support_bad = 0;
    for (const auto& r : check_lines(cfg.output_path)) {
        const auto& rep = r["report"];
        if (rep["name"] == "functional_inequality" || rep["name"] == "prekopa_leindler_lower") {
            ++sandwich;
            if (!rep["pass"].get<bool>()) ++bad;
        }
        if (rep["name"] == "delta_support_identity") {
            ++support;
            if (!rep["pass"].get<bool>() || rep["meta"]["directions"].get<int>() != 16) ++support_bad;
        }
    }
    return {worst <= 1e-3 && bad == 0 && support == 10 && support_bad == 0 && s.trial_errors == 0,
            "sharp example worst |integral - 1| " + fmt(worst) + "; sandwich " + std::to_string(sandwich) + " checks, " +
                std::to_string(bad) + " failures; support identity " + std::to_string(support) + " pairs x 16 directions, " +
                std::to_string(support_bad) + " failures"};
}

// 9. planar reduction
Outcome planar() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::planar;
    cfg.trials = 100;
    cfg.seed = 9;
    cfg.mode = Mode::exact;
    cfg.max_polygon_vertices = 15;
    cfg.output_path = tmp_path("planar.jsonl");
    auto s = run_experiment(cfg);
    int reductions = 0, bad = 0;
    std::size_t steps = 0;
    for (const auto& r : check_lines(cfg.output_path)) {
        const auto& rep = r["report"];
        if (rep["name"] != "planar_reduction") continue;
        ++reductions;
        steps += rep["meta"]["steps"].get<std::size_t>();
        if (!rep["pass"].get<bool>() || !rep["meta"]["steps_ok"].get<bool>() || !rep["meta"]["objective_chain_ok"].get<bool>()) ++bad;
    }
    return {bad == 0 && reductions == 900 && s.theorem_failures == 0 && s.trial_errors == 0,
            std::to_string(reductions) + " reductions, " + std::to_string(steps) + " exact steps audited, " + std::to_string(bad) +
                " failures"};
}

// 10. byte-identical reports, also across worker counts
Outcome reproducibility() {
    int compared = 0, differ = 0;
    for (auto [kind, mode] : {std::pair{ExperimentKind::gfr, Mode::floating}, std::pair{ExperimentKind::kl, Mode::exact},
                              std::pair{ExperimentKind::functional, Mode::floating}}) {
        ExperimentConfig a;
        a.kind = kind;
        a.n = 2;
        a.trials = 4;
        a.seed = 31;
        a.mode = mode;
        a.lambda_grid = {Q(1, 3), Q(1, 2)};
        a.functional_resolution = 33;
        a.threads = 1;
        a.output_path = tmp_path(std::string("repro_a_") + kind_name(kind) + ".jsonl");
        auto b = a;
        b.threads = 4;
        b.output_path = tmp_path(std::string("repro_b_") + kind_name(kind) + ".jsonl");
        auto c = a;
        c.output_path = tmp_path(std::string("repro_c_") + kind_name(kind) + ".jsonl");
        run_experiment(a);
        run_experiment(b);
        run_experiment(c);
        const auto ra = slurp(a.output_path);
        compared += 2;
        if (ra.empty() || ra != slurp(b.output_path)) ++differ;
        if (ra != slurp(c.output_path)) ++differ;
    }
    return {differ == 0, std::to_string(compared) + " report pairs compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"simplex formula vs geometry-core (n=2..4)", simplex_formula},
        {"V(S[j],-S[n-j]) = C(n,j) Vol(S), methods agree", godbersen_simplex_equality},
        {"n^n/(j^j (n-j)^(n-j)) bound, 50 bodies per n", godbersen_bound},
        {"difference-body expansion, triangle 6 Area", difference_body},
        {"reflection-hull and KL equality cases", equality_cases},
        {"orthogonal simplex identities", orthogonal_simplices},
        {"G(K,L) volume and appendix chain", appendix_bodies},
        {"functional inequality", functional},
        {"planar reduction, 100 polygons x 9 lambdas", planar},
        {"byte-identical reports", reproducibility},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << o.detail << " (" << fmt(secs)
                  << " s)" << std::endl;
    }
    return failed;
}
