// godbersen-kit: experiment sweeps and one-shot checks.
//
// Exit status: 0 clean, 2 a proved inequality or identity failed,
// 3 bad input, configuration or I/O.

#include "godbersen/godbersen.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace godbersen;

namespace {

constexpr int kExitTheorem = 2;
constexpr int kExitInput = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<Rational> parse_grid(const std::string& s) {
    std::vector<Rational> g;
    for (const auto& x : split_list(s)) g.push_back(parse_exact_value(x));
    return g;
}

template <class T>
T value_as(const std::string& s) {
    if constexpr (is_exact_v<T>)
        return parse_exact_value(s);
    else
        return scalar_traits<double>::parse(s);
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-")
        std::cout << j.dump(2) << '\n';
    else
        write_json_file(path, j);
}

bool any_hard_failure(const std::vector<CheckReport>& rs) {
    for (const auto& r : rs)
        if (!r.pass && r.kind != CheckKind::conjecture) return true;
    return false;
}

json reports_json(const std::vector<CheckReport>& rs) {
    json a = json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

// --- experiment subcommands ------------------------------------------------

struct ExperimentFlags {
    std::string config;
    std::optional<int> n, trials, vertices, threads, max_polygon_vertices, resolution;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> lambda_grid, theta_grid, j_list, mode, output, csv, summary, flavor;
    // functional one-shot
    std::optional<std::string> function, g_function, f_file, g_file, lambda;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--n", f.n, "dimension");
    sub->add_option("--trials", f.trials, "number of random trials");
    sub->add_option("--seed", f.seed, "base seed");
    sub->add_option("--lambda-grid", f.lambda_grid, "comma separated, e.g. 1/4,1/2,0.75");
    sub->add_option("--theta-grid", f.theta_grid, "comma separated");
    sub->add_option("--j-list", f.j_list, "comma separated");
    sub->add_option("--mode", f.mode, "exact or float");
    sub->add_option("--output", f.output, "JSON-lines report");
    sub->add_option("--csv", f.csv, "per-check CSV (default: output with .csv)");
    sub->add_option("--summary", f.summary, "per-cell summary CSV");
    sub->add_option("--vertices", f.vertices, "sample points per random body");
    sub->add_option("--flavor", f.flavor, "gaussian-hull, sphere-hull or perturbed-simplex");
    sub->add_option("--threads", f.threads, "worker cap (also GODBERSEN_KIT_THREADS)");
}

ExperimentConfig build_config(ExperimentKind kind, const ExperimentFlags& f) {
    ExperimentConfig c;
    c.kind = kind;
    if (!f.config.empty()) c = config_from_json(read_json_file(f.config), kind);
    if (f.n) c.n = *f.n;
    if (f.trials) c.trials = *f.trials;
    if (f.seed) c.seed = *f.seed;
    if (f.lambda_grid) c.lambda_grid = parse_grid(*f.lambda_grid);
    if (f.theta_grid) c.theta_grid = parse_grid(*f.theta_grid);
    if (f.j_list) {
        c.j_list.clear();
        for (const auto& x : split_list(*f.j_list)) c.j_list.push_back(std::stoi(x));
    }
    if (f.mode) c.mode = parse_mode(*f.mode);
    if (f.output) c.output_path = *f.output;
    if (f.csv) c.csv_path = *f.csv;
    if (f.summary) c.summary_path = *f.summary;
    if (f.vertices) c.vertices = *f.vertices;
    if (f.flavor) c.flavor = parse_flavor(*f.flavor);
    if (f.threads) c.threads = *f.threads;
    if (f.max_polygon_vertices) c.max_polygon_vertices = *f.max_polygon_vertices;
    if (f.resolution) c.functional_resolution = *f.resolution;
    return normalised(c);
}

int run_sweep(ExperimentKind kind, const ExperimentFlags& f) {
    ExperimentConfig c;
    try {
        c = build_config(kind, f);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitInput;
    }
    try {
        auto s = run_experiment(c);
        std::cout << json{{"config", to_json(c)}, {"output", c.output_path}, {"csv", c.csv_path}, {"summary_csv", c.summary_path},
                          {"summary", to_json(s)}}
                         .dump(2)
                  << '\n';
        if (s.trial_errors > 0) std::cerr << "warning: " << s.trial_errors << " trial(s) raised errors, see the report\n";
        if (s.violation_candidates > 0) std::cerr << "note: " << s.violation_candidates << " VIOLATION-CANDIDATE record(s)\n";
        return s.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\nconfig: " << to_json(c).dump() << '\n';
        return kExitInput;
    }
}

// functional --function NAME: one inequality check on built-in or file grids
int run_functional_once(const ExperimentFlags& f, const std::string& out) {
    const int n = f.n.value_or(1);
    BuiltinOptions opt;
    if (f.resolution) opt.resolution = *f.resolution;
    auto load = [&](const std::optional<std::string>& name, const std::optional<std::string>& file) {
        if (file) return grid_function_from_json(read_json_file(*file));
        return builtin_function(name.value_or("sharp-exponential"), n, opt);
    };
    auto fg = load(f.function, f.f_file);
    auto gg = f.g_function || f.g_file ? load(f.g_function, f.g_file) : fg;
    std::vector<CheckReport> rs;
    const std::vector<std::string> lams = f.lambda ? split_list(*f.lambda) : std::vector<std::string>{"1/2"};
    for (const auto& l : lams) rs.push_back(verify_functional_inequality(fg, gg, parse_exact_value(l).convert_to<double>()));
    emit(reports_json(rs), out);
    return any_hard_failure(rs) ? kExitTheorem : 0;
}

// --- one-shot commands ------------------------------------------------------

template <class T>
int reduce_planar(const json& input, const std::string& lambda_s, const std::string& policy, std::uint64_t seed, const std::string& trace) {
    auto k = polytope_from_json<T>(input);
    if (k.dim() != 2) throw GeometryError(ErrorKind::invalid_argument, "reduce-planar needs a polygon");
    k = translate(k, -centroid(k));
    const T lam = value_as<T>(lambda_s);
    auto steps = reduce_to_triangle(k, lam, parse_policy(policy), seed);
    json js = json::array();
    bool ok = true;
    for (const auto& s : steps) {
        js.push_back(to_json(s));
        ok = ok && audit_step(s).ok();
    }
    const T final_value = steps.empty() ? planar_objective(k, lam) : steps.back().objective_after;
    auto check = verify_planar_gfr(k, lam);
    json out{{"lambda", scalar_traits<T>::format(lam)},
             {"mode", mode_name(is_exact_v<T> ? Mode::exact : Mode::floating)},
             {"policy", policy},
             {"initial", to_json(k)},
             {"initial_objective", scalar_traits<T>::format(planar_objective(k, lam))},
             {"final_objective", scalar_traits<T>::format(final_value)},
             {"simplex_bound", scalar_traits<T>::format(simplex_hull_ratio(2, lam).ratio * volume(k))},
             {"steps_ok", ok},
             {"steps", js},
             {"check", to_json(check)}};
    emit(out, trace);
    return ok && check.pass ? 0 : kExitTheorem;
}

template <class T>
int simplex_ratio_cmd(int n, const std::string& lambda_s) {
    std::cout << to_json(simplex_hull_ratio(n, value_as<T>(lambda_s))).dump(2) << '\n';
    return 0;
}

template <class T>
int mixed_volume_cmd(const std::vector<std::string>& inputs, std::optional<int> j, bool both) {
    std::vector<VPolytope<T>> bodies;
    for (const auto& p : inputs) bodies.push_back(polytope_from_json<T>(read_json_file(p)));
    json out;
    auto result_json = [](const MixedVolumeResult<T>& r) {
        json x{{"value", scalar_traits<T>::format(r.value)}, {"value_double", to_double(r.value)}, {"method", method_name(r.method)},
               {"bodies", r.bodies}};
        if (!r.multiplicities.empty()) x["multiplicities"] = r.multiplicities;
        if constexpr (!is_exact_v<T>) x["condition_estimate"] = r.condition_estimate;
        return x;
    };
    if (bodies.size() == 2 && j) {
        out["interpolation"] = result_json(mixed_volume_pair(bodies[0], bodies[1], *j));
        if (both || bodies[0].dim() <= 4) out["polarization"] = result_json(mixed_volume_pair_polarized(bodies[0], bodies[1], *j));
    } else if (bodies.size() == 1) {
        // the whole V(K[j], -K[n-j]) family and the difference-body check
        auto c = mixed_volume_coefficients(bodies[0], negate(bodies[0]));
        json vs = json::array();
        for (const auto& v : c.values) vs.push_back(scalar_traits<T>::format(v));
        out["V_K_minusK"] = vs;
        out["volume"] = scalar_traits<T>::format(volume(bodies[0]));
        out["difference_body"] = to_json(difference_body_check(bodies[0]));
        out["godbersen"] = reports_json(godbersen_ratios(bodies[0]));
    } else {
        out["polarization"] = result_json(mixed_volume_general(bodies));
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

template <class T>
int verify_pair(const std::string& what, const json& kj, const json& lj, const std::string& grid) {
    auto k = polytope_from_json<T>(kj);
    auto l = polytope_from_json<T>(lj);
    std::vector<CheckReport> rs;
    if (what == "strange") {
        rs.push_back(verify_strange(k, l));
    } else {
        for (const auto& x : split_list(grid)) {
            const T th = value_as<T>(x);
            if (what == "kl") {
                rs.push_back(verify_KL_inequality(k, l, th));
            } else {
                for (auto& r : verify_appendix_chain(k, l, th)) rs.push_back(r);
            }
        }
    }
    std::cout << reports_json(rs).dump(2) << '\n';
    return any_hard_failure(rs) ? kExitTheorem : 0;
}

Mode choose_mode(const std::string& flag, const json& input) {
    return flag.empty() ? polytope_mode(input) : parse_mode(flag);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"godbersen-kit: convex-geometry inequality checks"};
    app.require_subcommand(1);

    const std::vector<std::pair<ExperimentKind, std::string>> sweeps{
        {ExperimentKind::godbersen, "V(K[j],-K[n-j]) bounds on random bodies"},
        {ExperimentKind::gfr, "hull volume minimised over translations vs the simplex value"},
        {ExperimentKind::godbersen_via_gfr, "the finite lambda set linking the two conjectures"},
        {ExperimentKind::kl, "KL inequality and reflection hull bound"},
        {ExperimentKind::strange, "volume of K v -L against the polar-sum body"},
        {ExperimentKind::ckl, "section/projection and the chain through C(K,L)"},
        {ExperimentKind::functional, "lambda-difference functional inequality"},
        {ExperimentKind::planar, "vertex-removal reduction on random polygons"},
    };
    std::map<std::string, ExperimentFlags> flags;
    std::map<std::string, ExperimentKind> kinds;
    std::string functional_out;
    for (const auto& [kind, help] : sweeps) {
        std::string name = kind_name(kind);
        auto* sub = app.add_subcommand(name, help);
        auto& f = flags[name];
        kinds[name] = kind;
        add_experiment_flags(sub, f);
        if (kind == ExperimentKind::planar) sub->add_option("--max-polygon-vertices", f.max_polygon_vertices);
        if (kind == ExperimentKind::functional) {
            sub->add_option("--resolution", f.resolution, "grid resolution per axis");
            sub->add_option("--function", f.function, "one-shot: sharp-exponential, gaussian or indicator-simplex");
            sub->add_option("--g-function", f.g_function, "one-shot: second function (default: same as --function)");
            sub->add_option("--f-file", f.f_file, "one-shot: GridFunction JSON for f");
            sub->add_option("--g-file", f.g_file, "one-shot: GridFunction JSON for g");
            sub->add_option("--lambda", f.lambda, "one-shot: comma separated lambdas");
            sub->add_option("--report", functional_out, "one-shot: write reports here instead of stdout");
        }
    }

    std::string rp_input, rp_lambda = "1/2", rp_trace, rp_policy = "min-perturbation", rp_mode;
    std::uint64_t rp_seed = 0;
    auto* rp = app.add_subcommand("reduce-planar", "reduce a polygon to a triangle, logging every step");
    rp->add_option("--input", rp_input, "polygon JSON")->required();
    rp->add_option("--lambda", rp_lambda);
    rp->add_option("--trace", rp_trace, "write the step list here (default stdout)");
    rp->add_option("--policy", rp_policy, "min-perturbation, first or random");
    rp->add_option("--seed", rp_seed, "seed for --policy random");
    rp->add_option("--mode", rp_mode, "exact or float (default: from the input)");

    int sr_n = 2;
    std::string sr_lambda = "1/2", sr_mode = "exact";
    auto* sr = app.add_subcommand("simplex-ratio", "Vol((1-l)S v -lS)/Vol(S) for a centred simplex");
    sr->add_option("--n", sr_n)->required();
    sr->add_option("--lambda", sr_lambda)->required();
    sr->add_option("--mode", sr_mode);

    std::vector<std::string> mv_inputs;
    std::optional<int> mv_j;
    std::string mv_mode;
    bool mv_both = false;
    auto* mv = app.add_subcommand("mixed-volume", "mixed volumes of polytopes from JSON files");
    mv->add_option("--input", mv_inputs, "one file: the V(K[j],-K[n-j]) family; two with --j: V(K[j],T[n-j]); n files: V(K1..Kn)")
        ->required();
    mv->add_option("--j", mv_j);
    mv->add_option("--mode", mv_mode);
    mv->add_flag("--both", mv_both, "also run polarization for pairs");

    std::map<std::string, std::array<std::string, 4>> pair_args;  // K, L, grid, mode
    for (const auto& [name, what, help] : std::vector<std::array<std::string, 3>>{
             {"verify-kl", "kl", "KL inequality over a theta grid"},
             {"verify-strange", "strange", "K v -L against (K° + L°)°"},
             {"verify-ckl", "ckl", "the chain through C(K,L) over a theta grid"}}) {
        auto* sub = app.add_subcommand(name, help);
        auto& a = pair_args[what];
        a[2] = "1/4,1/2,3/4";
        sub->add_option("--k", a[0], "polytope JSON")->required();
        sub->add_option("--l", a[1], "polytope JSON")->required();
        if (what != "strange") sub->add_option("--theta-grid", a[2]);
        sub->add_option("--mode", a[3]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        for (const auto& [name, kind] : kinds) {
            if (!app.got_subcommand(name)) continue;
            const auto& f = flags[name];
            if (kind == ExperimentKind::functional && (f.function || f.f_file)) return run_functional_once(f, functional_out);
            return run_sweep(kind, f);
        }
        if (app.got_subcommand(rp)) {
            auto input = read_json_file(rp_input);
            return choose_mode(rp_mode, input) == Mode::exact ? reduce_planar<Rational>(input, rp_lambda, rp_policy, rp_seed, rp_trace)
                                                               : reduce_planar<double>(input, rp_lambda, rp_policy, rp_seed, rp_trace);
        }
        if (app.got_subcommand(sr))
            return parse_mode(sr_mode) == Mode::exact ? simplex_ratio_cmd<Rational>(sr_n, sr_lambda) : simplex_ratio_cmd<double>(sr_n, sr_lambda);
        if (app.got_subcommand(mv)) {
            Mode m = mv_mode.empty() ? polytope_mode(read_json_file(mv_inputs.front())) : parse_mode(mv_mode);
            return m == Mode::exact ? mixed_volume_cmd<Rational>(mv_inputs, mv_j, mv_both) : mixed_volume_cmd<double>(mv_inputs, mv_j, mv_both);
        }
        for (const auto& [what, a] : pair_args) {
            if (!app.got_subcommand("verify-" + what)) continue;
            auto kj = read_json_file(a[0]);
            auto lj = read_json_file(a[1]);
            return choose_mode(a[3], kj) == Mode::exact ? verify_pair<Rational>(what, kj, lj, a[2]) : verify_pair<double>(what, kj, lj, a[2]);
        }
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
