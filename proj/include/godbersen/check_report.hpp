#pragma once

// One inequality instance: lhs <= rhs, with tolerance and provenance.
// Shared by every module and serialised as a single JSON object.

#include "godbersen/scalar.hpp"

#include <json.hpp>

#include <string>

namespace godbersen {

using json = nlohmann::ordered_json;

/// How a failed check is treated by the experiment runner.
enum class CheckKind {
    theorem,     // proved inequality; a failure is a bug
    conjecture,  // open statement; a failure is a violation candidate
    identity,    // closed-form equality
};

inline const char* check_kind_name(CheckKind k) {
    switch (k) {
        case CheckKind::theorem: return "theorem";
        case CheckKind::conjecture: return "conjecture";
        case CheckKind::identity: return "identity";
    }
    return "?";
}

struct CheckReport {
    std::string name;
    CheckKind kind = CheckKind::theorem;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs, 0 when rhs == 0
    double tol = 0.0;
    bool pass = false;
    bool equality = false;  // exact equality (exact mode) or |lhs-rhs| <= tol
    json meta = json::object();
};

/// Builds a report for lhs <= rhs (or lhs == rhs for identities).
template <class T>
CheckReport make_report(std::string name, CheckKind kind, const T& lhs, const T& rhs, double tol = 0.0) {
    CheckReport r;
    r.name = std::move(name);
    r.kind = kind;
    r.lhs = to_double(lhs);
    r.rhs = to_double(rhs);
    r.ratio = r.rhs != 0.0 ? r.lhs / r.rhs : 0.0;
    r.tol = tol;
    if constexpr (is_exact_v<T>) {
        r.equality = lhs == rhs;
        r.pass = kind == CheckKind::identity ? r.equality : lhs <= rhs;
        r.meta["mode"] = "exact";
        r.meta["lhs_exact"] = lhs.str();
        r.meta["rhs_exact"] = rhs.str();
    } else {
        r.equality = std::fabs(lhs - rhs) <= tol;
        r.pass = kind == CheckKind::identity ? r.equality : lhs <= rhs + tol;
        r.meta["mode"] = "float";
    }
    return r;
}

inline json to_json(const CheckReport& r) {
    json j;
    j["name"] = r.name;
    j["kind"] = check_kind_name(r.kind);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    j["equality"] = r.equality;
    j["meta"] = r.meta;
    return j;
}

inline CheckReport check_report_from_json(const json& j) {
    CheckReport r;
    r.name = j.value("name", "");
    auto kind = j.value("kind", "theorem");
    r.kind = kind == "conjecture" ? CheckKind::conjecture : kind == "identity" ? CheckKind::identity : CheckKind::theorem;
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.tol = j.at("tol").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.equality = j.value("equality", false);
    if (j.contains("meta")) r.meta = j.at("meta");
    return r;
}

}  // namespace godbersen
