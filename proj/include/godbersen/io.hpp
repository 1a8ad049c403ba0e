#pragma once

// Polytope interchange format:
//   {"dim": d, "mode": "exact"|"float", "vertices": [[...], ...]}
// Exact coordinates are "p/q" strings (integers allowed), float coordinates
// are JSON numbers.

#include "godbersen/check_report.hpp"
#include "godbersen/polytope.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace godbersen {

template <class T>
json to_json(const VPolytope<T>& p) {
    json j;
    j["dim"] = p.dim();
    j["mode"] = mode_name(scalar_traits<T>::mode);
    json verts = json::array();
    for (const auto& v : p.vertices()) {
        json row = json::array();
        for (const auto& x : v) {
            if constexpr (is_exact_v<T>)
                row.push_back(x.str());
            else
                row.push_back(x);
        }
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    return j;
}

template <class T>
T coordinate_from_json(const json& x) {
    if constexpr (is_exact_v<T>) {
        if (x.is_string()) return parse_rational(x.get<std::string>());
        if (x.is_number_integer()) return Rational(x.get<long long>());
        throw std::invalid_argument("exact coordinates must be fraction strings");
    } else {
        if (x.is_number()) return x.get<double>();
        if (x.is_string()) return scalar_traits<double>::parse(x.get<std::string>());
        throw std::invalid_argument("float coordinates must be numbers");
    }
}

/// Raw vertex list from the interchange format, without hulling.
template <class T>
std::vector<Point<T>> points_from_json(const json& j) {
    const int d = j.at("dim").get<int>();
    std::vector<Point<T>> pts;
    for (const auto& row : j.at("vertices")) {
        if (static_cast<int>(row.size()) != d) throw std::invalid_argument("vertex length differs from dim");
        Point<T> p;
        for (const auto& x : row) p.push_back(coordinate_from_json<T>(x));
        pts.push_back(std::move(p));
    }
    return pts;
}

template <class T>
VPolytope<T> polytope_from_json(const json& j) {
    return convex_hull(points_from_json<T>(j));
}

inline Mode polytope_mode(const json& j) { return parse_mode(j.value("mode", "exact")); }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace godbersen
