#pragma once

#include <stdexcept>
#include <string>

namespace godbersen {

enum class ErrorKind {
    degenerate_input,
    dimension_out_of_range,
    empty_intersection,
    empty_section,
    unbounded,
    origin_not_interior,
    origin_not_contained,
    not_centered,
    too_few_vertices,
    incompatible_grids,
    not_log_concave,
    invalid_argument,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::degenerate_input: return "DegenerateInput";
        case ErrorKind::dimension_out_of_range: return "DimensionOutOfRange";
        case ErrorKind::empty_intersection: return "EmptyIntersection";
        case ErrorKind::empty_section: return "EmptySection";
        case ErrorKind::unbounded: return "Unbounded";
        case ErrorKind::origin_not_interior: return "OriginNotInterior";
        case ErrorKind::origin_not_contained: return "OriginNotContained";
        case ErrorKind::not_centered: return "NotCentered";
        case ErrorKind::too_few_vertices: return "TooFewVertices";
        case ErrorKind::incompatible_grids: return "IncompatibleGrids";
        case ErrorKind::not_log_concave: return "NotLogConcave";
        case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline constexpr int kMaxDimension = 6;

inline void check_dimension(int d) {
    if (d < 1 || d > kMaxDimension)
        throw GeometryError(ErrorKind::dimension_out_of_range,
                            "dimension " + std::to_string(d) + " outside [1, 6]");
}

}  // namespace godbersen
