#pragma once

#include "floodml/error.hpp"
#include "floodml/matrix.hpp"

#include <cmath>
#include <span>

#include <fmt/format.h>

namespace floodml::detail {

inline void check_training_data(const Matrix& x, std::span<const int> y, std::string_view model) {
    if (x.empty()) throw FitError(fmt::format("{}: empty training matrix", model));
    if (x.rows() != y.size()) {
        throw DimensionError(fmt::format("{}: {} rows but {} labels", model, x.rows(), y.size()));
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1) {
            throw FitError(fmt::format("{}: label {} at row {} is not binary", model, y[i], i));
        }
    }
    for (double v : x.values()) {
        if (!std::isfinite(v)) throw FitError(fmt::format("{}: non-finite feature value", model));
    }
}

inline void check_dimension(std::size_t expected, std::size_t actual, std::string_view what) {
    if (expected != actual) {
        throw DimensionError(fmt::format("{}: expected dimension {}, got {}", what, expected, actual));
    }
}

} // namespace floodml::detail
