#pragma once

#include "floodml/config.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace floodml {

/// Parameters of the synthetic rainfall/flood generator.
struct SyntheticSpec {
    int stations = 34;
    int start_year = 2011;
    int end_year = 2020;
    std::string station_prefix = "Station";
    /// Expected monthly rainfall (mm) of an average station-year.
    std::array<double, 12> monthly_mean{8, 25, 55, 130, 270, 440, 530, 430, 330, 170, 35, 10};
    double station_spread = 0.25; // sd of the per-station multiplier
    double year_spread = 0.15;    // sd of the per-station-year multiplier
    /// Flood iff annual + N(0, flood_noise) > threshold; nullopt uses the
    /// expected annual total, sum(monthly_mean).
    std::optional<double> flood_threshold;
    double flood_noise = 0.0;
    double missing_rate = 0.0; // probability that an in-month day cell is NaN

    void validate() const;
    double threshold() const;
};

SyntheticSpec parse_synthetic_spec(const KeyValues& values);

struct SyntheticData {
    std::string rainfall_csv;
    std::string flood_csv;
};

/// Rainfall rows carry only the calendar days of each month (the parser pads
/// the rest); floods follow the annual-threshold rule applied to the rainfall
/// that survives zero-imputation. Deterministic per seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

int days_in_month(int year, int month);

} // namespace floodml
