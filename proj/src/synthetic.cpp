#include "floodml/synthetic.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"
#include "floodml/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace floodml {

namespace {

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

} // namespace

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return days.at(static_cast<std::size_t>(month - 1));
}

void SyntheticSpec::validate() const {
    if (stations < 1) throw ConfigError("synthetic spec: stations must be >= 1");
    if (start_year > end_year) throw ConfigError("synthetic spec: start_year is after end_year");
    if (station_prefix.empty() || station_prefix.find_first_of(",\"\n") != std::string::npos) {
        throw ConfigError("synthetic spec: station_prefix must be non-empty plain text");
    }
    for (double m : monthly_mean) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("synthetic spec: monthly_mean must be >= 0");
    }
    if (!(station_spread >= 0.0) || !(year_spread >= 0.0) || !(flood_noise >= 0.0)) {
        throw ConfigError("synthetic spec: spreads and noise must be >= 0");
    }
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
        throw ConfigError("synthetic spec: missing_rate must lie in [0, 1)");
    }
}

double SyntheticSpec::threshold() const {
    return flood_threshold.value_or(std::accumulate(monthly_mean.begin(), monthly_mean.end(), 0.0));
}

SyntheticSpec parse_synthetic_spec(const KeyValues& values) {
    SyntheticSpec spec;
    auto num = [](const std::string& key, const std::string& v) {
        const auto d = csv::parse_double(v);
        if (!d) throw ConfigError(fmt::format("synthetic spec: {} = '{}' is not a number", key, v));
        return *d;
    };
    auto integer = [](const std::string& key, const std::string& v) {
        const auto i = csv::parse_int(v);
        if (!i) throw ConfigError(fmt::format("synthetic spec: {} = '{}' is not an integer", key, v));
        return static_cast<int>(*i);
    };
    for (const auto& [key, value] : values) {
        if (key == "stations") {
            spec.stations = integer(key, value);
        } else if (key == "start_year") {
            spec.start_year = integer(key, value);
        } else if (key == "end_year") {
            spec.end_year = integer(key, value);
        } else if (key == "station_prefix") {
            spec.station_prefix = value;
        } else if (key == "monthly_mean") {
            const auto items = csv::split_line(value);
            if (items.size() != 12) throw ConfigError("synthetic spec: monthly_mean needs 12 values");
            for (std::size_t m = 0; m < 12; ++m) spec.monthly_mean[m] = num(key, items[m]);
        } else if (key == "station_spread") {
            spec.station_spread = num(key, value);
        } else if (key == "year_spread") {
            spec.year_spread = num(key, value);
        } else if (key == "flood_threshold") {
            if (value == "auto") spec.flood_threshold.reset();
            else spec.flood_threshold = num(key, value);
        } else if (key == "flood_noise") {
            spec.flood_noise = num(key, value);
        } else if (key == "missing_rate") {
            spec.missing_rate = num(key, value);
        } else {
            throw ConfigError(fmt::format("synthetic spec: unknown key '{}'", key));
        }
    }
    spec.validate();
    return spec;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    SyntheticData out;
    out.rainfall_csv = "Station,Year,Month";
    for (int d = 1; d <= 31; ++d) out.rainfall_csv += fmt::format(",{}", d);
    out.rainfall_csv += '\n';
    out.flood_csv = "Station,Year,Flood\n";

    const int width = static_cast<int>(std::to_string(spec.stations).size());
    const double threshold = spec.threshold();
    for (int s = 0; s < spec.stations; ++s) {
        const auto name = fmt::format("{}{:0{}}", spec.station_prefix, s + 1, width);
        const double station_scale = std::max(0.2, rng.normal(1.0, spec.station_spread));
        for (int year = spec.start_year; year <= spec.end_year; ++year) {
            const double year_scale = std::max(0.2, rng.normal(1.0, spec.year_spread));
            std::int64_t annual = 0;
            for (int month = 1; month <= 12; ++month) {
                const int days = days_in_month(year, month);
                const double mean = spec.monthly_mean[static_cast<std::size_t>(month - 1)] * station_scale * year_scale;
                const double wet_probability = std::min(0.9, 0.1 + mean / 600.0);
                const double wet_day_mean = mean / (days * wet_probability);
                out.rainfall_csv += fmt::format("{},{},{}", name, year, month);
                for (int d = 0; d < days; ++d) {
                    std::int64_t amount = 0;
                    if (rng.uniform() < wet_probability) {
                        amount = static_cast<std::int64_t>(std::llround(rng.exponential(wet_day_mean)));
                    }
                    if (spec.missing_rate > 0.0 && rng.uniform() < spec.missing_rate) {
                        out.rainfall_csv += ",NaN";
                    } else {
                        out.rainfall_csv += fmt::format(",{}", amount);
                        annual += amount;
                    }
                }
                out.rainfall_csv += '\n';
            }
            const double noise = spec.flood_noise > 0.0 ? rng.normal(0.0, spec.flood_noise) : 0.0;
            const bool flood = static_cast<double>(annual) + noise > threshold;
            out.flood_csv += fmt::format("{},{},{}\n", name, year, flood ? "YES" : "NO");
        }
    }
    return out;
}

} // namespace floodml
