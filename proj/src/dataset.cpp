#include "floodml/dataset.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <fmt/format.h>

namespace floodml {

namespace {

bool is_missing_token(std::string_view token) {
    token = csv::trim(token);
    return token.empty() || token == "NaN" || token == "nan" || token == "NA";
}

std::vector<std::string> read_header(std::istream& in, std::string_view what) {
    std::string line;
    // Leading blank lines are tolerated; anything else must be the header.
    while (csv::read_line(in, line)) {
        if (csv::trim(line).empty()) continue;
        auto header = csv::split_line(line);
        for (auto& h : header) h = std::string(csv::trim(h));
        return header;
    }
    throw ParseError(fmt::format("{}: missing header row", what));
}

void expect_column(const std::vector<std::string>& header, std::size_t index,
                   std::string_view name, std::string_view what) {
    if (index >= header.size() || header[index] != name) {
        throw ParseError(fmt::format("{}: header column {} must be '{}'", what, index + 1, name));
    }
}

std::string required_text(const std::vector<std::string>& cells, std::size_t index,
                          std::string_view column, std::size_t row) {
    if (index >= cells.size() || csv::trim(cells[index]).empty()) {
        throw ParseError(fmt::format("row {}: missing value in column '{}'", row, column));
    }
    return std::string(csv::trim(cells[index]));
}

int required_int(const std::vector<std::string>& cells, std::size_t index,
                 std::string_view column, std::size_t row) {
    const std::string text = required_text(cells, index, column, row);
    const auto value = csv::parse_int(text);
    if (!value || *value < std::numeric_limits<int>::min() || *value > std::numeric_limits<int>::max()) {
        throw ParseError(fmt::format("row {}: column '{}' is not an integer: '{}'", row, column, text));
    }
    return static_cast<int>(*value);
}

// Rainfall is integral in the source data; "12.0" is accepted, "12.5" is not.
std::int64_t parse_rainfall(std::string_view token, std::size_t row, std::string_view column) {
    if (const auto v = csv::parse_int(token)) {
        if (*v < 0) {
            throw ParseError(fmt::format("row {}: column '{}' has negative rainfall {}", row, column, *v));
        }
        return *v;
    }
    if (const auto d = csv::parse_double(token); d && std::isfinite(*d) && *d == std::floor(*d)) {
        if (*d < 0) {
            throw ParseError(fmt::format("row {}: column '{}' has negative rainfall {}", row, column, *d));
        }
        return static_cast<std::int64_t>(*d);
    }
    throw ParseError(fmt::format("row {}: column '{}' has malformed rainfall value '{}'", row, column,
                                 csv::trim(token)));
}

using StationYear = std::pair<std::string, int>;

std::string format_key(const StationYear& key) {
    return fmt::format("({}, {})", key.first, key.second);
}

} // namespace

const std::array<std::string_view, kMonths>& month_names() {
    static constexpr std::array<std::string_view, kMonths> names{
        "January", "February", "March",     "April",   "May",      "June",
        "July",    "August",   "September", "October", "November", "December"};
    return names;
}

StationCodeMap StationCodeMap::from_names(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    StationCodeMap map;
    map.names_ = std::move(names);
    return map;
}

int StationCodeMap::code(std::string_view name) const {
    const auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) {
        throw EncodingError(fmt::format("unknown station '{}'", name));
    }
    return static_cast<int>(it - names_.begin());
}

const std::string& StationCodeMap::name(int code) const {
    if (code < 0 || static_cast<std::size_t>(code) >= names_.size()) {
        throw EncodingError(fmt::format("station code {} out of range [0, {})", code, names_.size()));
    }
    return names_[static_cast<std::size_t>(code)];
}

std::vector<DailyRainfallRecord> parse_daily_rainfall(std::istream& in) {
    const auto header = read_header(in, "rainfall csv");
    expect_column(header, 0, "Station", "rainfall csv");
    expect_column(header, 1, "Year", "rainfall csv");
    expect_column(header, 2, "Month", "rainfall csv");
    if (header.size() > 3 + kDayColumns) {
        throw ParseError(fmt::format("rainfall csv: header has {} day columns, at most {} allowed",
                                     header.size() - 3, kDayColumns));
    }
    for (std::size_t d = 3; d < header.size(); ++d) {
        expect_column(header, d, std::to_string(d - 2), "rainfall csv");
    }

    std::vector<DailyRainfallRecord> records;
    std::string line;
    std::size_t row = 0;
    while (csv::read_line(in, line)) {
        ++row;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_line(line);
        if (cells.size() > 3 + kDayColumns) {
            throw ParseError(fmt::format("row {}: {} cells, at most {} allowed", row, cells.size(),
                                         3 + kDayColumns));
        }
        DailyRainfallRecord rec;
        rec.station = required_text(cells, 0, "Station", row);
        rec.year = required_int(cells, 1, "Year", row);
        rec.month = required_int(cells, 2, "Month", row);
        if (rec.month < 1 || rec.month > 12) {
            throw ParseError(fmt::format("row {}: column 'Month' out of range 1-12: {}", row, rec.month));
        }
        for (std::size_t d = 0; d < kDayColumns; ++d) {
            const std::size_t cell = d + 3;
            if (cell >= cells.size() || is_missing_token(cells[cell])) continue;
            rec.days[d] = parse_rainfall(cells[cell], row, std::to_string(d + 1));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<FloodRecord> parse_flood_records(std::istream& in) {
    const auto header = read_header(in, "flood csv");
    expect_column(header, 0, "Station", "flood csv");
    expect_column(header, 1, "Year", "flood csv");
    expect_column(header, 2, "Flood", "flood csv");

    std::vector<FloodRecord> records;
    std::string line;
    std::size_t row = 0;
    while (csv::read_line(in, line)) {
        ++row;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_line(line);
        FloodRecord rec;
        rec.station = required_text(cells, 0, "Station", row);
        rec.year = required_int(cells, 1, "Year", row);
        rec.flood = required_text(cells, 2, "Flood", row);
        if (rec.flood != "YES" && rec.flood != "NO") {
            throw ParseError(fmt::format("row {}: column 'Flood' must be YES or NO, got '{}'", row, rec.flood));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

ImputationResult impute_missing(std::vector<DailyRainfallRecord> records) {
    ImputationResult result;
    for (auto& rec : records) {
        for (auto& day : rec.days) {
            if (!day) {
                day = 0;
                ++result.replaced_cells;
            }
        }
    }
    result.records = std::move(records);
    return result;
}

AggregationResult aggregate_monthly(const std::vector<DailyRainfallRecord>& records) {
    struct Group {
        std::array<std::int64_t, kMonths> monthly{};
        std::array<bool, kMonths> seen{};
    };
    std::map<StationYear, Group> groups;

    for (const auto& rec : records) {
        auto& group = groups[{rec.station, rec.year}];
        const auto m = static_cast<std::size_t>(rec.month - 1);
        if (group.seen[m]) {
            throw AggregationError(fmt::format("duplicate record for ({}, {}, {})", rec.station, rec.year,
                                               rec.month));
        }
        group.seen[m] = true;
        std::int64_t total = 0;
        for (std::size_t d = 0; d < kDayColumns; ++d) {
            if (!rec.days[d]) {
                throw AggregationError(fmt::format("({}, {}, {}) day {} is missing; impute first",
                                                   rec.station, rec.year, rec.month, d + 1));
            }
            total += *rec.days[d];
        }
        group.monthly[m] = total;
    }

    AggregationResult result;
    result.rows.reserve(groups.size());
    for (const auto& [key, group] : groups) {
        MonthlyAggregate agg;
        agg.station = key.first;
        agg.year = key.second;
        agg.monthly = group.monthly;
        for (auto v : group.monthly) agg.annual += v;

        std::vector<std::string> absent;
        for (std::size_t m = 0; m < kMonths; ++m) {
            if (!group.seen[m]) absent.emplace_back(month_names()[m]);
        }
        if (!absent.empty()) {
            result.warnings.push_back(fmt::format("{}: {} month(s) absent, treated as zero: {}",
                                                  format_key(key), absent.size(), fmt::join(absent, " ")));
        }
        result.rows.push_back(std::move(agg));
    }
    return result;
}

std::vector<MergedRow> merge_flood_labels(const std::vector<MonthlyAggregate>& features,
                                          const std::vector<FloodRecord>& floods) {
    std::map<StationYear, const FloodRecord*> by_key;
    for (const auto& f : floods) {
        if (!by_key.emplace(StationYear{f.station, f.year}, &f).second) {
            throw MergeError(fmt::format("duplicate flood record for {}", format_key({f.station, f.year})));
        }
    }

    std::vector<MergedRow> merged;
    merged.reserve(features.size());
    std::vector<std::string> unmatched_features;
    std::set<StationYear> used;
    for (const auto& row : features) {
        const StationYear key{row.station, row.year};
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            unmatched_features.push_back(format_key(key));
            continue;
        }
        if (!used.insert(key).second) {
            throw MergeError(fmt::format("duplicate feature row for {}", format_key(key)));
        }
        merged.push_back({row, it->second->flood});
    }

    std::vector<std::string> unmatched_floods;
    for (const auto& [key, rec] : by_key) {
        if (!used.contains(key)) unmatched_floods.push_back(format_key(key));
    }

    if (!unmatched_features.empty() || !unmatched_floods.empty()) {
        std::string message = "unmatched keys:";
        if (!unmatched_features.empty()) {
            message += fmt::format(" rainfall without flood label {}", fmt::join(unmatched_features, ", "));
        }
        if (!unmatched_floods.empty()) {
            if (!unmatched_features.empty()) message += ";";
            message += fmt::format(" flood label without rainfall {}", fmt::join(unmatched_floods, ", "));
        }
        throw MergeError(message);
    }
    return merged;
}

LabeledDataset encode_labels(const std::vector<MergedRow>& rows) {
    std::vector<std::string> names;
    names.reserve(rows.size());
    for (const auto& r : rows) names.push_back(r.features.station);

    LabeledDataset out;
    out.stations = StationCodeMap::from_names(std::move(names));
    out.rows.reserve(rows.size());
    for (const auto& r : rows) {
        FeatureRow fr;
        if (r.flood == "YES") {
            fr.flood = 1;
        } else if (r.flood == "NO") {
            fr.flood = 0;
        } else {
            throw EncodingError(fmt::format("flood label for ({}, {}) must be YES or NO, got '{}'",
                                            r.features.station, r.features.year, r.flood));
        }
        fr.station_id = out.stations.code(r.features.station);
        fr.station_name = r.features.station;
        fr.year = r.features.year;
        fr.monthly = r.features.monthly;
        fr.annual = r.features.annual;
        out.rows.push_back(std::move(fr));
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
        return std::tie(a.station_id, a.year) < std::tie(b.station_id, b.year);
    });
    return out;
}

LabeledDataset filter_timeline(const LabeledDataset& dataset, int start_year, int end_year) {
    if (start_year > end_year) {
        throw ConfigError(fmt::format("timeline start {} is after end {}", start_year, end_year));
    }
    LabeledDataset out;
    out.stations = dataset.stations;
    for (const auto& row : dataset.rows) {
        if (row.year >= start_year && row.year <= end_year) out.rows.push_back(row);
    }
    if (out.rows.empty()) {
        throw Error(fmt::format("timeline {}-{} selects no rows", start_year, end_year));
    }
    return out;
}

void write_processed_csv(std::ostream& out, const LabeledDataset& dataset) {
    out << "Station,StationName,Year";
    for (auto m : month_names()) out << ',' << m;
    out << ",Annual,Flood\n";
    for (const auto& r : dataset.rows) {
        out << r.station_id << ',' << csv::escape(r.station_name) << ',' << r.year;
        for (auto v : r.monthly) out << ',' << v;
        out << ',' << r.annual << ',' << r.flood << '\n';
    }
}

LabeledDataset read_processed_csv(std::istream& in) {
    const auto header = read_header(in, "processed csv");
    expect_column(header, 0, "Station", "processed csv");
    expect_column(header, 1, "StationName", "processed csv");
    expect_column(header, 2, "Year", "processed csv");
    for (std::size_t m = 0; m < kMonths; ++m) {
        expect_column(header, 3 + m, month_names()[m], "processed csv");
    }
    expect_column(header, 15, "Annual", "processed csv");
    expect_column(header, 16, "Flood", "processed csv");

    LabeledDataset out;
    std::map<int, std::string> codes;
    std::string line;
    std::size_t row = 0;
    while (csv::read_line(in, line)) {
        ++row;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_line(line);
        if (cells.size() != 17) {
            throw ParseError(fmt::format("row {}: expected 17 cells, got {}", row, cells.size()));
        }
        FeatureRow fr;
        fr.station_id = required_int(cells, 0, "Station", row);
        fr.station_name = required_text(cells, 1, "StationName", row);
        fr.year = required_int(cells, 2, "Year", row);
        std::int64_t sum = 0;
        for (std::size_t m = 0; m < kMonths; ++m) {
            fr.monthly[m] = parse_rainfall(cells[3 + m], row, month_names()[m]);
            sum += fr.monthly[m];
        }
        fr.annual = parse_rainfall(cells[15], row, "Annual");
        if (fr.annual != sum) {
            throw ParseError(fmt::format("row {}: Annual {} differs from monthly sum {}", row, fr.annual, sum));
        }
        fr.flood = required_int(cells, 16, "Flood", row);
        if (fr.flood != 0 && fr.flood != 1) {
            throw ParseError(fmt::format("row {}: column 'Flood' must be 0 or 1", row));
        }
        const auto [it, inserted] = codes.emplace(fr.station_id, fr.station_name);
        if (!inserted && it->second != fr.station_name) {
            throw ParseError(fmt::format("row {}: station code {} maps to both '{}' and '{}'", row,
                                         fr.station_id, it->second, fr.station_name));
        }
        out.rows.push_back(std::move(fr));
    }

    std::vector<std::string> names;
    for (const auto& [code, name] : codes) names.push_back(name);
    out.stations = StationCodeMap::from_names(names);
    if (out.stations.size() != codes.size()) {
        throw ParseError("processed csv: a station name appears under more than one code");
    }
    for (const auto& [code, name] : codes) {
        if (out.stations.code(name) != code) {
            throw ParseError(fmt::format("processed csv: station '{}' has code {}, expected {}", name, code,
                                         out.stations.code(name)));
        }
    }
    return out;
}

} // namespace floodml
