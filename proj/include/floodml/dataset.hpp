#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace floodml {

inline constexpr std::size_t kDayColumns = 31;
inline constexpr std::size_t kMonths = 12;

/// Rainfall in millimetres for one day; std::nullopt is a missing reading.
using DayCell = std::optional<std::int64_t>;

struct DailyRainfallRecord {
    std::string station;
    int year = 0;
    int month = 1;
    std::array<DayCell, kDayColumns> days{};

    friend bool operator==(const DailyRainfallRecord&, const DailyRainfallRecord&) = default;
};

struct FloodRecord {
    std::string station;
    int year = 0;
    std::string flood; // "YES" or "NO"
};

struct MonthlyAggregate {
    std::string station;
    int year = 0;
    std::array<std::int64_t, kMonths> monthly{};
    std::int64_t annual = 0;

    friend bool operator==(const MonthlyAggregate&, const MonthlyAggregate&) = default;
};

/// A station-year with its flood label still in textual form.
struct MergedRow {
    MonthlyAggregate features;
    std::string flood;
};

struct FeatureRow {
    int station_id = 0;
    std::string station_name;
    int year = 0;
    std::array<std::int64_t, kMonths> monthly{};
    std::int64_t annual = 0;
    int flood = 0;

    friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

/// Bijection between station names and the consecutive codes 0..S-1.
class StationCodeMap {
public:
    StationCodeMap() = default;

    /// Assigns codes in lexicographic (byte-wise) order of the distinct names.
    static StationCodeMap from_names(std::vector<std::string> names);

    int code(std::string_view name) const;
    const std::string& name(int code) const;
    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    friend bool operator==(const StationCodeMap&, const StationCodeMap&) = default;

private:
    std::vector<std::string> names_; // sorted, index == code
};

struct LabeledDataset {
    std::vector<FeatureRow> rows; // ordered by (station_id, year)
    StationCodeMap stations;

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

struct ImputationResult {
    std::vector<DailyRainfallRecord> records;
    std::size_t replaced_cells = 0;
};

struct AggregationResult {
    std::vector<MonthlyAggregate> rows; // ordered by (station, year)
    std::vector<std::string> warnings;
};

const std::array<std::string_view, kMonths>& month_names();

/// Parses a rainfall CSV with header `Station,Year,Month,1,...,31`.
/// Empty, `NaN`, `nan` and `NA` cells are missing; short rows are padded
/// with missing cells. Throws ParseError naming the row and column.
std::vector<DailyRainfallRecord> parse_daily_rainfall(std::istream& in);

/// Parses a flood CSV with header `Station,Year,Flood`.
std::vector<FloodRecord> parse_flood_records(std::istream& in);

/// Replaces every missing day cell with zero.
ImputationResult impute_missing(std::vector<DailyRainfallRecord> records);

/// Sums days into monthly totals and months into an annual total per
/// station-year. Absent months count as zero and produce a warning.
/// Throws AggregationError on duplicate (station, year, month) or on a
/// record that still has missing cells.
AggregationResult aggregate_monthly(const std::vector<DailyRainfallRecord>& records);

/// Exact join on (station, year). Throws MergeError listing every unmatched key.
std::vector<MergedRow> merge_flood_labels(const std::vector<MonthlyAggregate>& features,
                                          const std::vector<FloodRecord>& floods);

/// Label-encodes stations and binary-encodes YES/NO floods.
LabeledDataset encode_labels(const std::vector<MergedRow>& rows);

/// Keeps rows with start_year <= year <= end_year; the code map is unchanged.
LabeledDataset filter_timeline(const LabeledDataset& dataset, int start_year, int end_year);

/// `Station,StationName,Year,January,...,December,Annual,Flood`
void write_processed_csv(std::ostream& out, const LabeledDataset& dataset);
LabeledDataset read_processed_csv(std::istream& in);

} // namespace floodml
