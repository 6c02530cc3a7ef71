#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace floodml {

/// One row of summary.csv (`Model,Accuracy,Precision,Recall`).
struct SummaryRow {
    std::string model;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Accepts a summary.csv file or a run directory containing one.
std::vector<SummaryRow> load_summary(const std::filesystem::path& path);

struct RunComparison {
    std::string table;                 // side-by-side metrics, empty when no model is shared
    std::vector<std::string> warnings; // models present in only one run
};

/// Per-model deltas (B - A) for accuracy, precision and recall over the
/// models both runs share, with the better run flagged per cell.
RunComparison compare_runs(const std::vector<SummaryRow>& a, const std::vector<SummaryRow>& b);

} // namespace floodml
