#include "floodml/compare.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace floodml {

namespace {

std::string metric(double v) {
    return std::isnan(v) ? "NaN" : fmt::format("{:.4f}", v);
}

} // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "Model,Accuracy,Precision,Recall\n";
    for (const auto& r : rows) {
        out << csv::escape(r.model) << ',' << metric(r.accuracy) << ',' << metric(r.precision) << ','
            << metric(r.recall) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::string line;
    if (!csv::read_line(in, line) || line != "Model,Accuracy,Precision,Recall") {
        throw ParseError("summary csv: expected header 'Model,Accuracy,Precision,Recall'");
    }
    std::vector<SummaryRow> rows;
    std::size_t row = 0;
    while (csv::read_line(in, line)) {
        ++row;
        if (csv::trim(line).empty()) continue;
        const auto cells = csv::split_line(line);
        if (cells.size() != 4) throw ParseError(fmt::format("summary csv row {}: expected 4 cells", row));
        SummaryRow r;
        r.model = cells[0];
        double* targets[3] = {&r.accuracy, &r.precision, &r.recall};
        for (std::size_t i = 0; i < 3; ++i) {
            const auto v = csv::parse_double(cells[i + 1]);
            if (!v) throw ParseError(fmt::format("summary csv row {}: bad number '{}'", row, cells[i + 1]));
            *targets[i] = *v;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> load_summary(const std::filesystem::path& path) {
    const auto file = std::filesystem::is_directory(path) ? path / "summary.csv" : path;
    std::ifstream in(file);
    if (!in) throw Error(fmt::format("cannot open summary '{}'", file.string()));
    return read_summary_csv(in);
}

RunComparison compare_runs(const std::vector<SummaryRow>& a, const std::vector<SummaryRow>& b) {
    RunComparison out;
    auto find = [](const std::vector<SummaryRow>& rows, const std::string& model) -> const SummaryRow* {
        for (const auto& r : rows) {
            if (r.model == model) return &r;
        }
        return nullptr;
    };
    for (const auto& r : a) {
        if (!find(b, r.model)) out.warnings.push_back(fmt::format("model '{}' only in run A", r.model));
    }
    for (const auto& r : b) {
        if (!find(a, r.model)) out.warnings.push_back(fmt::format("model '{}' only in run B", r.model));
    }

    std::string body;
    for (const auto& ra : a) {
        const auto* rb = find(b, ra.model);
        if (!rb) continue;
        const std::pair<const char*, std::pair<double, double>> cells[3] = {
            {"Accuracy", {ra.accuracy, rb->accuracy}},
            {"Precision", {ra.precision, rb->precision}},
            {"Recall", {ra.recall, rb->recall}},
        };
        for (const auto& [name, values] : cells) {
            const auto [va, vb] = values;
            // Deltas are taken at the 4-decimal resolution of summary.csv.
            const double delta = std::round((vb - va) * 1e4) / 1e4;
            std::string better = "=";
            if (std::isnan(delta)) better = "?";
            else if (delta > 0.0) better = "B";
            else if (delta < 0.0) better = "A";
            const std::string delta_text = std::isnan(delta) ? "NaN" : fmt::format("{:+.4f}", delta == 0.0 ? 0.0 : delta);
            body += fmt::format("{:<34} {:<9} {:>8} {:>8} {:>8}  {}\n", ra.model, name, metric(va), metric(vb),
                                delta_text, better);
        }
    }
    if (!body.empty()) {
        out.table = fmt::format("{:<34} {:<9} {:>8} {:>8} {:>8}  {}\n", "Model", "Metric", "Run A", "Run B", "Delta",
                                "Better") +
                    body;
    }
    return out;
}

} // namespace floodml
