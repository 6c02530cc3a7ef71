#include "floodml/preprocess.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"
#include "floodml/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace floodml {

FeatureTable build_feature_table(const LabeledDataset& dataset, bool include_annual) {
    FeatureTable table;
    table.column_names = {"Station", "Year"};
    for (auto m : month_names()) table.column_names.emplace_back(m);
    if (include_annual) table.column_names.emplace_back("Annual");

    table.features = Matrix(dataset.rows.size(), table.column_names.size());
    table.labels.reserve(dataset.rows.size());
    for (std::size_t r = 0; r < dataset.rows.size(); ++r) {
        const auto& row = dataset.rows[r];
        auto out = table.features.row(r);
        out[0] = row.station_id;
        out[1] = row.year;
        for (std::size_t m = 0; m < kMonths; ++m) out[2 + m] = static_cast<double>(row.monthly[m]);
        if (include_annual) out[2 + kMonths] = static_cast<double>(row.annual);
        table.labels.push_back(row.flood);
    }
    return table;
}

std::size_t train_size(std::size_t n, double ratio) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

SplitDataset train_test_split(const FeatureTable& table, double ratio, std::uint64_t seed) {
    const std::size_t n = table.features.rows();
    if (n < 2) throw SplitError(fmt::format("need at least 2 rows to split, got {}", n));
    if (!(ratio > 0.0 && ratio < 1.0)) throw SplitError(fmt::format("split ratio {} not in (0, 1)", ratio));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(std::span<std::size_t>(order), rng);

    const std::size_t n_train = train_size(n, ratio);
    SplitDataset split;
    split.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    split.train_x = table.features.select_rows(split.train_indices);
    split.test_x = table.features.select_rows(split.test_indices);
    for (auto i : split.train_indices) split.train_y.push_back(table.labels[i]);
    for (auto i : split.test_indices) split.test_y.push_back(table.labels[i]);
    split.column_names = table.column_names;
    split.seed = seed;
    split.ratio = ratio;
    return split;
}

void write_split_indices_csv(std::ostream& out, const SplitDataset& split) {
    const std::size_t n = split.train_indices.size() + split.test_indices.size();
    std::vector<const char*> partition(n, "");
    for (auto i : split.train_indices) partition[i] = "train";
    for (auto i : split.test_indices) partition[i] = "test";
    out << "row_index,partition\n";
    for (std::size_t i = 0; i < n; ++i) out << i << ',' << partition[i] << '\n';
}

ScalerParams fit_scaler(const Matrix& train, std::vector<std::string> column_names,
                        const std::set<std::string>& exempt) {
    if (train.empty() || train.cols() == 0) throw ScalerError("cannot fit scaler on an empty matrix");
    if (column_names.empty()) {
        for (std::size_t c = 0; c < train.cols(); ++c) column_names.push_back(fmt::format("x{}", c));
    }
    if (column_names.size() != train.cols()) {
        throw ScalerError(fmt::format("{} column names for {} columns", column_names.size(), train.cols()));
    }
    for (const auto& name : exempt) {
        if (std::find(column_names.begin(), column_names.end(), name) == column_names.end()) {
            throw ScalerError(fmt::format("exempt column '{}' is not a feature", name));
        }
    }

    const auto n = static_cast<double>(train.rows());
    ScalerParams params;
    params.column_names = std::move(column_names);
    params.means.assign(train.cols(), 0.0);
    params.stds.assign(train.cols(), 0.0);
    for (std::size_t c = 0; c < train.cols(); ++c) {
        if (exempt.contains(params.column_names[c])) {
            params.stds[c] = 1.0;
            continue;
        }
        double sum = 0.0;
        for (std::size_t r = 0; r < train.rows(); ++r) sum += train(r, c);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t r = 0; r < train.rows(); ++r) {
            const double d = train(r, c) - mean;
            ss += d * d;
        }
        params.means[c] = mean;
        params.stds[c] = std::sqrt(ss / n);
    }
    return params;
}

namespace {

void check_width(const ScalerParams& scaler, const Matrix& matrix) {
    if (matrix.cols() != scaler.size()) {
        throw ScalerError(fmt::format("matrix has {} columns, scaler has {}", matrix.cols(), scaler.size()));
    }
}

} // namespace

Matrix transform(const ScalerParams& scaler, const Matrix& matrix) {
    check_width(scaler, matrix);
    Matrix out(matrix.rows(), matrix.cols());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            const double sd = scaler.stds[c];
            out(r, c) = sd == 0.0 ? 0.0 : (matrix(r, c) - scaler.means[c]) / sd;
        }
    }
    return out;
}

Matrix inverse_transform(const ScalerParams& scaler, const Matrix& matrix) {
    check_width(scaler, matrix);
    Matrix out(matrix.rows(), matrix.cols());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            out(r, c) = matrix(r, c) * scaler.stds[c] + scaler.means[c];
        }
    }
    return out;
}

void write_scaler_csv(std::ostream& out, const ScalerParams& scaler) {
    out << "column,mean,std\n";
    for (std::size_t c = 0; c < scaler.size(); ++c) {
        out << csv::escape(scaler.column_names[c]) << ',' << fmt::format("{:.17g}", scaler.means[c]) << ','
            << fmt::format("{:.17g}", scaler.stds[c]) << '\n';
    }
}

ScalerParams read_scaler_csv(std::istream& in) {
    std::string line;
    if (!csv::read_line(in, line) || line != "column,mean,std") {
        throw ParseError("scaler csv: expected header 'column,mean,std'");
    }
    ScalerParams params;
    std::size_t row = 0;
    while (csv::read_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = csv::split_line(line);
        const auto mean = cells.size() == 3 ? csv::parse_double(cells[1]) : std::nullopt;
        const auto sd = cells.size() == 3 ? csv::parse_double(cells[2]) : std::nullopt;
        if (!mean || !sd || *sd < 0.0) throw ParseError(fmt::format("scaler csv: malformed row {}", row));
        params.column_names.push_back(cells[0]);
        params.means.push_back(*mean);
        params.stds.push_back(*sd);
    }
    return params;
}

} // namespace floodml
