#pragma once

#include "floodml/dataset.hpp"
#include "floodml/matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace floodml {

/// Model inputs derived from a labeled dataset: Station, Year, twelve monthly
/// totals and optionally Annual, with the flood flag as the label.
struct FeatureTable {
    Matrix features;
    Labels labels;
    std::vector<std::string> column_names;
};

FeatureTable build_feature_table(const LabeledDataset& dataset, bool include_annual = true);

struct SplitDataset {
    Matrix train_x;
    Labels train_y;
    Matrix test_x;
    Labels test_y;
    std::vector<std::size_t> train_indices; // rows of the source table, in shuffled order
    std::vector<std::size_t> test_indices;
    std::vector<std::string> column_names;
    std::uint64_t seed = 0;
    double ratio = 0.8;
};

/// floor(ratio * n)
std::size_t train_size(std::size_t n, double ratio);

/// Seeded Fisher-Yates permutation of the rows; the first floor(ratio * n)
/// become the training set. Throws SplitError when n < 2 or ratio is not in (0, 1).
SplitDataset train_test_split(const FeatureTable& table, double ratio, std::uint64_t seed);

/// Two-column CSV `row_index,partition` in source-row order.
void write_split_indices_csv(std::ostream& out, const SplitDataset& split);

struct ScalerParams {
    std::vector<double> means;
    std::vector<double> stds; // population standard deviation
    std::vector<std::string> column_names;

    std::size_t size() const noexcept { return means.size(); }
    bool is_constant(std::size_t column) const { return stds.at(column) == 0.0; }
};

/// Per-column mean and population standard deviation. Columns named in
/// `exempt` get mean 0 and std 1 so transform leaves them untouched.
ScalerParams fit_scaler(const Matrix& train, std::vector<std::string> column_names = {},
                        const std::set<std::string>& exempt = {});

/// (x - mean) / std per cell; constant columns map to 0.
Matrix transform(const ScalerParams& scaler, const Matrix& matrix);

/// x * std + mean per cell.
Matrix inverse_transform(const ScalerParams& scaler, const Matrix& matrix);

/// CSV `column,mean,std` with round-trippable values.
void write_scaler_csv(std::ostream& out, const ScalerParams& scaler);
ScalerParams read_scaler_csv(std::istream& in);

} // namespace floodml
