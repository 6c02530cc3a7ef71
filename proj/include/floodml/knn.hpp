#pragma once

#include "floodml/matrix.hpp"

#include <span>

namespace floodml {

/// sqrt(sum_i (x_i - y_i)^2). Throws DimensionError on unequal lengths.
double euclidean_distance(std::span<const double> x, std::span<const double> y);

struct KnnConfig {
    int k = 5;
};

struct KnnPrediction {
    int label = 0;
    double score = 0.0; // fraction of the k neighbours labelled 1
};

class KnnModel {
public:
    KnnModel() = default;

    /// Stores the training set. Requires 1 <= k <= rows.
    static KnnModel fit(const Matrix& x, std::span<const int> y, const KnnConfig& config = {});

    /// Majority vote of the k nearest rows. Equal distances are ordered by
    /// training-row index; a split vote goes to the class whose neighbours
    /// have the smaller summed distance, then to class 0.
    KnnPrediction predict(std::span<const double> x) const;

    int k() const noexcept { return k_; }
    const Matrix& train_x() const noexcept { return x_; }
    const Labels& train_y() const noexcept { return y_; }

private:
    Matrix x_;
    Labels y_;
    int k_ = 5;
};

} // namespace floodml
