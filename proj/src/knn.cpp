#include "floodml/knn.hpp"

#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace floodml {

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    detail::check_dimension(x.size(), y.size(), "euclidean_distance");
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

KnnModel KnnModel::fit(const Matrix& x, std::span<const int> y, const KnnConfig& config) {
    detail::check_training_data(x, y, "knn");
    if (config.k < 1 || static_cast<std::size_t>(config.k) > x.rows()) {
        throw FitError(fmt::format("knn: k = {} must lie in [1, {}]", config.k, x.rows()));
    }
    KnnModel model;
    model.x_ = x;
    model.y_.assign(y.begin(), y.end());
    model.k_ = config.k;
    return model;
}

KnnPrediction KnnModel::predict(std::span<const double> x) const {
    if (x_.empty()) throw FitError("knn: model is not fitted");
    detail::check_dimension(x_.cols(), x.size(), "knn predict");

    std::vector<std::pair<double, std::size_t>> by_distance(x_.rows());
    for (std::size_t i = 0; i < x_.rows(); ++i) by_distance[i] = {euclidean_distance(x_.row(i), x), i};
    const auto k = static_cast<std::size_t>(k_);
    // Pair ordering is (distance, index), which is exactly the tie rule.
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(k),
                      by_distance.end());

    std::size_t votes[2] = {0, 0};
    double distance_sum[2] = {0.0, 0.0};
    for (std::size_t n = 0; n < k; ++n) {
        const int label = y_[by_distance[n].second];
        ++votes[label];
        distance_sum[label] += by_distance[n].first;
    }

    KnnPrediction out;
    out.score = static_cast<double>(votes[1]) / static_cast<double>(k);
    if (votes[1] != votes[0]) {
        out.label = votes[1] > votes[0] ? 1 : 0;
    } else {
        out.label = distance_sum[1] < distance_sum[0] ? 1 : 0;
    }
    return out;
}

} // namespace floodml
