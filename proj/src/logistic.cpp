#include "floodml/logistic.hpp"

#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace floodml {

namespace {

constexpr double kProbaFloor = std::numeric_limits<double>::min();
const double kProbaCeil = std::nextafter(1.0, 0.0);

// log(1 + e^z) without overflow.
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

double sigmoid(double z) {
    double p;
    if (z >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double e = std::exp(z);
        p = e / (1.0 + e);
    }
    return std::clamp(p, kProbaFloor, kProbaCeil);
}

double logistic_loss(const Matrix& x, std::span<const int> y, double intercept,
                     std::span<const double> weights, double l2) {
    detail::check_dimension(x.cols(), weights.size(), "logistic_loss");
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double z = intercept + dot(weights, x.row(i));
        total += softplus(z) - (y[i] == 1 ? z : 0.0);
    }
    double loss = total / static_cast<double>(x.rows());
    if (l2 > 0.0) loss += 0.5 * l2 * dot(weights, weights);
    return loss;
}

LogisticGradient logistic_gradient(const Matrix& x, std::span<const int> y, double intercept,
                                   std::span<const double> weights, double l2) {
    detail::check_dimension(x.cols(), weights.size(), "logistic_gradient");
    LogisticGradient g;
    g.weights.assign(weights.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        const double residual = (sigmoid(intercept + dot(weights, row)) - y[i]) * inv_n;
        g.intercept += residual;
        for (std::size_t j = 0; j < row.size(); ++j) g.weights[j] += residual * row[j];
    }
    if (l2 > 0.0) {
        for (std::size_t j = 0; j < weights.size(); ++j) g.weights[j] += l2 * weights[j];
    }
    return g;
}

LogisticModel::LogisticModel(double intercept, std::vector<double> weights)
    : intercept_(intercept), weights_(std::move(weights)) {}

LogisticModel LogisticModel::fit(const Matrix& x, std::span<const int> y, const LogisticConfig& config) {
    detail::check_training_data(x, y, "logistic regression");
    if (!(config.learning_rate > 0.0) || config.max_iterations < 0 || config.tolerance < 0.0 || config.l2 < 0.0) {
        throw FitError("logistic regression: invalid configuration");
    }

    LogisticModel model(0.0, std::vector<double>(x.cols(), 0.0));
    model.config_ = config;
    if (config.record_loss_history) {
        model.loss_history_.push_back(logistic_loss(x, y, 0.0, model.weights_, config.l2));
    }

    int it = 0;
    for (; it < config.max_iterations; ++it) {
        const auto g = logistic_gradient(x, y, model.intercept_, model.weights_, config.l2);
        double norm = std::abs(g.intercept);
        for (double w : g.weights) norm = std::max(norm, std::abs(w));
        if (norm < config.tolerance) break;

        model.intercept_ -= config.learning_rate * g.intercept;
        for (std::size_t j = 0; j < model.weights_.size(); ++j) {
            model.weights_[j] -= config.learning_rate * g.weights[j];
        }
        if (config.record_loss_history) {
            model.loss_history_.push_back(logistic_loss(x, y, model.intercept_, model.weights_, config.l2));
        }
    }
    model.iterations_ = it;
    model.final_loss_ = logistic_loss(x, y, model.intercept_, model.weights_, config.l2);
    return model;
}

double LogisticModel::linear_predictor(std::span<const double> x) const {
    detail::check_dimension(weights_.size(), x.size(), "logistic predict");
    return intercept_ + dot(weights_, x);
}

double LogisticModel::predict_proba(std::span<const double> x) const {
    return sigmoid(linear_predictor(x));
}

int LogisticModel::predict(std::span<const double> x, double threshold) const {
    return predict_proba(x) >= threshold ? 1 : 0;
}

} // namespace floodml
