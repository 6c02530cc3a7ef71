#pragma once

#include "floodml/matrix.hpp"

#include <span>
#include <vector>

namespace floodml {

namespace detail {
struct ModelCodec;
}

/// 1 / (1 + e^-z), evaluated without overflow and kept strictly inside (0, 1).
double sigmoid(double z);

struct LogisticConfig {
    double learning_rate = 0.1;
    int max_iterations = 5000;
    double tolerance = 1e-6; // on the gradient infinity-norm
    double l2 = 0.0;         // penalty (l2 / 2) * |weights|^2, intercept unpenalized
    bool record_loss_history = false;
};

struct LogisticGradient {
    double intercept = 0.0;
    std::vector<double> weights;
};

/// Mean negative log-likelihood plus the L2 term.
double logistic_loss(const Matrix& x, std::span<const int> y, double intercept,
                     std::span<const double> weights, double l2 = 0.0);

/// Analytic gradient of logistic_loss.
LogisticGradient logistic_gradient(const Matrix& x, std::span<const int> y, double intercept,
                                   std::span<const double> weights, double l2 = 0.0);

class LogisticModel {
public:
    LogisticModel() = default;
    LogisticModel(double intercept, std::vector<double> weights);

    /// Full-batch gradient descent from all-zero parameters. Stops after
    /// max_iterations or once the gradient infinity-norm drops below tolerance.
    static LogisticModel fit(const Matrix& x, std::span<const int> y, const LogisticConfig& config = {});

    double linear_predictor(std::span<const double> x) const;
    double predict_proba(std::span<const double> x) const;
    /// 1 iff predict_proba(x) >= threshold.
    int predict(std::span<const double> x, double threshold = 0.5) const;

    double intercept() const noexcept { return intercept_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t dimension() const noexcept { return weights_.size(); }

    int iterations() const noexcept { return iterations_; }
    double final_loss() const noexcept { return final_loss_; }
    const std::vector<double>& loss_history() const noexcept { return loss_history_; }
    const LogisticConfig& config() const noexcept { return config_; }

private:
    friend struct detail::ModelCodec;

    double intercept_ = 0.0;
    std::vector<double> weights_;
    int iterations_ = 0;
    double final_loss_ = 0.0;
    std::vector<double> loss_history_;
    LogisticConfig config_;
};

} // namespace floodml
