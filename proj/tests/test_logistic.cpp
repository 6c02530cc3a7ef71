#include "floodml/error.hpp"
#include "floodml/logistic.hpp"
#include "floodml/rng.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace floodml;

namespace {

struct Instance {
    Matrix x;
    Labels y;
    double intercept;
    std::vector<double> weights;
};

Instance random_instance(Rng& rng) {
    const std::size_t d = 1 + rng.below(8);
    const std::size_t n = 1 + rng.below(64);
    Instance inst{Matrix(n, d), Labels(n), rng.normal(0, 1), std::vector<double>(d)};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) inst.x(r, c) = rng.normal(0, 1);
        inst.y[r] = static_cast<int>(rng.below(2));
    }
    for (auto& w : inst.weights) w = rng.normal(0, 1);
    return inst;
}

double relative_error(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("sigmoid values") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
    const LogisticModel model(0.0, {2.0});
    const double x[] = {0.5};
    CHECK(model.predict_proba(x) == doctest::Approx(0.7311).epsilon(1e-4));
    CHECK(model.predict_proba(x) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
}

TEST_CASE("sigmoid stays inside the open unit interval") {
    for (double z : {-1e4, -800.0, -40.0, 40.0, 800.0, 1e4}) {
        const double p = sigmoid(z);
        CHECK(std::isfinite(p));
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    CHECK(sigmoid(-1e4) < sigmoid(-10.0));
}

TEST_CASE("log-odds equal the linear predictor") {
    Rng rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const double intercept = rng.normal(0, 2);
        const LogisticModel model(intercept, {rng.normal(0, 2), rng.normal(0, 2)});
        const double x[] = {rng.normal(0, 1), rng.normal(0, 1)};
        const double z = model.linear_predictor(x);
        if (std::abs(z) > 10.0) continue; // beyond this p itself cannot carry 1e-9 of log-odds
        const double p = model.predict_proba(x);
        CHECK(std::abs(std::log(p / (1.0 - p)) - z) < 1e-9);
    }
}

TEST_CASE("threshold rule") {
    const double none[] = {0.0};
    CHECK(LogisticModel(0.0, {0.0}).predict(none) == 1);
    CHECK(LogisticModel(std::log(3.0), {0.0}).predict(none) == 1);
    // p = 0.49
    CHECK(LogisticModel(std::log(0.49 / 0.51), {0.0}).predict(none) == 0);
    CHECK(LogisticModel(0.0, {0.0}).predict(none, 0.6) == 0);
}

TEST_CASE("dimension mismatch is rejected") {
    const LogisticModel model(0.0, {1.0, 2.0});
    const double x[] = {1.0};
    CHECK_THROWS_AS(model.predict_proba(x), DimensionError);
}

TEST_CASE("analytic gradient matches central differences") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng);
        const double l2 = trial % 2 ? 0.0 : 0.3;
        const auto grad = logistic_gradient(inst.x, inst.y, inst.intercept, inst.weights, l2);
        oracle::Vec params{inst.intercept};
        params.insert(params.end(), inst.weights.begin(), inst.weights.end());
        const auto numeric = oracle::central_difference(
            [&](const oracle::Vec& p) {
                return logistic_loss(inst.x, inst.y, p[0], std::span<const double>(p).subspan(1), l2);
            },
            params, 1e-5);
        CHECK(relative_error(grad.intercept, numeric[0]) < 1e-5);
        for (std::size_t i = 0; i < inst.weights.size(); ++i) {
            CHECK(relative_error(grad.weights[i], numeric[i + 1]) < 1e-5);
        }
    }
}

TEST_CASE("separable 1-D data is classified perfectly") {
    const auto x = Matrix::from_rows({{-3}, {-2}, {-1}, {-0.5}, {0.5}, {1}, {2}, {3}});
    const Labels y{0, 0, 0, 0, 1, 1, 1, 1};
    const auto model = LogisticModel::fit(x, y);
    for (std::size_t r = 0; r < x.rows(); ++r) CHECK(model.predict(x.row(r)) == y[r]);
}

TEST_CASE("symmetric data has zero intercept") {
    const auto x = Matrix::from_rows({{-1}, {1}, {-1}, {1}});
    const Labels y{0, 1, 0, 1};
    const auto model = LogisticModel::fit(x, y);
    CHECK(std::abs(model.intercept()) < 1e-6);
    CHECK(model.weights()[0] > 0.0);
}

TEST_CASE("all-zero labels predict below one half") {
    const auto x = Matrix::from_rows({{1, 2}, {3, -1}, {0, 0}});
    const Labels y{0, 0, 0};
    const auto model = LogisticModel::fit(x, y);
    for (std::size_t r = 0; r < x.rows(); ++r) CHECK(model.predict_proba(x.row(r)) < 0.5);
}

TEST_CASE("training loss never increases at the default learning rate") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(rng);
        LogisticConfig config;
        config.max_iterations = 300;
        config.record_loss_history = true;
        const auto model = LogisticModel::fit(inst.x, inst.y, config);
        const auto& history = model.loss_history();
        REQUIRE_FALSE(history.empty());
        for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-15);
        CHECK(model.final_loss() == doctest::Approx(logistic_loss(inst.x, inst.y, model.intercept(), model.weights())));
    }
}

TEST_CASE("gradient descent stops at the tolerance") {
    const auto x = Matrix::from_rows({{-1}, {1}, {0.5}, {-0.3}});
    const Labels y{0, 1, 0, 1};
    LogisticConfig config;
    config.tolerance = 1e-4;
    config.max_iterations = 100000;
    const auto model = LogisticModel::fit(x, y, config);
    CHECK(model.iterations() < config.max_iterations);
    const auto g = logistic_gradient(x, y, model.intercept(), model.weights());
    CHECK(std::abs(g.intercept) < 1e-4);
    CHECK(std::abs(g.weights[0]) < 1e-4);
}

TEST_CASE("fit validates inputs and is deterministic") {
    CHECK_THROWS_AS(LogisticModel::fit(Matrix(), Labels{}), FitError);
    CHECK_THROWS_AS(LogisticModel::fit(Matrix::from_rows({{1}}), Labels{2}), FitError);
    CHECK_THROWS_AS(LogisticModel::fit(Matrix::from_rows({{std::nan("")}}), Labels{1}), FitError);
    CHECK_THROWS_AS(LogisticModel::fit(Matrix::from_rows({{1}}), Labels{1, 0}), DimensionError);

    Rng rng(2);
    const auto inst = random_instance(rng);
    const auto a = LogisticModel::fit(inst.x, inst.y);
    const auto b = LogisticModel::fit(inst.x, inst.y);
    CHECK(a.intercept() == b.intercept());
    CHECK(a.weights() == b.weights());
}
