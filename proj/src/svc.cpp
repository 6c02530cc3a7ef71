#include "floodml/svc.hpp"

#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace floodml {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

std::string_view to_string(KernelType type) {
    return type == KernelType::linear ? "linear" : "rbf";
}

KernelType kernel_type_from_string(std::string_view text) {
    if (text == "linear") return KernelType::linear;
    if (text == "rbf") return KernelType::rbf;
    throw ConfigError(fmt::format("unknown kernel '{}' (expected linear or rbf)", text));
}

double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y) {
    detail::check_dimension(x.size(), y.size(), "kernel");
    if (kernel.type == KernelType::linear) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    }
    if (!(kernel.gamma > 0.0)) throw FitError(fmt::format("rbf kernel: gamma {} must be > 0", kernel.gamma));
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        ss += d * d;
    }
    return std::exp(-kernel.gamma * ss);
}

double default_rbf_gamma(const Matrix& x) {
    const auto values = x.values();
    if (values.empty()) return 1.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

SvcModel::SvcModel(Kernel kernel, double c, Matrix support_vectors, std::vector<double> dual_coefs, double bias)
    : kernel_(kernel), c_(c), support_vectors_(std::move(support_vectors)), dual_coefs_(std::move(dual_coefs)),
      bias_(bias) {
    detail::check_dimension(support_vectors_.rows(), dual_coefs_.size(), "svc dual coefficients");
}

// Solves  min 1/2 a'Qa - e'a  s.t. 0 <= a <= C, y'a = 0  with Q_ij = y_i y_j K_ij,
// tracking the gradient G = Qa - e and updating two variables per step.
SvcModel SvcModel::fit(const Matrix& x, std::span<const int> y, const SvcConfig& config) {
    detail::check_training_data(x, y, "svc");
    if (!(config.c > 0.0)) throw FitError(fmt::format("svc: C = {} must be > 0", config.c));
    const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
    const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
    if (!has_pos || !has_neg) throw DegenerateFitError("svc: training labels contain a single class");

    Kernel kernel{config.kernel, 1.0};
    if (config.kernel == KernelType::rbf) kernel.gamma = config.gamma.value_or(default_rbf_gamma(x));

    const std::size_t n = x.rows();
    const double c = config.c;
    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] == 1 ? 1.0 : -1.0;

    std::vector<double> k_mat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(kernel, x.row(i), x.row(j));
            k_mat[i * n + j] = v;
            k_mat[j * n + i] = v;
        }
    }
    auto q = [&](std::size_t i, std::size_t j) { return sign[i] * sign[j] * k_mat[i * n + j]; };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    auto at_upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    const long long max_iter =
        static_cast<long long>(std::max(config.max_passes, 1)) * static_cast<long long>(std::max<std::size_t>(n, 100));
    long long iter = 0;
    bool converged = false;
    while (iter < max_iter) {
        // i: maximal violator in I_up.
        double g_max = -kInf;
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (sign[t] > 0 ? !at_upper(t) : !at_lower(t)) {
                const double v = -sign[t] * grad[t];
                if (v > g_max) {
                    g_max = v;
                    i = t;
                }
            }
        }
        // j: second-order choice in I_low.
        double g_max2 = -kInf;
        double best_obj = kInf;
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (sign[t] > 0 ? at_lower(t) : at_upper(t)) continue;
            const double v = sign[t] * grad[t];
            g_max2 = std::max(g_max2, v);
            if (i == n) continue;
            const double grad_diff = g_max + v;
            if (grad_diff > 0.0) {
                double quad = k_mat[i * n + i] + k_mat[t * n + t] - 2.0 * k_mat[i * n + t];
                if (quad <= 0.0) quad = kTau;
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj < best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        if (i == n || j == n || g_max + g_max2 < config.tolerance) {
            converged = true;
            break;
        }
        ++iter;

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (sign[i] != sign[j]) {
            double quad = k_mat[i * n + i] + k_mat[j * n + j] + 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = k_mat[i * n + i] + k_mat[j * n + j] - 2.0 * q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double d_ai = alpha[i] - old_ai;
        const double d_aj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * d_ai + q(j, t) * d_aj;
    }

    // Bias from the free vectors, or the midpoint of the feasible interval.
    double upper = kInf;
    double lower = -kInf;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = sign[t] * grad[t];
        if (at_upper(t)) {
            if (sign[t] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (at_lower(t)) {
            if (sign[t] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            ++free_count;
            free_sum += yg;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;

    SvcModel model;
    model.kernel_ = kernel;
    model.c_ = c;
    model.bias_ = -rho;
    model.alphas_ = alpha;
    model.iterations_ = static_cast<int>(iter);
    model.converged_ = converged;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > config.alpha_cutoff) model.support_indices_.push_back(t);
    }
    model.support_vectors_ = x.select_rows(model.support_indices_);
    for (auto t : model.support_indices_) model.dual_coefs_.push_back(sign[t] * alpha[t]);
    return model;
}

double SvcModel::decision(std::span<const double> x) const {
    if (support_vectors_.rows() > 0) detail::check_dimension(support_vectors_.cols(), x.size(), "svc decision");
    double sum = bias_;
    for (std::size_t i = 0; i < support_vectors_.rows(); ++i) {
        sum += dual_coefs_[i] * kernel_eval(kernel_, support_vectors_.row(i), x);
    }
    return sum;
}

} // namespace floodml
