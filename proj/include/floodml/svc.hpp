#pragma once

#include "floodml/matrix.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace floodml {

enum class KernelType { linear, rbf };

std::string_view to_string(KernelType type);
KernelType kernel_type_from_string(std::string_view text);

struct Kernel {
    KernelType type = KernelType::rbf;
    double gamma = 1.0; // RBF width; ignored for linear

    static Kernel linear() { return {KernelType::linear, 1.0}; }
    static Kernel rbf(double gamma) { return {KernelType::rbf, gamma}; }
};

/// Linear: x . y. RBF: exp(-gamma |x - y|^2). Throws on dimension mismatch or
/// on a non-positive RBF gamma.
double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y);

/// 1 / (n_features * variance of all entries), or 1 for a constant matrix.
double default_rbf_gamma(const Matrix& x);

struct SvcConfig {
    double c = 1.0;
    KernelType kernel = KernelType::rbf;
    std::optional<double> gamma; // nullopt: default_rbf_gamma on the training data
    double tolerance = 1e-3;     // maximal KKT violation at which SMO stops
    int max_passes = 100;        // SMO stops after max_passes * max(n, 100) pair updates
    double alpha_cutoff = 1e-8;
};

class SvcModel {
public:
    SvcModel() = default;

    /// A model from explicit parameters; dual_coefs[i] is y_i * alpha_i.
    SvcModel(Kernel kernel, double c, Matrix support_vectors, std::vector<double> dual_coefs, double bias);

    /// Soft-margin dual solved by SMO with second-order working-set selection.
    /// Labels 0/1 are mapped to -1/+1. Throws DegenerateFitError when only one
    /// class is present.
    static SvcModel fit(const Matrix& x, std::span<const int> y, const SvcConfig& config = {});

    /// sum_i y_i alpha_i K(x_i, x) + b
    double decision(std::span<const double> x) const;
    /// 1 iff decision(x) >= 0.
    int predict(std::span<const double> x) const { return decision(x) >= 0.0 ? 1 : 0; }

    const Kernel& kernel() const noexcept { return kernel_; }
    double c() const noexcept { return c_; }
    double bias() const noexcept { return bias_; }
    const Matrix& support_vectors() const noexcept { return support_vectors_; }
    const std::vector<double>& dual_coefs() const noexcept { return dual_coefs_; }
    /// Training-row index of each support vector (empty for hand-built models).
    const std::vector<std::size_t>& support_indices() const noexcept { return support_indices_; }
    /// Dual variables for every training row, including the zeros.
    const std::vector<double>& alphas() const noexcept { return alphas_; }
    int iterations() const noexcept { return iterations_; }
    bool converged() const noexcept { return converged_; }

private:
    Kernel kernel_;
    double c_ = 1.0;
    Matrix support_vectors_;
    std::vector<double> dual_coefs_;
    double bias_ = 0.0;
    std::vector<std::size_t> support_indices_;
    std::vector<double> alphas_;
    int iterations_ = 0;
    bool converged_ = true;
};

} // namespace floodml
