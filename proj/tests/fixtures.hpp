#pragma once

// Fixture sets shared by the unit tests and the acceptance binary.

#include "floodml/rng.hpp"
#include "floodml/svc.hpp"
#include "oracles/oracles.hpp"

#include <cmath>
#include <cstdint>
#include <unistd.h>
#include <string>
#include <vector>

namespace fixtures {

struct SvcCase {
    std::string name;
    floodml::Matrix x;
    floodml::Labels y;
    floodml::SvcConfig config;
};

inline floodml::SvcConfig svc_config(double c, floodml::KernelType kernel, double gamma = 1.0) {
    floodml::SvcConfig config;
    config.c = c;
    config.kernel = kernel;
    config.gamma = gamma;
    // Tight enough that the stopping rule does not dominate the comparison;
    // at the 1e-3 default the dual is only solved to about 1e-3 relative.
    config.tolerance = 1e-6;
    return config;
}

// Hand-picked cases plus seeded random sets of 2-5 distinct points.
inline std::vector<SvcCase> svc_cases() {
    using floodml::KernelType;
    using floodml::Matrix;
    std::vector<SvcCase> cases;
    cases.push_back({"two-point", Matrix::from_rows({{-1}, {1}}), {0, 1}, svc_config(10, KernelType::linear)});
    cases.push_back({"xor", Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}}), {0, 0, 1, 1},
                     svc_config(10, KernelType::rbf, 1.0)});
    cases.push_back({"xor-soft", Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}}), {0, 0, 1, 1},
                     svc_config(0.5, KernelType::rbf, 1.0)});
    cases.push_back({"overlap-linear", Matrix::from_rows({{0}, {1}, {2}, {3}, {1.5}}), {0, 0, 1, 1, 0},
                     svc_config(1, KernelType::linear)});
    cases.push_back({"bounded-linear", Matrix::from_rows({{0, 0}, {0.2, 0.1}, {0.1, 0.3}, {0.3, 0.2}}), {0, 1, 0, 1},
                     svc_config(0.1, KernelType::linear)});

    floodml::Rng rng(2024);
    const double cs[] = {0.1, 1.0, 10.0, 100.0};
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 2 + rng.below(4);
        const std::size_t d = 1 + rng.below(3);
        Matrix x(n, d);
        floodml::Labels y(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) x(r, c) = std::round(rng.normal(0, 1.5) * 100.0) / 100.0;
            y[r] = static_cast<int>(r % 2 == 0 ? rng.below(2) : 1 - y[r - 1]);
        }
        const auto kernel = i % 2 ? KernelType::linear : KernelType::rbf;
        const double gamma = 0.25 + rng.uniform() * 2.0;
        cases.push_back({"random-" + std::to_string(i), x, y, svc_config(cs[rng.below(4)], kernel, gamma)});
    }
    return cases;
}

inline floodml::Kernel kernel_of(const floodml::SvcConfig& config) {
    return {config.kernel, config.gamma.value_or(1.0)};
}

inline oracle::Rows gram(const floodml::Kernel& kernel, const floodml::Matrix& x) {
    oracle::Rows k(x.rows(), oracle::Vec(x.rows()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.rows(); ++j) k[i][j] = floodml::kernel_eval(kernel, x.row(i), x.row(j));
    }
    return k;
}

inline std::vector<int> signs(const floodml::Labels& y) {
    std::vector<int> s;
    for (int v : y) s.push_back(v == 1 ? 1 : -1);
    return s;
}

// Decision value of the exact dual solution at an arbitrary point.
inline double oracle_decision(const SvcCase& c, const oracle::DualSolution& sol, std::span<const double> q) {
    const auto kernel = kernel_of(c.config);
    double f = sol.b;
    for (std::size_t i = 0; i < c.x.rows(); ++i) {
        f += (c.y[i] == 1 ? 1.0 : -1.0) * sol.alpha[i] * floodml::kernel_eval(kernel, c.x.row(i), q);
    }
    return f;
}

struct SvcComparison {
    double max_decision_gap = 0.0;
    bool alphas_in_box = true;
    bool oracle_found = true;
};

// Compares at the training points and at a few probes around them.
inline SvcComparison compare_svc(const SvcCase& c, const floodml::SvcModel& model) {
    SvcComparison out;
    const auto sol = oracle::exact_svc_dual(gram(kernel_of(c.config), c.x), signs(c.y), c.config.c);
    if (!sol) {
        out.oracle_found = false;
        return out;
    }
    for (double a : model.alphas()) {
        if (a < -1e-9 || a > c.config.c + 1e-9) out.alphas_in_box = false;
    }
    floodml::Rng rng(7);
    std::vector<std::vector<double>> probes;
    for (std::size_t r = 0; r < c.x.rows(); ++r) probes.emplace_back(c.x.row(r).begin(), c.x.row(r).end());
    for (int p = 0; p < 5; ++p) {
        std::vector<double> q(c.x.cols());
        for (auto& v : q) v = rng.normal(0, 1.5);
        probes.push_back(q);
    }
    for (const auto& q : probes) {
        out.max_decision_gap = std::max(out.max_decision_gap, std::abs(model.decision(q) - oracle_decision(c, *sol, q)));
    }
    return out;
}

} // namespace fixtures

namespace fixtures {

struct TreeCase {
    floodml::Matrix x;
    floodml::Labels y;
};

// Up to 12 points over 1-3 features drawn from a small grid, so repeated
// values and equal gains both occur.
inline std::vector<TreeCase> tree_cases(int count, std::uint64_t seed) {
    floodml::Rng rng(seed);
    std::vector<TreeCase> out;
    for (int i = 0; i < count; ++i) {
        const std::size_t n = 2 + rng.below(11);
        const std::size_t d = 1 + rng.below(3);
        TreeCase c{floodml::Matrix(n, d), floodml::Labels(n)};
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t f = 0; f < d; ++f) c.x(r, f) = static_cast<double>(rng.below(6)) * 0.5;
            c.y[r] = static_cast<int>(rng.below(2));
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline oracle::Rows rows_of(const floodml::Matrix& m) {
    oracle::Rows rows;
    for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
    return rows;
}

} // namespace fixtures

#include "floodml/config.hpp"
#include "floodml/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fixtures {

// A fresh directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("floodml-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// File name -> bytes for every regular file in a directory.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) files[entry.path().filename().string()] = read_file(entry.path());
    }
    return files;
}

// Writes synthetic inputs into `dir` and returns a config over them.
inline floodml::RunConfig synthetic_config(const std::filesystem::path& dir, const floodml::SyntheticSpec& spec,
                                           std::uint64_t seed) {
    const auto data = floodml::generate_synthetic(spec, seed);
    write_file(dir / "rainfall.csv", data.rainfall_csv);
    write_file(dir / "flood.csv", data.flood_csv);
    floodml::RunConfig config;
    config.rainfall_csv = dir / "rainfall.csv";
    config.flood_csv = dir / "flood.csv";
    config.start_year = spec.start_year;
    config.end_year = spec.end_year;
    config.output_dir = dir / "out";
    return config;
}

} // namespace fixtures
