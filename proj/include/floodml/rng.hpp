#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace floodml {

/// Seeded generator whose outputs are identical on every platform.
/// std::mt19937_64 is fully specified by the standard; the std
/// distributions are not, so bounded integers and reals are derived here.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound) by rejection sampling. bound > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform();

    double normal(double mean, double stddev);

    /// Mean-`mean` exponential variate.
    double exponential(double mean);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace floodml
