#pragma once

#include "floodml/classifier.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace floodml {

/// Plain `key = value` document; '#' starts a comment. Keys must be unique.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, std::string_view what);

struct RunConfig {
    std::filesystem::path rainfall_csv;
    std::filesystem::path flood_csv;
    std::filesystem::path output_dir = "results";
    int start_year = 1980;
    int end_year = 2020;
    double split_ratio = 0.8;
    std::uint64_t seed = 42;
    bool include_annual = true;
    std::set<std::string> scale_exempt;
    std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
    ModelHyperparameters params;

    /// Throws ConfigError on an inverted timeline, a ratio outside (0, 1) or
    /// an empty model list.
    void validate() const;
};

/// Relative paths, the default output_dir included, are resolved against `base_dir`.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Every key with its effective value, defaults included, in a fixed order.
std::string render_run_config(const RunConfig& config);

} // namespace floodml
