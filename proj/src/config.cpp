#include "floodml/config.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"

#include <fstream>
#include <functional>
#include <istream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace floodml {

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    if (csv::trim(text).empty()) return items;
    for (const auto& item : csv::split_line(text)) {
        const auto t = csv::trim(item);
        if (t.empty()) throw ConfigError(fmt::format("empty item in list '{}'", text));
        items.emplace_back(t);
    }
    return items;
}

double to_double(const std::string& key, const std::string& value) {
    const auto v = csv::parse_double(value);
    if (!v) throw ConfigError(fmt::format("{}: '{}' is not a number", key, value));
    return *v;
}

long long to_int(const std::string& key, const std::string& value) {
    const auto v = csv::parse_int(value);
    if (!v) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, value));
    return *v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, value));
}

std::string real(double v) { return fmt::format("{}", v); }

} // namespace

KeyValues parse_key_values(std::istream& in, std::string_view what) {
    KeyValues values;
    std::string line;
    std::size_t line_no = 0;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto content = csv::trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{} line {}: expected 'key = value'", what, line_no));
        }
        std::string key(csv::trim(content.substr(0, eq)));
        std::string value(csv::trim(content.substr(eq + 1)));
        if (key.empty()) throw ConfigError(fmt::format("{} line {}: empty key", what, line_no));
        if (!values.emplace(key, value).second) {
            throw ConfigError(fmt::format("{} line {}: duplicate key '{}'", what, line_no, key));
        }
    }
    return values;
}

void RunConfig::validate() const {
    if (start_year > end_year) {
        throw ConfigError(fmt::format("timeline start_year {} is after end_year {}", start_year, end_year));
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw ConfigError(fmt::format("split_ratio {} not in (0, 1)", split_ratio));
    }
    if (models.empty()) throw ConfigError("models: at least one model is required");
    std::set<ModelKind> unique(models.begin(), models.end());
    if (unique.size() != models.size()) throw ConfigError("models: duplicate entry");
}

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
    const auto kv = parse_key_values(in, "config");
    RunConfig c;
    auto path = [&](const std::filesystem::path& p) {
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    c.output_dir = path(c.output_dir);

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"rainfall_csv", [&](auto&, auto& v) { c.rainfall_csv = path(v); }},
        {"flood_csv", [&](auto&, auto& v) { c.flood_csv = path(v); }},
        {"output_dir", [&](auto&, auto& v) { c.output_dir = path(v); }},
        {"start_year", [&](auto& k, auto& v) { c.start_year = static_cast<int>(to_int(k, v)); }},
        {"end_year", [&](auto& k, auto& v) { c.end_year = static_cast<int>(to_int(k, v)); }},
        {"split_ratio", [&](auto& k, auto& v) { c.split_ratio = to_double(k, v); }},
        {"seed",
         [&](auto& k, auto& v) {
             const auto s = to_int(k, v);
             if (s < 0) throw ConfigError("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"include_annual", [&](auto& k, auto& v) { c.include_annual = to_bool(k, v); }},
        {"scale_exempt",
         [&](auto&, auto& v) {
             const auto items = split_list(v);
             c.scale_exempt = {items.begin(), items.end()};
         }},
        {"models",
         [&](auto&, auto& v) {
             c.models.clear();
             for (const auto& id : split_list(v)) c.models.push_back(model_kind_from_id(id));
         }},
        {"logistic.learning_rate", [&](auto& k, auto& v) { c.params.logistic.learning_rate = to_double(k, v); }},
        {"logistic.max_iterations",
         [&](auto& k, auto& v) { c.params.logistic.max_iterations = static_cast<int>(to_int(k, v)); }},
        {"logistic.tolerance", [&](auto& k, auto& v) { c.params.logistic.tolerance = to_double(k, v); }},
        {"logistic.l2", [&](auto& k, auto& v) { c.params.logistic.l2 = to_double(k, v); }},
        {"svc.c", [&](auto& k, auto& v) { c.params.svc.c = to_double(k, v); }},
        {"svc.kernel", [&](auto&, auto& v) { c.params.svc.kernel = kernel_type_from_string(v); }},
        {"svc.gamma",
         [&](auto& k, auto& v) {
             if (v == "auto") c.params.svc.gamma.reset();
             else c.params.svc.gamma = to_double(k, v);
         }},
        {"svc.tolerance", [&](auto& k, auto& v) { c.params.svc.tolerance = to_double(k, v); }},
        {"svc.max_passes", [&](auto& k, auto& v) { c.params.svc.max_passes = static_cast<int>(to_int(k, v)); }},
        {"svc.alpha_cutoff", [&](auto& k, auto& v) { c.params.svc.alpha_cutoff = to_double(k, v); }},
        {"knn.k", [&](auto& k, auto& v) { c.params.knn.k = static_cast<int>(to_int(k, v)); }},
        {"tree.max_depth", [&](auto& k, auto& v) { c.params.tree.max_depth = static_cast<int>(to_int(k, v)); }},
        {"tree.min_samples_leaf",
         [&](auto& k, auto& v) { c.params.tree.min_samples_leaf = static_cast<int>(to_int(k, v)); }},
        {"tree.min_gain", [&](auto& k, auto& v) { c.params.tree.min_gain = to_double(k, v); }},
        {"tree.weighted_gain", [&](auto& k, auto& v) { c.params.tree.weighted_gain = to_bool(k, v); }},
    };

    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(fmt::format("unknown config key '{}'", key));
        it->second(key, value);
    }
    if (c.rainfall_csv.empty()) throw ConfigError("rainfall_csv is required");
    if (c.flood_csv.empty()) throw ConfigError("flood_csv is required");
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    return parse_run_config(in, path.parent_path());
}

std::string render_run_config(const RunConfig& c) {
    std::vector<std::string> models;
    for (auto m : c.models) models.emplace_back(model_id(m));
    const auto& p = c.params;
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
    line("rainfall_csv", c.rainfall_csv.generic_string());
    line("flood_csv", c.flood_csv.generic_string());
    line("output_dir", c.output_dir.generic_string());
    line("start_year", std::to_string(c.start_year));
    line("end_year", std::to_string(c.end_year));
    line("split_ratio", real(c.split_ratio));
    line("seed", std::to_string(c.seed));
    line("include_annual", c.include_annual ? "true" : "false");
    line("scale_exempt", fmt::format("{}", fmt::join(c.scale_exempt, ",")));
    line("models", fmt::format("{}", fmt::join(models, ",")));
    line("logistic.learning_rate", real(p.logistic.learning_rate));
    line("logistic.max_iterations", std::to_string(p.logistic.max_iterations));
    line("logistic.tolerance", real(p.logistic.tolerance));
    line("logistic.l2", real(p.logistic.l2));
    line("svc.c", real(p.svc.c));
    line("svc.kernel", std::string(to_string(p.svc.kernel)));
    line("svc.gamma", p.svc.gamma ? real(*p.svc.gamma) : "auto");
    line("svc.tolerance", real(p.svc.tolerance));
    line("svc.max_passes", std::to_string(p.svc.max_passes));
    line("svc.alpha_cutoff", real(p.svc.alpha_cutoff));
    line("knn.k", std::to_string(p.knn.k));
    line("tree.max_depth", std::to_string(p.tree.max_depth));
    line("tree.min_samples_leaf", std::to_string(p.tree.min_samples_leaf));
    line("tree.min_gain", real(p.tree.min_gain));
    line("tree.weighted_gain", p.tree.weighted_gain ? "true" : "false");
    return out;
}

} // namespace floodml
