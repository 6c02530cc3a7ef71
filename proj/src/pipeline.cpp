#include "floodml/pipeline.hpp"

#include "floodml/compare.hpp"
#include "floodml/error.hpp"
#include "floodml/rng.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace floodml {

namespace {

template <typename F>
auto stage(std::string_view name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(std::string(name), e.what());
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
    return in;
}

std::string class_balance(const Labels& labels) {
    const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    return fmt::format("{} NO / {} YES", labels.size() - pos, pos);
}

std::string describe(const TrainedModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LogisticModel>) {
                return fmt::format("gradient descent, iterations = {}, final_loss = {:.6f}", m.iterations(),
                                   m.final_loss());
            } else if constexpr (std::is_same_v<T, SvcModel>) {
                return fmt::format("smo, kernel = {}, gamma = {:.6g}, C = {}, support_vectors = {}, iterations = {}, "
                                   "converged = {}",
                                   to_string(m.kernel().type), m.kernel().gamma, m.c(), m.support_vectors().rows(),
                                   m.iterations(), m.converged() ? "true" : "false");
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                return fmt::format("k = {}, training rows = {}", m.k(), m.train_x().rows());
            } else {
                return fmt::format("nodes = {}, depth = {}", m.nodes().size(), m.depth());
            }
        },
        model);
}

std::string_view score_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::logistic: return "predicted probability";
    case ModelKind::svc: return "decision value";
    case ModelKind::knn: return "positive vote fraction";
    case ModelKind::tree: return "leaf positive fraction";
    }
    return "";
}

} // namespace

LabeledDataset ingest(const std::filesystem::path& rainfall_csv, const std::filesystem::path& flood_csv,
                      IngestStats& stats) {
    auto records = stage("parse rainfall", [&] {
        auto in = open_input(rainfall_csv);
        return parse_daily_rainfall(in);
    });
    auto floods = stage("parse floods", [&] {
        auto in = open_input(flood_csv);
        return parse_flood_records(in);
    });
    stats.rainfall_records = records.size();

    auto imputed = stage("clean", [&] { return impute_missing(std::move(records)); });
    stats.imputed_cells = imputed.replaced_cells;

    auto aggregated = stage("engineer", [&] { return aggregate_monthly(imputed.records); });
    stats.station_years = aggregated.rows.size();
    stats.warnings = aggregated.warnings;

    auto merged = stage("merge", [&] { return merge_flood_labels(aggregated.rows, floods); });
    return stage("encode", [&] { return encode_labels(merged); });
}

RunReport run_experiment(const LabeledDataset& dataset, const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    stage("config", [&] { config.validate(); });

    RunReport report;
    report.config = config;
    report.dataset_rows = dataset.rows.size();

    const auto timeline = stage("filter", [&] { return filter_timeline(dataset, config.start_year, config.end_year); });
    report.timeline_rows = timeline.rows.size();

    const auto table = build_feature_table(timeline, config.include_annual);
    report.split = stage("split", [&] { return train_test_split(table, config.split_ratio, config.seed); });

    // Scaler statistics come from the training rows only.
    report.scaler = stage("scale", [&] {
        return fit_scaler(report.split.train_x, report.split.column_names, config.scale_exempt);
    });
    const Matrix train_x = transform(report.scaler, report.split.train_x);
    const Matrix test_x = stage("scale", [&] { return transform(report.scaler, report.split.test_x); });

    for (const auto kind : config.models) {
        ModelResult result;
        result.kind = kind;
        try {
            result.model = fit_model(kind, train_x, report.split.train_y, config.params);
        } catch (const DegenerateFitError& e) {
            result.failure = e.what();
            report.models.push_back(std::move(result));
            continue;
        } catch (const std::exception& e) {
            throw StageError(fmt::format("fit {}", model_id(kind)), e.what());
        }
        stage(fmt::format("evaluate {}", model_id(kind)), [&] {
            const auto predicted = predict(*result.model, test_x);
            result.confusion = confusion(report.split.test_y, predicted);
            result.report = classification_report(result.confusion);
            try {
                result.roc = roc_curve(report.split.test_y, score(*result.model, test_x));
            } catch (const MetricError& e) {
                result.notes = fmt::format("roc unavailable: {}; ", e.what());
            }
            result.notes += describe(*result.model);
        });
        report.models.push_back(std::move(result));
    }

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

RunReport run_experiment(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    stage("config", [&] { config.validate(); });
    IngestStats stats;
    const auto dataset = ingest(config.rainfall_csv, config.flood_csv, stats);
    auto report = run_experiment(dataset, config);
    report.ingest = std::move(stats);
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

Artifacts render_artifacts(const RunReport& report) {
    Artifacts files;
    std::vector<SummaryRow> summary;
    std::vector<std::pair<std::string, RocCurve>> curves;

    for (const auto& result : report.models) {
        const auto id = std::string(model_id(result.kind));
        SummaryRow row;
        row.model = model_display_name(result.kind);
        if (result.failure) {
            row.accuracy = row.precision = row.recall = std::numeric_limits<double>::quiet_NaN();
            summary.push_back(row);
            continue;
        }
        row.accuracy = result.report.accuracy;
        row.precision = result.report.classes[1].precision;
        row.recall = result.report.classes[1].recall;
        summary.push_back(row);

        files["report_" + id + ".txt"] = render_report(result.report);
        std::ostringstream cm;
        write_confusion_csv(cm, result.confusion);
        files["confusion_" + id + ".csv"] = cm.str();
        if (result.roc) {
            std::ostringstream roc;
            write_roc_csv(roc, *result.roc);
            files["roc_" + id + ".csv"] = roc.str();
            curves.emplace_back(row.model, *result.roc);
        }
        std::ostringstream model;
        save_model(model, *result.model);
        files["model_" + id + ".txt"] = model.str();
    }

    std::ostringstream summary_csv;
    write_summary_csv(summary_csv, summary);
    files["summary.csv"] = summary_csv.str();
    files["roc.svg"] = render_roc_svg(curves);

    std::ostringstream split_csv;
    write_split_indices_csv(split_csv, report.split);
    files["split_indices.csv"] = split_csv.str();

    std::ostringstream scaler_csv;
    write_scaler_csv(scaler_csv, report.scaler);
    files["scaler.csv"] = scaler_csv.str();

    const auto& s = report.split;
    std::string prov = "# floodml run provenance\n\n[config]\n" + render_run_config(report.config);
    prov += "\n[dataset]\n";
    prov += fmt::format("rainfall_records = {}\n", report.ingest.rainfall_records);
    prov += fmt::format("imputed_cells = {}\n", report.ingest.imputed_cells);
    prov += fmt::format("station_years = {}\n", report.ingest.station_years);
    prov += fmt::format("encoded_rows = {}\n", report.dataset_rows);
    prov += fmt::format("timeline_rows = {}\n", report.timeline_rows);
    prov += fmt::format("aggregation_warnings = {}\n", report.ingest.warnings.size());
    for (const auto& w : report.ingest.warnings) prov += fmt::format("warning = {}\n", w);
    prov += "\n[split]\n";
    prov += fmt::format("generator = {} fisher-yates\n", Rng::kAlgorithm);
    prov += fmt::format("seed = {}\n", s.seed);
    prov += fmt::format("ratio = {}\n", s.ratio);
    prov += fmt::format("train_rows = {}\n", s.train_indices.size());
    prov += fmt::format("test_rows = {}\n", s.test_indices.size());
    prov += fmt::format("train_class_balance = {}\n", class_balance(s.train_y));
    prov += fmt::format("test_class_balance = {}\n", class_balance(s.test_y));
    prov += "\n[features]\n";
    prov += fmt::format("columns = {}\n", fmt::join(s.column_names, ","));
    std::vector<std::string> constant;
    for (std::size_t c = 0; c < report.scaler.size(); ++c) {
        if (report.scaler.is_constant(c)) constant.push_back(report.scaler.column_names[c]);
    }
    prov += fmt::format("constant_columns = {}\n", fmt::join(constant, ","));
    prov += "\n[models]\n";
    for (const auto& result : report.models) {
        const auto id = model_id(result.kind);
        if (result.failure) {
            prov += fmt::format("{} = failed: {}\n", id, *result.failure);
        } else {
            prov += fmt::format("{} = ok; roc score = {}; {}\n", id, score_name(result.kind), result.notes);
        }
    }
    files["provenance.txt"] = prov;
    return files;
}

void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts) {
    std::vector<std::filesystem::path> written;
    try {
        std::filesystem::create_directories(dir);
        for (const auto& [name, content] : artifacts) {
            const auto path = dir / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
            written.push_back(path);
            out << content;
            out.close();
            if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
        }
    } catch (const std::exception& e) {
        std::error_code ignored;
        for (const auto& path : written) std::filesystem::remove(path, ignored);
        throw StageError("write", e.what());
    }
}

RunReport run_pipeline(const RunConfig& config) {
    auto report = run_experiment(config);
    write_artifacts(config.output_dir, render_artifacts(report));
    return report;
}

} // namespace floodml
