#pragma once

#include "floodml/classifier.hpp"
#include "floodml/config.hpp"
#include "floodml/dataset.hpp"
#include "floodml/metrics.hpp"
#include "floodml/preprocess.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floodml {

struct ModelResult {
    ModelKind kind = ModelKind::logistic;
    std::optional<std::string> failure; // set when the model could not be fit
    std::optional<TrainedModel> model;
    ConfusionMatrix confusion;
    ClassReport report;
    std::optional<RocCurve> roc; // absent when the test labels hold one class
    std::string notes;           // solver details for the provenance block
};

/// Counts gathered while loading the raw CSVs.
struct IngestStats {
    std::size_t rainfall_records = 0;
    std::size_t imputed_cells = 0;
    std::size_t station_years = 0;
    std::vector<std::string> warnings;
};

struct RunReport {
    RunConfig config;
    IngestStats ingest;
    std::size_t dataset_rows = 0;  // after encoding
    std::size_t timeline_rows = 0; // after the timeline filter
    SplitDataset split;
    ScalerParams scaler;
    std::vector<ModelResult> models; // in config order
    double wall_clock_seconds = 0.0; // not written to any artifact
};

/// Output file name -> content, written together by write_artifacts.
using Artifacts = std::map<std::string, std::string>;

/// clean -> engineer -> encode: raw CSVs to a labeled dataset.
LabeledDataset ingest(const std::filesystem::path& rainfall_csv, const std::filesystem::path& flood_csv,
                      IngestStats& stats);

/// filter -> split -> scale -> fit -> evaluate on an already encoded dataset.
/// Stage failures are raised as StageError; a single model's degenerate fit
/// is recorded in its ModelResult instead.
RunReport run_experiment(const LabeledDataset& dataset, const RunConfig& config);

/// The full pipeline from the CSVs named in the config.
RunReport run_experiment(const RunConfig& config);

/// summary.csv, report_<model>.txt, confusion_<model>.csv, roc_<model>.csv,
/// roc.svg, model_<model>.txt, provenance.txt, split_indices.csv, scaler.csv.
Artifacts render_artifacts(const RunReport& report);

/// Writes every artifact into `dir`; on failure removes what it wrote.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& artifacts);

/// run_experiment + render_artifacts + write_artifacts into config.output_dir.
RunReport run_pipeline(const RunConfig& config);

} // namespace floodml
