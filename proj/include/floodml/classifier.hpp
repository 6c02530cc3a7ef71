#pragma once

#include "floodml/knn.hpp"
#include "floodml/logistic.hpp"
#include "floodml/matrix.hpp"
#include "floodml/svc.hpp"
#include "floodml/tree.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace floodml {

enum class ModelKind { logistic, svc, knn, tree };

/// Report order: logistic regression, SVC, KNN, decision tree.
inline constexpr std::array<ModelKind, 4> kAllModels{ModelKind::logistic, ModelKind::svc, ModelKind::knn,
                                                     ModelKind::tree};

/// Short identifier used in config files and output file names.
std::string_view model_id(ModelKind kind);
ModelKind model_kind_from_id(std::string_view id);
/// Row label in summary tables.
std::string_view model_display_name(ModelKind kind);

struct ModelHyperparameters {
    LogisticConfig logistic;
    SvcConfig svc;
    KnnConfig knn;
    TreeConfig tree;
};

using TrainedModel = std::variant<LogisticModel, SvcModel, KnnModel, DecisionTree>;

ModelKind kind_of(const TrainedModel& model);

TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const int> y, const ModelHyperparameters& params);

/// Class decision per row: logistic P >= 0.5, SVC decision >= 0, KNN vote, tree leaf.
Labels predict(const TrainedModel& model, const Matrix& x);

/// Ranking score per row for ROC: logistic probability, SVC decision value,
/// KNN positive vote fraction, tree leaf positive fraction.
std::vector<double> score(const TrainedModel& model, const Matrix& x);

/// Text artifact holding kind, hyperparameters and parameters. Reals are
/// written as hex floats so a reloaded model reproduces predictions bit-exactly.
void save_model(std::ostream& out, const TrainedModel& model);
TrainedModel load_model(std::istream& in);

} // namespace floodml
