#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace floodml {

/// Counts with class 1 (flood) as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Positive-class precision, recall and F1; a zero denominator yields 0.
Prf prf(const ConfusionMatrix& cm);

double accuracy(const ConfusionMatrix& cm);

struct ReportRow {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct ClassReport {
    std::array<ReportRow, 2> classes; // index = class label
    double accuracy = 0.0;
    ReportRow macro_avg;
    ReportRow weighted_avg;
    std::size_t total = 0;
};

ClassReport classification_report(const ConfusionMatrix& cm);
ClassReport classification_report(std::span<const int> y_true, std::span<const int> y_pred);

/// Fixed-width text with rows 0, 1, accuracy, macro avg, weighted avg and
/// two-decimal values.
std::string render_report(const ClassReport& report);

/// Inverse of render_report at the printed precision.
ClassReport parse_report(std::string_view text);

/// Confusion matrix as a labelled 2x2 CSV (rows actual, columns predicted).
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);

struct RocPoint {
    double threshold = 0.0; // +inf for the leading (0, 0) point
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// Sweeps every distinct score as a threshold (score >= threshold is
/// positive), from (0, 0) to (1, 1); AUC by the trapezoidal rule. Throws
/// MetricError when y_true holds a single class.
RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores);

/// CSV `threshold,fpr,tpr`.
void write_roc_csv(std::ostream& out, const RocCurve& curve);

/// One polyline per named curve with the AUC in the legend.
std::string render_roc_svg(const std::vector<std::pair<std::string, RocCurve>>& curves);

} // namespace floodml
