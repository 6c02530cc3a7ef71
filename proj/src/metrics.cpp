#include "floodml/metrics.hpp"

#include "floodml/csv.hpp"
#include "floodml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace floodml {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) {
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void check_binary(std::span<const int> values, std::string_view what) {
    for (int v : values) {
        if (v != 0 && v != 1) throw MetricError(fmt::format("{}: value {} is not binary", what, v));
    }
}

constexpr int kLabelWidth = 12; // width of "weighted avg"

} // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw MetricError(fmt::format("confusion: {} true labels vs {} predictions", y_true.size(), y_pred.size()));
    }
    check_binary(y_true, "confusion y_true");
    check_binary(y_pred, "confusion y_pred");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) {
            ++(y_pred[i] == 1 ? cm.tp : cm.fn);
        } else {
            ++(y_pred[i] == 1 ? cm.fp : cm.tn);
        }
    }
    return cm;
}

Prf prf(const ConfusionMatrix& cm) {
    Prf out;
    out.precision = ratio(cm.tp, cm.tp + cm.fp);
    out.recall = ratio(cm.tp, cm.tp + cm.fn);
    out.f1 = harmonic(out.precision, out.recall);
    return out;
}

double accuracy(const ConfusionMatrix& cm) {
    return ratio(cm.tp + cm.tn, cm.total());
}

ClassReport classification_report(const ConfusionMatrix& cm) {
    ClassReport report;
    // Class 0 as positive swaps the roles of tp/tn and fp/fn.
    const ConfusionMatrix as_zero{cm.tn, cm.fn, cm.tp, cm.fp};
    const std::array<ConfusionMatrix, 2> views{as_zero, cm};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto p = prf(views[c]);
        report.classes[c] = {p.precision, p.recall, p.f1, views[c].tp + views[c].fn};
    }
    report.total = cm.total();
    report.accuracy = accuracy(cm);

    const auto& c0 = report.classes[0];
    const auto& c1 = report.classes[1];
    report.macro_avg = {(c0.precision + c1.precision) / 2.0, (c0.recall + c1.recall) / 2.0, (c0.f1 + c1.f1) / 2.0,
                        report.total};
    const double w0 = ratio(c0.support, report.total);
    const double w1 = ratio(c1.support, report.total);
    report.weighted_avg = {w0 * c0.precision + w1 * c1.precision, w0 * c0.recall + w1 * c1.recall,
                           w0 * c0.f1 + w1 * c1.f1, report.total};
    return report;
}

ClassReport classification_report(std::span<const int> y_true, std::span<const int> y_pred) {
    return classification_report(confusion(y_true, y_pred));
}

std::string render_report(const ClassReport& report) {
    std::string out = fmt::format("{:>{}} ", "", kLabelWidth);
    for (auto h : {"precision", "recall", "f1-score", "support"}) out += fmt::format(" {:>9}", h);
    out += "\n\n";
    auto row = [&](std::string_view label, const ReportRow& r) {
        out += fmt::format("{:>{}}  {:>9.2f} {:>9.2f} {:>9.2f} {:>9}\n", label, kLabelWidth, r.precision, r.recall,
                           r.f1, r.support);
    };
    row("0", report.classes[0]);
    row("1", report.classes[1]);
    out += "\n";
    out += fmt::format("{:>{}}  {:>9} {:>9} {:>9.2f} {:>9}\n", "accuracy", kLabelWidth, "", "", report.accuracy,
                       report.total);
    row("macro avg", report.macro_avg);
    row("weighted avg", report.weighted_avg);
    return out;
}

ClassReport parse_report(std::string_view text) {
    ClassReport report;
    std::istringstream in{std::string(text)};
    std::string line;
    bool seen[5] = {};

    auto numbers = [](std::string_view rest) {
        std::vector<double> values;
        std::istringstream fields{std::string(rest)};
        std::string token;
        while (fields >> token) {
            const auto v = csv::parse_double(token);
            if (!v) throw ParseError(fmt::format("report: bad number '{}'", token));
            values.push_back(*v);
        }
        return values;
    };
    auto to_row = [](const std::vector<double>& v) {
        if (v.size() != 4) throw ParseError("report: expected 4 values in row");
        return ReportRow{v[0], v[1], v[2], static_cast<std::size_t>(v[3])};
    };

    while (std::getline(in, line)) {
        const auto trimmed = csv::trim(line);
        if (trimmed.empty() || trimmed.starts_with("precision")) continue;
        if (trimmed.starts_with("weighted avg")) {
            report.weighted_avg = to_row(numbers(trimmed.substr(12)));
            seen[4] = true;
        } else if (trimmed.starts_with("macro avg")) {
            report.macro_avg = to_row(numbers(trimmed.substr(9)));
            seen[3] = true;
        } else if (trimmed.starts_with("accuracy")) {
            const auto v = numbers(trimmed.substr(8));
            if (v.size() != 2) throw ParseError("report: accuracy row needs 2 values");
            report.accuracy = v[0];
            report.total = static_cast<std::size_t>(v[1]);
            seen[2] = true;
        } else if (trimmed.starts_with("0 ") || trimmed.starts_with("1 ")) {
            const auto c = static_cast<std::size_t>(trimmed[0] - '0');
            report.classes[c] = to_row(numbers(trimmed.substr(1)));
            seen[c] = true;
        } else {
            throw ParseError(fmt::format("report: unexpected line '{}'", trimmed));
        }
    }
    if (!std::all_of(std::begin(seen), std::end(seen), [](bool s) { return s; })) {
        throw ParseError("report: missing rows");
    }
    return report;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
    out << "actual\\predicted,0,1\n" << "0," << cm.tn << ',' << cm.fp << '\n' << "1," << cm.fn << ',' << cm.tp << '\n';
}

RocCurve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) {
        throw MetricError(fmt::format("roc: {} labels vs {} scores", y_true.size(), scores.size()));
    }
    check_binary(y_true, "roc y_true");
    for (double s : scores) {
        if (std::isnan(s)) throw MetricError("roc: NaN score");
    }
    const auto positives = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
    const std::size_t negatives = y_true.size() - positives;
    if (positives == 0 || negatives == 0) throw MetricError("roc: undefined when y_true holds a single class");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        // All tied scores cross the threshold together.
        for (; i < order.size() && scores[order[i]] == threshold; ++i) ++(y_true[order[i]] == 1 ? tp : fp);
        curve.points.push_back({threshold, ratio(fp, negatives), ratio(tp, positives)});
    }
    if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
        curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    }

    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return curve;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points) {
        out << fmt::format("{:.17g},{:.17g},{:.17g}\n", p.threshold, p.fpr, p.tpr);
    }
}

std::string render_roc_svg(const std::vector<std::pair<std::string, RocCurve>>& curves) {
    constexpr double size = 400.0;
    constexpr double margin = 50.0;
    static constexpr std::array<std::string_view, 6> colors{"#1f77b4", "#ff7f0e", "#2ca02c",
                                                            "#d62728", "#9467bd", "#8c564b"};
    const double full = size + 2 * margin;
    auto px = [&](double fpr) { return margin + fpr * size; };
    auto py = [&](double tpr) { return margin + (1.0 - tpr) * size; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", full);
    svg += fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" stroke=\"black\"/>\n",
                       margin, size);
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"grey\" stroke-dasharray=\"4 4\"/>\n",
                       px(0), py(0), px(1), py(1));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">False Positive Rate</text>\n", margin + size / 2,
                       full - 15);
    svg += fmt::format("<text x=\"15\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {0})\">"
                       "True Positive Rate</text>\n",
                       margin + size / 2);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& [name, curve] = curves[i];
        const auto color = colors[i % colors.size()];
        std::string points;
        for (const auto& p : curve.points) points += fmt::format("{:.2f},{:.2f} ", px(p.fpr), py(p.tpr));
        if (!points.empty()) points.pop_back();
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
        const double ly = margin + size - 20.0 - 18.0 * static_cast<double>(curves.size() - 1 - i);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{} (AUC = {:.3f})</text>\n",
                           margin + size * 0.35, ly, color, name, curve.auc);
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace floodml
