#include "floodml/tree.hpp"

#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace floodml {

namespace {

constexpr double kGainTieEpsilon = 1e-12;

double entropy_from_counts(std::size_t neg, std::size_t pos) {
    const double n = static_cast<double>(neg + pos);
    double h = 0.0;
    for (auto count : {neg, pos}) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h;
}

TreeNode make_leaf(std::size_t neg, std::size_t pos) {
    TreeNode leaf;
    leaf.is_leaf = true;
    leaf.counts = {neg, pos};
    leaf.label = pos > neg ? 1 : 0;
    return leaf;
}

// Midpoint that still separates a < b after rounding.
double midpoint(double a, double b) {
    const double m = a + (b - a) / 2.0;
    return m < b ? m : a;
}

} // namespace

double entropy(std::span<const int> labels) {
    if (labels.empty()) throw Error("entropy of an empty label set is undefined");
    std::map<int, std::size_t> counts;
    for (int v : labels) ++counts[v];
    const double n = static_cast<double>(labels.size());
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double information_gain(std::span<const int> parent, const std::vector<std::vector<int>>& partitions,
                        bool weighted) {
    std::map<int, long long> balance;
    for (int v : parent) ++balance[v];
    for (const auto& part : partitions) {
        for (int v : part) --balance[v];
    }
    for (const auto& [label, diff] : balance) {
        if (diff != 0) throw Error("information_gain: partitions do not partition the parent set");
    }

    const double before = entropy(parent);
    double after = 0.0;
    for (const auto& part : partitions) {
        if (part.empty()) continue;
        const double h = entropy(part);
        after += weighted ? static_cast<double>(part.size()) / static_cast<double>(parent.size()) * h : h;
    }
    return before - after;
}

SplitChoice best_split(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                       const TreeConfig& config) {
    SplitChoice best;
    const std::size_t n = rows.size();
    if (n < 2) return best;
    std::size_t total_pos = 0;
    for (auto r : rows) total_pos += static_cast<std::size_t>(y[r]);
    const double parent_h = entropy_from_counts(n - total_pos, total_pos);
    const auto min_leaf = static_cast<std::size_t>(std::max(config.min_samples_leaf, 1));

    std::vector<std::size_t> order(rows.begin(), rows.end());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
        std::size_t left_pos = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_pos += static_cast<std::size_t>(y[order[i]]);
            const double lo = x(order[i], f);
            const double hi = x(order[i + 1], f);
            if (!(lo < hi)) continue;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;

            const double h_left = entropy_from_counts(n_left - left_pos, left_pos);
            const double h_right = entropy_from_counts(n_right - (total_pos - left_pos), total_pos - left_pos);
            double after;
            if (config.weighted_gain) {
                after = (static_cast<double>(n_left) * h_left + static_cast<double>(n_right) * h_right) /
                        static_cast<double>(n);
            } else {
                after = h_left + h_right;
            }
            const double gain = parent_h - after;
            if (!best.found || gain > best.gain + kGainTieEpsilon) {
                best = {true, f, midpoint(lo, hi), gain};
            }
        }
    }
    return best;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes, std::size_t n_features, const TreeConfig& config) {
    if (nodes.empty()) throw FitError("decision tree: no nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        if (node.is_leaf) {
            if (node.label != 0 && node.label != 1) throw FitError("decision tree: leaf label must be 0 or 1");
            continue;
        }
        // Children always follow their parent, which also rules out cycles.
        if (node.left <= i || node.right <= i || node.left >= nodes.size() || node.right >= nodes.size()) {
            throw FitError(fmt::format("decision tree: node {} has invalid children", i));
        }
        if (node.feature >= n_features) throw FitError(fmt::format("decision tree: node {} feature out of range", i));
    }
    DecisionTree tree;
    tree.nodes_ = std::move(nodes);
    tree.n_features_ = n_features;
    tree.config_ = config;
    return tree;
}

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const int> y, const TreeConfig& config) {
    detail::check_training_data(x, y, "decision tree");
    DecisionTree tree;
    tree.n_features_ = x.cols();
    tree.config_ = config;

    struct Pending {
        std::size_t node;
        std::vector<std::size_t> rows;
        int depth;
    };
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree.nodes_.emplace_back();
    std::vector<Pending> stack;
    stack.push_back({0, std::move(all), 0});

    // Depth-first, left child first, so node numbering is deterministic.
    while (!stack.empty()) {
        Pending work = std::move(stack.back());
        stack.pop_back();

        std::size_t pos = 0;
        for (auto r : work.rows) pos += static_cast<std::size_t>(y[r]);
        const std::size_t neg = work.rows.size() - pos;

        const bool depth_reached = config.max_depth >= 0 && work.depth >= config.max_depth;
        const bool pure = pos == 0 || neg == 0;
        SplitChoice split;
        if (!depth_reached && !pure) split = best_split(x, y, work.rows, config);
        if (!split.found || split.gain < config.min_gain) {
            tree.nodes_[work.node] = make_leaf(neg, pos);
            continue;
        }

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (auto r : work.rows) (x(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);

        const std::size_t left = tree.nodes_.size();
        tree.nodes_.emplace_back();
        const std::size_t right = tree.nodes_.size();
        tree.nodes_.emplace_back();
        auto& node = tree.nodes_[work.node];
        node.is_leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left;
        node.right = right;
        node.counts = {neg, pos};
        node.label = pos > neg ? 1 : 0;

        stack.push_back({right, std::move(right_rows), work.depth + 1});
        stack.push_back({left, std::move(left_rows), work.depth + 1});
    }
    return tree;
}

TreePrediction DecisionTree::predict(std::span<const double> x) const {
    if (nodes_.empty()) throw FitError("decision tree: model is not fitted");
    detail::check_dimension(n_features_, x.size(), "tree predict");
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf) node = &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
    const auto total = node->counts[0] + node->counts[1];
    TreePrediction out;
    out.label = node->label;
    out.score = total == 0 ? static_cast<double>(node->label)
                           : static_cast<double>(node->counts[1]) / static_cast<double>(total);
    return out;
}

int DecisionTree::depth() const {
    std::vector<int> depth_of(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, depth_of[i]);
        if (!nodes_[i].is_leaf) {
            depth_of[nodes_[i].left] = depth_of[i] + 1;
            depth_of[nodes_[i].right] = depth_of[i] + 1;
        }
    }
    return deepest;
}

} // namespace floodml
