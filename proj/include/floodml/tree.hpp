#pragma once

#include "floodml/matrix.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace floodml {

/// Shannon entropy in bits of the empirical class distribution; 0 log 0 = 0.
/// Throws on an empty multiset.
double entropy(std::span<const int> labels);

/// Entropy(parent) minus the children's entropies. With `weighted` each child
/// counts in proportion to its size; otherwise the child entropies are summed
/// as-is. Throws unless the partitions are a multiset partition of parent.
double information_gain(std::span<const int> parent, const std::vector<std::vector<int>>& partitions,
                        bool weighted = true);

struct TreeConfig {
    int max_depth = 8; // negative: unlimited
    int min_samples_leaf = 2;
    double min_gain = 1e-7;
    bool weighted_gain = true;
};

struct TreeNode {
    bool is_leaf = true;
    // internal nodes: value <= threshold goes left
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    // leaves
    int label = 0;
    std::array<std::size_t, 2> counts{}; // training samples of class 0 / class 1
};

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

/// Best (feature, midpoint threshold) over the given rows. Ties go to the lower
/// feature index, then the lower threshold. Each child must hold at least
/// config.min_samples_leaf rows.
SplitChoice best_split(const Matrix& x, std::span<const int> y, std::span<const std::size_t> rows,
                       const TreeConfig& config);

struct TreePrediction {
    int label = 0;
    double score = 0.0; // positive-class fraction in the leaf
};

class DecisionTree {
public:
    DecisionTree() = default;

    /// Validates and adopts a node array; nodes[0] is the root.
    static DecisionTree from_nodes(std::vector<TreeNode> nodes, std::size_t n_features,
                                   const TreeConfig& config = {});

    /// Greedy recursive binary splitting on information gain.
    static DecisionTree fit(const Matrix& x, std::span<const int> y, const TreeConfig& config = {});

    TreePrediction predict(std::span<const double> x) const;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    const TreeNode& root() const { return nodes_.at(0); }
    std::size_t n_features() const noexcept { return n_features_; }
    const TreeConfig& config() const noexcept { return config_; }
    int depth() const;

private:
    std::vector<TreeNode> nodes_;
    std::size_t n_features_ = 0;
    TreeConfig config_;
};

} // namespace floodml
