#include "fixtures.hpp"
#include "floodml/error.hpp"
#include "floodml/tree.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace floodml;

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

double training_accuracy(const DecisionTree& tree, const Matrix& x, const Labels& y) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) hits += tree.predict(x.row(r)).label == y[r];
    return static_cast<double>(hits) / static_cast<double>(x.rows());
}

} // namespace

TEST_CASE("entropy values") {
    CHECK(entropy(std::vector<int>{1, 1, 1}) == 0.0);
    CHECK(entropy(std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK(entropy(std::vector<int>{1, 0, 0, 0}) == doctest::Approx(0.8113).epsilon(1e-4));
    CHECK(entropy(std::vector<int>{1, 0, 0, 0}) == doctest::Approx(oracle::entropy_bits({1, 0, 0, 0})));
    CHECK_THROWS_AS(entropy(std::vector<int>{}), Error);
}

TEST_CASE("information gain values") {
    const std::vector<int> parent{1, 1, 0, 0};
    CHECK(information_gain(parent, {{1, 1}, {0, 0}}) == 1.0);
    CHECK(information_gain(parent, {{1, 0}, {1, 0}}) == 0.0);
    CHECK(information_gain(parent, {{1, 1, 0}, {0}}) == doctest::Approx(0.3113).epsilon(1e-4));
    CHECK(information_gain(parent, {{1, 1, 0}, {0}}) == doctest::Approx(1.0 - 0.75 * oracle::entropy_bits({1, 1, 0})));
    // the unweighted form sums raw child entropies
    CHECK(information_gain(parent, {{1, 1, 0}, {0}}, false) == doctest::Approx(1.0 - oracle::entropy_bits({1, 1, 0})));
}

TEST_CASE("information gain rejects non-partitions") {
    const std::vector<int> parent{1, 1, 0, 0};
    CHECK_THROWS_AS(information_gain(parent, {{1, 1}, {0}}), Error);
    CHECK_THROWS_AS(information_gain(parent, {{1, 1, 1}, {0}}), Error);
    CHECK_THROWS_AS(information_gain(parent, {{1, 1}, {0, 0}, {0}}), Error);
}

TEST_CASE("entropy bounds and non-negative weighted gain") {
    Rng rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int> parent(1 + rng.below(30));
        for (auto& v : parent) v = static_cast<int>(rng.below(2));
        const double h = entropy(parent);
        CHECK(h >= 0.0);
        CHECK(h <= 1.0);
        std::vector<std::vector<int>> parts(1 + rng.below(4));
        for (int v : parent) parts[rng.below(parts.size())].push_back(v);
        CHECK(information_gain(parent, parts) >= -1e-12);
    }
}

TEST_CASE("1-D threshold data gives a depth-1 tree") {
    const auto x = Matrix::from_rows({{1}, {4}, {7}, {10}, {13}, {16}, {20}});
    const Labels y{0, 0, 0, 0, 1, 1, 1};
    const auto tree = DecisionTree::fit(x, y);
    CHECK(tree.depth() == 1);
    CHECK(tree.root().threshold > 10.0);
    CHECK(tree.root().threshold < 13.0);
    CHECK(training_accuracy(tree, x, y) == 1.0);
    const auto oracle_split = oracle::exhaustive_root_split(fixtures::rows_of(x), y, 2);
    CHECK(tree.root().threshold == oracle_split.threshold);
}

TEST_CASE("pure input and depth zero give one leaf") {
    const auto x = Matrix::from_rows({{1}, {2}, {3}});
    const auto pure = DecisionTree::fit(x, Labels{1, 1, 1});
    CHECK(pure.nodes().size() == 1);
    CHECK(pure.root().label == 1);

    TreeConfig stump;
    stump.max_depth = 0;
    const auto leaf = DecisionTree::fit(x, Labels{0, 1, 1}, stump);
    CHECK(leaf.nodes().size() == 1);
    CHECK(leaf.root().label == 1);
    // majority tie goes to 0
    const auto tie = DecisionTree::fit(Matrix::from_rows({{1}, {2}}), Labels{1, 0}, stump);
    CHECK(tie.root().label == 0);
}

TEST_CASE("prediction routes by threshold") {
    TreeNode leaf;
    leaf.label = 1;
    leaf.counts = {3, 7};
    const auto single = DecisionTree::from_nodes({leaf}, 1);
    const double any[] = {42.0};
    CHECK(single.predict(any).label == 1);
    CHECK(single.predict(any).score == doctest::Approx(0.7));

    TreeNode root;
    root.is_leaf = false;
    root.feature = 0;
    root.threshold = 10.0;
    root.left = 1;
    root.right = 2;
    TreeNode left;
    left.label = 0;
    left.counts = {4, 1};
    TreeNode right;
    right.label = 1;
    right.counts = {0, 5};
    const auto stump = DecisionTree::from_nodes({root, left, right}, 1);
    const double three[] = {3.0};
    const double ten[] = {10.0};
    const double eleven[] = {11.0};
    CHECK(stump.predict(three).label == 0);
    CHECK(stump.predict(three).score == doctest::Approx(0.2));
    CHECK(stump.predict(ten).label == 0);
    CHECK(stump.predict(eleven).label == 1);
}

TEST_CASE("from_nodes rejects broken structures") {
    TreeNode root;
    root.is_leaf = false;
    root.left = 1;
    root.right = 5;
    TreeNode leaf;
    CHECK_THROWS_AS(DecisionTree::from_nodes({root, leaf}, 1), Error);
    CHECK_THROWS_AS(DecisionTree::from_nodes({}, 1), Error);
    root.right = 1;
    root.feature = 3;
    CHECK_THROWS_AS(DecisionTree::from_nodes({root, leaf, leaf}, 1), Error);
}

TEST_CASE("root split matches exhaustive enumeration") {
    for (std::size_t min_leaf : {1u, 2u}) {
        for (const auto& c : fixtures::tree_cases(300, 40 + min_leaf)) {
            TreeConfig config;
            config.min_samples_leaf = static_cast<int>(min_leaf);
            const auto rows = all_rows(c.x.rows());
            const auto got = best_split(c.x, c.y, rows, config);
            const auto want = oracle::exhaustive_root_split(fixtures::rows_of(c.x), c.y, min_leaf);
            REQUIRE(got.found == want.found);
            if (!want.found) continue;
            CHECK(got.feature == want.feature);
            CHECK(got.threshold == want.threshold);
            CHECK(got.gain == doctest::Approx(want.gain).epsilon(1e-12));
        }
    }
}

TEST_CASE("fully grown trees fit distinct points exactly") {
    TreeConfig grow;
    grow.max_depth = -1;
    grow.min_samples_leaf = 1;
    grow.min_gain = 0.0;
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        Matrix x(n, 2);
        Labels y(n);
        for (std::size_t r = 0; r < n; ++r) {
            x(r, 0) = static_cast<double>(r); // distinct rows
            x(r, 1) = rng.normal(0, 1);
            y[r] = static_cast<int>(rng.below(2));
        }
        // shuffle the distinct column so it is not trivially ordered
        std::vector<std::size_t> order = all_rows(n);
        shuffle(std::span<std::size_t>(order), rng);
        const auto xs = x.select_rows(order);
        const auto tree = DecisionTree::fit(xs, y, grow);
        CHECK(training_accuracy(tree, xs, y) == 1.0);
    }
}

TEST_CASE("fitted nodes keep children after parents") {
    for (const auto& c : fixtures::tree_cases(100, 5)) {
        const auto tree = DecisionTree::fit(c.x, c.y);
        const auto& nodes = tree.nodes();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].is_leaf) {
                CHECK(nodes[i].counts[0] + nodes[i].counts[1] >= 1);
                continue;
            }
            CHECK(nodes[i].left > i);
            CHECK(nodes[i].right > i);
        }
        CHECK(tree.depth() <= 8);
        for (std::size_t r = 0; r < c.x.rows(); ++r) {
            const auto p = tree.predict(c.x.row(r));
            CHECK((p.label == 0 || p.label == 1));
            CHECK(p.score >= 0.0);
            CHECK(p.score <= 1.0);
        }
    }
}
