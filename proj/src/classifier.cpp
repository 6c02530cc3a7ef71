#include "floodml/classifier.hpp"

#include "floodml/error.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace floodml {

namespace detail {

// Reads the whitespace-separated model artifact, one expected token at a time.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string word() {
        std::string t;
        if (!(in_ >> t)) throw ModelFormatError("model artifact: unexpected end of input");
        return t;
    }

    void expect(std::string_view keyword) {
        const auto t = word();
        if (t != keyword) throw ModelFormatError(fmt::format("model artifact: expected '{}', got '{}'", keyword, t));
    }

    double real() {
        const auto t = word();
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size()) throw ModelFormatError(fmt::format("model artifact: bad real '{}'", t));
        return v;
    }

    long long integer() {
        const auto t = word();
        char* end = nullptr;
        const long long v = std::strtoll(t.c_str(), &end, 10);
        if (t.empty() || end != t.c_str() + t.size()) {
            throw ModelFormatError(fmt::format("model artifact: bad integer '{}'", t));
        }
        return v;
    }

    std::size_t count() {
        const auto v = integer();
        if (v < 0) throw ModelFormatError("model artifact: negative count");
        return static_cast<std::size_t>(v);
    }

    double keyed_real(std::string_view key) {
        expect(key);
        return real();
    }

    long long keyed_integer(std::string_view key) {
        expect(key);
        return integer();
    }

private:
    std::istream& in_;
};

std::string hex(double v) { return fmt::format("{:a}", v); }

struct ModelCodec {
    static void write(std::ostream& out, const LogisticModel& m) {
        const auto& c = m.config();
        out << "learning_rate " << hex(c.learning_rate) << '\n'
            << "max_iterations " << c.max_iterations << '\n'
            << "tolerance " << hex(c.tolerance) << '\n'
            << "l2 " << hex(c.l2) << '\n'
            << "iterations " << m.iterations() << '\n'
            << "final_loss " << hex(m.final_loss()) << '\n'
            << "intercept " << hex(m.intercept()) << '\n'
            << "weights " << m.weights().size();
        for (double w : m.weights()) out << ' ' << hex(w);
        out << '\n';
    }

    static LogisticModel read_logistic(TokenReader& in) {
        LogisticConfig c;
        c.learning_rate = in.keyed_real("learning_rate");
        c.max_iterations = static_cast<int>(in.keyed_integer("max_iterations"));
        c.tolerance = in.keyed_real("tolerance");
        c.l2 = in.keyed_real("l2");
        const auto iterations = static_cast<int>(in.keyed_integer("iterations"));
        const double final_loss = in.keyed_real("final_loss");
        const double intercept = in.keyed_real("intercept");
        in.expect("weights");
        std::vector<double> weights(in.count());
        for (auto& w : weights) w = in.real();
        LogisticModel m(intercept, std::move(weights));
        m.config_ = c;
        m.iterations_ = iterations;
        m.final_loss_ = final_loss;
        return m;
    }
};

} // namespace detail

std::string_view model_id(ModelKind kind) {
    switch (kind) {
    case ModelKind::logistic: return "logistic";
    case ModelKind::svc: return "svc";
    case ModelKind::knn: return "knn";
    case ModelKind::tree: return "tree";
    }
    return "unknown";
}

ModelKind model_kind_from_id(std::string_view id) {
    for (auto kind : kAllModels) {
        if (model_id(kind) == id) return kind;
    }
    throw ConfigError(fmt::format("unknown model '{}' (expected logistic, svc, knn or tree)", id));
}

std::string_view model_display_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::logistic: return "Binary Logistic Regression";
    case ModelKind::svc: return "Support Vector Classifier (SVC)";
    case ModelKind::knn: return "K-Nearest Neighbors (KNN)";
    case ModelKind::tree: return "Decision Tree Classifier (DTC)";
    }
    return "unknown";
}

ModelKind kind_of(const TrainedModel& model) {
    return static_cast<ModelKind>(model.index());
}

TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const int> y, const ModelHyperparameters& params) {
    switch (kind) {
    case ModelKind::logistic: return LogisticModel::fit(x, y, params.logistic);
    case ModelKind::svc: return SvcModel::fit(x, y, params.svc);
    case ModelKind::knn: return KnnModel::fit(x, y, params.knn);
    case ModelKind::tree: return DecisionTree::fit(x, y, params.tree);
    }
    throw ConfigError("unknown model kind");
}

Labels predict(const TrainedModel& model, const Matrix& x) {
    Labels out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        out[r] = std::visit(
            [&](const auto& m) -> int {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, KnnModel> || std::is_same_v<T, DecisionTree>) {
                    return m.predict(row).label;
                } else {
                    return m.predict(row);
                }
            },
            model);
    }
    return out;
}

std::vector<double> score(const TrainedModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        out[r] = std::visit(
            [&](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, LogisticModel>) {
                    return m.predict_proba(row);
                } else if constexpr (std::is_same_v<T, SvcModel>) {
                    return m.decision(row);
                } else {
                    return m.predict(row).score;
                }
            },
            model);
    }
    return out;
}

namespace {

void write_matrix_rows(std::ostream& out, const Matrix& m, std::span<const double> leading) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << detail::hex(leading[r]);
        for (double v : m.row(r)) out << ' ' << detail::hex(v);
        out << '\n';
    }
}

} // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
    out << "floodml-model 1\n";
    out << "kind " << model_id(kind_of(model)) << '\n';
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LogisticModel>) {
                detail::ModelCodec::write(out, m);
            } else if constexpr (std::is_same_v<T, SvcModel>) {
                out << "c " << detail::hex(m.c()) << '\n'
                    << "kernel " << to_string(m.kernel().type) << '\n'
                    << "gamma " << detail::hex(m.kernel().gamma) << '\n'
                    << "bias " << detail::hex(m.bias()) << '\n'
                    << "support_vectors " << m.support_vectors().rows() << ' ' << m.support_vectors().cols() << '\n';
                write_matrix_rows(out, m.support_vectors(), m.dual_coefs());
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                std::vector<double> labels(m.train_y().begin(), m.train_y().end());
                out << "k " << m.k() << '\n'
                    << "train " << m.train_x().rows() << ' ' << m.train_x().cols() << '\n';
                write_matrix_rows(out, m.train_x(), labels);
            } else {
                const auto& c = m.config();
                out << "max_depth " << c.max_depth << '\n'
                    << "min_samples_leaf " << c.min_samples_leaf << '\n'
                    << "min_gain " << detail::hex(c.min_gain) << '\n'
                    << "weighted_gain " << (c.weighted_gain ? 1 : 0) << '\n'
                    << "features " << m.n_features() << '\n'
                    << "nodes " << m.nodes().size() << '\n';
                for (const auto& node : m.nodes()) {
                    if (node.is_leaf) {
                        out << "leaf " << node.label << ' ' << node.counts[0] << ' ' << node.counts[1] << '\n';
                    } else {
                        out << "split " << node.feature << ' ' << detail::hex(node.threshold) << ' ' << node.left
                            << ' ' << node.right << ' ' << node.counts[0] << ' ' << node.counts[1] << '\n';
                    }
                }
            }
        },
        model);
    out << "end\n";
}

TrainedModel load_model(std::istream& in) {
    detail::TokenReader reader(in);
    reader.expect("floodml-model");
    if (reader.integer() != 1) throw ModelFormatError("model artifact: unsupported version");
    reader.expect("kind");
    const auto kind = model_kind_from_id(reader.word());

    auto read_rows = [&](std::size_t rows, std::size_t cols, std::vector<double>& leading) {
        Matrix m(rows, cols);
        leading.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            leading[r] = reader.real();
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = reader.real();
        }
        return m;
    };

    TrainedModel model;
    switch (kind) {
    case ModelKind::logistic:
        model = detail::ModelCodec::read_logistic(reader);
        break;
    case ModelKind::svc: {
        const double c = reader.keyed_real("c");
        reader.expect("kernel");
        const auto type = kernel_type_from_string(reader.word());
        const double gamma = reader.keyed_real("gamma");
        const double bias = reader.keyed_real("bias");
        reader.expect("support_vectors");
        const auto rows = reader.count();
        const auto cols = reader.count();
        std::vector<double> coefs;
        Matrix sv = read_rows(rows, cols, coefs);
        model = SvcModel(Kernel{type, gamma}, c, std::move(sv), std::move(coefs), bias);
        break;
    }
    case ModelKind::knn: {
        KnnConfig config;
        config.k = static_cast<int>(reader.keyed_integer("k"));
        reader.expect("train");
        const auto rows = reader.count();
        const auto cols = reader.count();
        std::vector<double> labels;
        Matrix x = read_rows(rows, cols, labels);
        Labels y(labels.begin(), labels.end());
        model = KnnModel::fit(x, y, config);
        break;
    }
    case ModelKind::tree: {
        TreeConfig config;
        config.max_depth = static_cast<int>(reader.keyed_integer("max_depth"));
        config.min_samples_leaf = static_cast<int>(reader.keyed_integer("min_samples_leaf"));
        config.min_gain = reader.keyed_real("min_gain");
        config.weighted_gain = reader.keyed_integer("weighted_gain") != 0;
        const auto features = static_cast<std::size_t>(reader.keyed_integer("features"));
        reader.expect("nodes");
        std::vector<TreeNode> nodes(reader.count());
        for (auto& node : nodes) {
            const auto tag = reader.word();
            if (tag == "leaf") {
                node.is_leaf = true;
                node.label = static_cast<int>(reader.integer());
            } else if (tag == "split") {
                node.is_leaf = false;
                node.feature = reader.count();
                node.threshold = reader.real();
                node.left = reader.count();
                node.right = reader.count();
            } else {
                throw ModelFormatError(fmt::format("model artifact: unknown node tag '{}'", tag));
            }
            node.counts = {reader.count(), reader.count()};
        }
        model = DecisionTree::from_nodes(std::move(nodes), features, config);
        break;
    }
    }
    reader.expect("end");
    return model;
}

} // namespace floodml
