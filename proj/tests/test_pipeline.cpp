#include "fixtures.hpp"
#include "floodml/compare.hpp"
#include "floodml/config.hpp"
#include "floodml/error.hpp"
#include "floodml/pipeline.hpp"
#include "floodml/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace floodml;

namespace {

RunConfig parse_config(const std::string& text, const std::filesystem::path& base = "/base") {
    std::istringstream in(text);
    return parse_run_config(in, base);
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

SyntheticSpec small_spec() {
    SyntheticSpec spec;
    spec.stations = 8;
    spec.start_year = 2001;
    spec.end_year = 2010;
    return spec;
}

} // namespace

TEST_CASE("key-value documents") {
    std::istringstream in("# comment\n a = 1 \n\nb=two words # trailing\n");
    const auto kv = parse_key_values(in, "test");
    CHECK(kv.at("a") == "1");
    CHECK(kv.at("b") == "two words");
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(parse_key_values(dup, "test"), ConfigError);
    std::istringstream bad("just words\n");
    CHECK_THROWS_AS(parse_key_values(bad, "test"), ConfigError);
}

TEST_CASE("run config defaults and overrides") {
    const auto c = parse_config("rainfall_csv = rain.csv\nflood_csv = /abs/flood.csv\n");
    CHECK(c.rainfall_csv == std::filesystem::path("/base/rain.csv"));
    CHECK(c.flood_csv == std::filesystem::path("/abs/flood.csv"));
    CHECK(c.output_dir == std::filesystem::path("/base/results"));
    CHECK(c.split_ratio == 0.8);
    CHECK(c.models.size() == 4);
    CHECK(c.params.logistic.learning_rate == 0.1);
    CHECK(c.params.logistic.max_iterations == 5000);
    CHECK(c.params.svc.c == 1.0);
    CHECK(c.params.svc.kernel == KernelType::rbf);
    CHECK_FALSE(c.params.svc.gamma.has_value());
    CHECK(c.params.knn.k == 5);
    CHECK(c.params.tree.max_depth == 8);
    CHECK(c.params.tree.min_samples_leaf == 2);

    const auto o = parse_config("rainfall_csv = r\nflood_csv = f\nmodels = tree, logistic\nsvc.gamma = 0.5\n"
                                "scale_exempt = Station,Year\nseed = 7\ninclude_annual = false\n");
    CHECK(o.models == std::vector<ModelKind>{ModelKind::tree, ModelKind::logistic});
    CHECK(o.params.svc.gamma == 0.5);
    CHECK(o.scale_exempt == std::set<std::string>{"Station", "Year"});
    CHECK(o.seed == 7);
    CHECK_FALSE(o.include_annual);
}

TEST_CASE("run config errors") {
    CHECK_THROWS_AS(parse_config("flood_csv = f\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\nmodels =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\nmodels = forest\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\nstart_year = 2020\nend_year = 2011\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\nsplit_ratio = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\ncolour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("rainfall_csv = r\nflood_csv = f\nknn.k = many\n"), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("rendered config parses back to the same config") {
    const auto c = parse_config("rainfall_csv = r\nflood_csv = f\nmodels = svc,knn\nsvc.gamma = 0.3\n"
                                "logistic.l2 = 0.01\ntree.max_depth = -1\nscale_exempt = Station\n");
    const auto text = render_run_config(c);
    const auto back = parse_config(text);
    CHECK(render_run_config(back) == text);
    CHECK(back.params.svc.gamma == 0.3);
    CHECK(back.params.tree.max_depth == -1);
}

TEST_CASE("synthetic generator row counts and formats") {
    SyntheticSpec spec;
    spec.stations = 2;
    spec.start_year = 2019;
    spec.end_year = 2020;
    const auto data = generate_synthetic(spec, 1);
    CHECK(count_lines(data.rainfall_csv) == 1 + 48);
    CHECK(count_lines(data.flood_csv) == 1 + 4);
    CHECK(data.rainfall_csv.find("NaN") == std::string::npos);

    std::istringstream rain(data.rainfall_csv);
    std::istringstream flood(data.flood_csv);
    IngestStats ignored;
    CHECK(parse_daily_rainfall(rain).size() == 48);
    CHECK(parse_flood_records(flood).size() == 4);

    const auto again = generate_synthetic(spec, 1);
    CHECK(again.rainfall_csv == data.rainfall_csv);
    CHECK(again.flood_csv == data.flood_csv);
    CHECK(generate_synthetic(spec, 2).rainfall_csv != data.rainfall_csv);
}

TEST_CASE("synthetic floods follow the threshold rule") {
    SyntheticSpec spec = small_spec();
    spec.missing_rate = 0.05;
    const auto data = generate_synthetic(spec, 3);
    CHECK(data.rainfall_csv.find("NaN") != std::string::npos);
    std::istringstream rain(data.rainfall_csv);
    std::istringstream flood(data.flood_csv);
    const auto agg = aggregate_monthly(impute_missing(parse_daily_rainfall(rain)).records);
    const auto merged = merge_flood_labels(agg.rows, parse_flood_records(flood));
    std::size_t floods = 0;
    for (const auto& row : merged) {
        CHECK((row.flood == "YES") == (static_cast<double>(row.features.annual) > spec.threshold()));
        floods += row.flood == "YES";
    }
    CHECK(floods > 0);
    CHECK(floods < merged.size());
}

TEST_CASE("synthetic spec parsing") {
    const KeyValues kv{{"stations", "3"}, {"start_year", "2000"}, {"end_year", "2001"}, {"flood_noise", "50"}};
    const auto spec = parse_synthetic_spec(kv);
    CHECK(spec.stations == 3);
    CHECK(spec.flood_noise == 50.0);
    CHECK_THROWS_AS(parse_synthetic_spec({{"stations", "0"}}), ConfigError);
    CHECK_THROWS_AS(parse_synthetic_spec({{"wind", "1"}}), ConfigError);
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(1900, 2) == 28);
    CHECK(days_in_month(2000, 2) == 29);
    CHECK(days_in_month(2021, 4) == 30);
}

TEST_CASE("pipeline artifacts are byte-identical across runs") {
    fixtures::TempDir dir("pipeline");
    auto config = fixtures::synthetic_config(dir.path(), small_spec(), 11);
    const auto report = run_pipeline(config);
    const auto a = fixtures::snapshot(config.output_dir);
    std::filesystem::remove_all(config.output_dir);
    run_pipeline(config);
    CHECK(fixtures::snapshot(config.output_dir) == a);

    for (const char* name : {"summary.csv", "roc.svg", "provenance.txt", "split_indices.csv", "scaler.csv"}) {
        CHECK(a.count(name) == 1);
    }
    for (auto kind : kAllModels) {
        const std::string id(model_id(kind));
        CHECK(a.count("report_" + id + ".txt") == 1);
        CHECK(a.count("confusion_" + id + ".csv") == 1);
        CHECK(a.count("roc_" + id + ".csv") == 1);
    }
    CHECK(report.timeline_rows == 80);
    CHECK(report.split.test_x.rows() == 16);
    CHECK(a.at("provenance.txt").find("seed = 42") != std::string::npos);
}

TEST_CASE("summary matches the reports") {
    fixtures::TempDir dir("summary");
    auto config = fixtures::synthetic_config(dir.path(), small_spec(), 12);
    config.models = {ModelKind::tree, ModelKind::logistic};
    const auto report = run_pipeline(config);
    const auto rows = load_summary(config.output_dir);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].model == model_display_name(ModelKind::tree));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = report.models[i].report;
        CHECK(rows[i].accuracy == std::round(r.accuracy * 1e4) / 1e4);
        CHECK(rows[i].precision == std::round(r.classes[1].precision * 1e4) / 1e4);
        CHECK(rows[i].recall == std::round(r.classes[1].recall * 1e4) / 1e4);
    }
    const auto summary = fixtures::read_file(config.output_dir / "summary.csv");
    CHECK(summary.rfind("Model,Accuracy,Precision,Recall\n", 0) == 0);
}

TEST_CASE("scaler and fits ignore the test rows") {
    fixtures::TempDir dir("leak");
    const auto config = fixtures::synthetic_config(dir.path(), small_spec(), 13);
    IngestStats stats;
    const auto dataset = ingest(config.rainfall_csv, config.flood_csv, stats);
    const auto base = run_experiment(dataset, config);

    // Perturb every test row of the dataset; train rows stay as they were.
    auto mutated = dataset;
    for (auto i : base.split.test_indices) {
        for (auto& m : mutated.rows[i].monthly) m = m * 7 + 1000;
        mutated.rows[i].annual = 0;
        for (auto m : mutated.rows[i].monthly) mutated.rows[i].annual += m;
    }
    const auto other = run_experiment(mutated, config);
    CHECK(other.split.train_indices == base.split.train_indices);
    CHECK(other.scaler.means == base.scaler.means);
    CHECK(other.scaler.stds == base.scaler.stds);
    for (std::size_t m = 0; m < base.models.size(); ++m) {
        std::ostringstream a;
        std::ostringstream b;
        save_model(a, *base.models[m].model);
        save_model(b, *other.models[m].model);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("separable synthetic data is learned") {
    fixtures::TempDir dir("sanity");
    SyntheticSpec spec;
    spec.stations = 34;
    spec.start_year = 2011;
    spec.end_year = 2020;
    auto config = fixtures::synthetic_config(dir.path(), spec, 5);
    config.models = {ModelKind::logistic, ModelKind::tree};
    const auto report = run_experiment(config);
    CHECK(report.timeline_rows == 340);
    CHECK(report.split.test_x.rows() == 68);
    for (const auto& m : report.models) {
        CAPTURE(model_id(m.kind));
        CHECK(m.report.accuracy >= 0.95);
    }
}

TEST_CASE("a degenerate model is recorded and the rest continue") {
    LabeledDataset ds;
    ds.stations = StationCodeMap::from_names({"A"});
    for (int y = 2000; y < 2010; ++y) ds.rows.push_back({0, "A", y, {1, 2, 3}, 6, 0});
    RunConfig config;
    config.start_year = 2000;
    config.end_year = 2009;
    const auto report = run_experiment(ds, config);
    REQUIRE(report.models.size() == 4);
    CHECK(report.models[1].kind == ModelKind::svc);
    CHECK(report.models[1].failure.has_value());
    CHECK_FALSE(report.models[0].failure.has_value());
    CHECK_FALSE(report.models[0].roc.has_value());
    const auto files = render_artifacts(report);
    CHECK(files.at("summary.csv").find("Support Vector Classifier (SVC),NaN,NaN,NaN") != std::string::npos);
}

TEST_CASE("stage failures name the stage and leave no output") {
    fixtures::TempDir dir("stage");
    auto config = fixtures::synthetic_config(dir.path(), small_spec(), 14);
    fixtures::write_file(config.flood_csv, "Station,Year,Flood\nStation01,2001,PERHAPS\n");
    try {
        run_pipeline(config);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "parse floods");
        CHECK(std::string(e.what()).rfind("[parse floods]", 0) == 0);
    }
    CHECK_FALSE(std::filesystem::exists(config.output_dir / "summary.csv"));

    config.start_year = 1950;
    config.end_year = 1960;
    fixtures::write_file(config.flood_csv, generate_synthetic(small_spec(), 14).flood_csv);
    try {
        run_pipeline(config);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "filter");
    }
}

TEST_CASE("write_artifacts removes partial output on failure") {
    fixtures::TempDir dir("partial");
    const auto out = dir.path() / "out";
    std::filesystem::create_directories(out / "b.txt"); // a directory where a file should go
    CHECK_THROWS(write_artifacts(out, {{"a.txt", "x"}, {"b.txt", "y"}}));
    CHECK_FALSE(std::filesystem::exists(out / "a.txt"));
}

TEST_CASE("summary csv round trip and comparisons") {
    const std::vector<SummaryRow> a{{"Binary Logistic Regression", 0.8561, 0.75, 0.55}};
    const std::vector<SummaryRow> b{{"Binary Logistic Regression", 0.8676, 0.75, 0.5833}};
    std::ostringstream out;
    write_summary_csv(out, a);
    CHECK(out.str() == "Model,Accuracy,Precision,Recall\nBinary Logistic Regression,0.8561,0.7500,0.5500\n");
    std::istringstream in(out.str());
    const auto back = read_summary_csv(in);
    CHECK(back[0].accuracy == 0.8561);

    const auto diff = compare_runs(a, b);
    CHECK(diff.warnings.empty());
    CHECK(diff.table.find("+0.0115  B") != std::string::npos);

    const auto self = compare_runs(a, a);
    CHECK(self.table.find("B\n") == std::string::npos);
    CHECK(self.table.find("A\n") == std::string::npos);
    CHECK(self.table.find("+0.0000  =") != std::string::npos);

    const std::vector<SummaryRow> other{{"K-Nearest Neighbors (KNN)", 0.8, 0.5, 0.5}};
    const auto disjoint = compare_runs(a, other);
    CHECK(disjoint.table.empty());
    CHECK(disjoint.warnings.size() == 2);
}
