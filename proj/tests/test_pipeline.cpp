#include "kgraph/error.hpp"
#include "kgraph/pipeline.hpp"
#include "kgraph/serialize.hpp"
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

using namespace kgraph;

namespace {

const std::filesystem::path kData = KGRAPH_DATA_DIR;

PipelineOptions small_options(std::uint64_t seed = 0) {
    PipelineOptions o;
    o.k = 2;
    o.m_lengths = 6;
    o.seed = seed;
    return o;
}

std::string report_text(const Dataset& d, const PipelineOptions& o) {
    RunOutput out;
    out.dataset = d;
    out.result = fit(d, o);
    RunConfig c;
    c.pipeline = o;
    return make_report(out, c).dump(2);
}

std::string stage_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const StageError& e) {
        return e.stage();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("same seed gives a byte-identical report") {
    Rng rng(4);
    const Dataset d = testing::random_dataset(rng, 30, 60, 80);
    CHECK(report_text(d, small_options(7)) == report_text(d, small_options(7)));
}

TEST_CASE("worker count does not change the result") {
    Rng rng(5);
    const Dataset d = testing::random_dataset(rng, 30, 60, 80);
    auto one = small_options(3);
    auto many = one;
    many.workers = 4;
    const auto a = fit(d, one), b = fit(d, many);
    CHECK(a.labels.labels == b.labels.labels);
    CHECK(a.consensus.values == b.consensus.values);
    CHECK(a.lengths == b.lengths);
    CHECK(report_to_json(a.report) == report_to_json(b.report));
}

TEST_CASE("fixed lengths replace the sampled set") {
    Rng rng(6);
    const Dataset d = testing::random_dataset(rng, 20, 50, 50);
    auto o = small_options();
    o.lengths = std::vector<std::size_t>{20, 8, 12, 12};
    const auto r = fit(d, o);
    CHECK(r.lengths == std::vector<std::size_t>{8, 12, 12, 20});
    REQUIRE(r.runs.size() == 4);
    CHECK(r.runs[1].replicate == 0);
    CHECK(r.runs[2].replicate == 1);
    // Replicated lengths get different seeds.
    CHECK(r.runs[1].seed != r.runs[2].seed);
    CHECK(r.runs[1].seed == length_seed(0, 12, 0));
    o.lengths = std::vector<std::size_t>{};
    CHECK(stage_of([&] { fit(d, o); }) == "config");
}

TEST_CASE("errors carry the stage") {
    Rng rng(9);
    const Dataset d = testing::random_dataset(rng, 10, 40, 40);
    auto o = small_options();
    o.k = 11;
    CHECK(stage_of([&] { fit(d, o); }) == "config");
    o.k = 2;
    o.lengths = std::vector<std::size_t>{60};
    CHECK(stage_of([&] { fit(d, o); }) == "embedding");
    Dataset bad = d;
    bad.series[3].values[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK(stage_of([&] { fit(bad, small_options()); }) == "dataset");
    RunConfig c;
    c.dataset = "/nonexistent/file.tsv";
    CHECK(stage_of([&] { execute(c); }) == "dataset");
}

TEST_CASE("degenerate lengths are skipped until half fail") {
    // Identical series make every full-length window identical.
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> row(20);
        for (std::size_t t = 0; t < row.size(); ++t)
            row[t] = std::sin(0.7 * static_cast<double>(t)) + 0.1 * static_cast<double>(t % 3);
        rows.push_back(row);
    }
    const Dataset d = make_dataset(rows);
    auto o = small_options();
    o.smpl = 1;
    o.lengths = std::vector<std::size_t>{8, 10, 20};
    const auto r = fit(d, o);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].length == 20);
    CHECK(r.runs.size() == 2);
    CHECK(r.labels.size() == 6);
    o.lengths = std::vector<std::size_t>{8, 20, 20};
    CHECK(stage_of([&] { fit(d, o); }) == "embedding");
}

TEST_CASE("trace run has the expected shape") {
    const auto path = kData / "Trace";
    if (!std::filesystem::exists(path))
        return;
    RunConfig c;
    c.dataset = path;
    c.pipeline.k = 4;
    const auto out = execute(c);
    CHECK(out.result.labels.size() == 200);
    for (int l : out.result.labels.labels)
        CHECK((l >= 0 && l < 4));
    CHECK(out.result.report.clusters.size() == 4);
    REQUIRE(out.metrics.has_value());
    CHECK(out.report["metrics"]["ARI"] == out.metrics->ari);
    CHECK(out.report["dataset"]["series"] == 200);
}

TEST_CASE("run writes its artifacts") {
    Rng rng(12);
    const Dataset d = testing::random_dataset(rng, 16, 40, 40);
    const auto dir = testing::temp_dir("pipeline_run");
    save_ucr_tsv(d, dir / "toy.tsv");
    RunConfig c;
    c.dataset = dir / "toy.tsv";
    c.out_dir = dir / "out";
    c.pipeline = small_options();
    c.pipeline.lengths = std::vector<std::size_t>{9, 9, 14};
    c.pipeline.report.lambda = 0.7;
    c.export_graph = c.export_consensus = c.export_features = true;
    const auto out = run(c);
    std::istringstream labels(slurp(c.out_dir / "labels.txt"));
    std::vector<int> read;
    for (int l; labels >> l;)
        read.push_back(l);
    CHECK(read == out.result.labels.labels);
    const auto report = nlohmann::json::parse(slurp(c.out_dir / "report.json"));
    CHECK(report == out.report);
    CHECK(report["config"]["fixed_lengths"] == true);
    CHECK(report["clusters"][0].contains("lambda_graphoid"));
    CHECK_FALSE(report["clusters"][0].contains("gamma_graphoid"));
    CHECK(std::filesystem::exists(c.out_dir / "consensus.csv"));
    for (const char* stem : {"l9", "l9_r1", "l14"}) {
        CHECK(std::filesystem::exists(c.out_dir / ("graph_" + std::string(stem) + ".json")));
        CHECK(std::filesystem::exists(c.out_dir / ("features_" + std::string(stem) + ".csv")));
    }
    const auto graph = nlohmann::json::parse(slurp(c.out_dir / "graph_l14.json"));
    CHECK(graph["length"] == 14);
    CHECK(graph["paths"].size() == 16);
}

TEST_CASE("bench covers every dataset and seed") {
    Rng rng(13);
    const auto dir = testing::temp_dir("pipeline_bench");
    std::vector<RunConfig> configs;
    for (int i = 0; i < 3; ++i) {
        const auto file = dir / ("set" + std::to_string(i) + ".tsv");
        save_ucr_tsv(testing::random_dataset(rng, 14, 40, 50, 2 + i), file);
        RunConfig c;
        c.dataset = file;
        c.pipeline = small_options();
        c.pipeline.k = 0;
        c.pipeline.m_lengths = 4;
        configs.push_back(c);
    }
    RunConfig missing;
    missing.dataset = dir / "missing.tsv";
    missing.pipeline.k = 2;
    configs.push_back(missing);
    const auto rows = bench(configs, {0, 1, 2});
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 0; i < 9; ++i) {
        const auto& r = rows[i];
        CHECK(r.status == "ok");
        CHECK(r.metrics.has_value());
        CHECK(r.noise_ratio > 0.0);
        CHECK(r.k >= 2);
        const double stages = r.t_load + r.t_graphs + r.t_consensus + r.t_interpretability;
        CHECK(stages <= r.t_total * 1.05 + 1e-4);
        CHECK(stages >= r.t_total * 0.95 - 1e-3);
    }
    for (std::size_t i = 9; i < 12; ++i) {
        CHECK(rows[i].status == "error");
        CHECK(rows[i].error.find("[dataset]") != std::string::npos);
    }
    std::ostringstream csv;
    write_bench_csv(rows, csv);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header.find("noise_ratio") != std::string::npos);
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line);)
        ++count;
    CHECK(count == 12);
}
