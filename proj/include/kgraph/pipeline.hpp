#pragma once

#include "kgraph/consensus.hpp"
#include "kgraph/dataset.hpp"
#include "kgraph/embedding.hpp"
#include "kgraph/features.hpp"
#include "kgraph/interpretability.hpp"
#include "kgraph/kmeans.hpp"
#include "kgraph/metrics.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kgraph {

struct PipelineOptions {
    int k = 2;
    std::size_t m_lengths = 30;
    std::size_t smpl = 10;
    double rml = 0.4;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    // Replaces the sampled length set when present.
    std::optional<std::vector<std::size_t>> lengths;
    EmbeddingOptions embedding;
    FeatureOptions features;
    ReportOptions report;
};

struct LengthRun {
    std::size_t length = 0;
    // Occurrence index of `length` among equal lengths in the set.
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    PatternGraph graph;
    Partition partition;
};

struct LengthFailure {
    std::size_t length = 0;
    std::size_t replicate = 0;
    std::string message;
};

struct StageTimes {
    double graphs = 0.0;
    double consensus = 0.0;
    double interpretability = 0.0;
};

struct PipelineResult {
    // Canonical (ascending) length set, including lengths that failed.
    std::vector<std::size_t> lengths;
    // Successful lengths in canonical order.
    std::vector<LengthRun> runs;
    std::vector<LengthFailure> failures;
    ConsensusMatrix consensus;
    Partition labels;
    GraphoidReport report;
    StageTimes times;
};

// The full clustering pipeline: one graph and k-means partition per length,
// consensus, spectral clustering, then graph selection and explanation.
// Errors are rethrown as StageError naming the failing stage.
PipelineResult fit(const Dataset& dataset, const PipelineOptions& options);

// Stable per-length seed so replicated lengths differ.
std::uint64_t length_seed(std::uint64_t master, std::size_t length, std::size_t replicate);

struct RunConfig {
    std::filesystem::path dataset;
    PipelineOptions pipeline;
    bool znormalize = false;
    std::filesystem::path out_dir = ".";
    bool export_graph = false;
    bool export_consensus = false;
    bool export_features = false;
};

struct RunOutput {
    Dataset dataset;
    PipelineResult result;
    std::optional<MetricScores> metrics;
    nlohmann::json report;
    double load_seconds = 0.0;
    double total_seconds = 0.0;
};

// Loads, fits, and evaluates without touching the filesystem beyond the load.
RunOutput execute(const RunConfig& config);

// execute() plus artifacts in out_dir: labels.txt, report.json, and the
// requested exports.
RunOutput run(const RunConfig& config);

nlohmann::json make_report(const RunOutput& output, const RunConfig& config);

struct BenchRow {
    std::string dataset;
    std::uint64_t seed = 0;
    std::string status;
    std::string error;
    std::size_t series = 0;
    int k = 0;
    std::optional<MetricScores> metrics;
    double noise_ratio = 0.0;
    std::size_t selected_length = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t failed_lengths = 0;
    double t_load = 0.0;
    double t_graphs = 0.0;
    double t_consensus = 0.0;
    double t_interpretability = 0.0;
    double t_total = 0.0;
};

// One row per (config, seed); failures become rows with status "error".
// A config with k <= 0 takes k from the dataset's label count.
std::vector<BenchRow> bench(const std::vector<RunConfig>& configs, const std::vector<std::uint64_t>& seeds);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

// Mean noise ratio over the non-constant series.
double mean_noise_ratio(const Dataset& dataset);

} // namespace kgraph
