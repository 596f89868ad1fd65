#include "kgraph/pipeline.hpp"

#include "kgraph/error.hpp"
#include "kgraph/features.hpp"
#include "kgraph/random.hpp"
#include "kgraph/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <variant>

namespace kgraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kSpectralStream = 0x5370656374ULL;
constexpr std::uint64_t kKMeansStream = 0x4b4d65616e73ULL;

struct Job {
    std::size_t length = 0;
    std::size_t replicate = 0;
};

using JobOutcome = std::variant<std::monostate, LengthRun, LengthFailure, std::exception_ptr>;

JobOutcome run_job(const Dataset& dataset, const PipelineOptions& options, const Job& job) {
    LengthRun run;
    run.length = job.length;
    run.replicate = job.replicate;
    run.seed = length_seed(options.seed, job.length, job.replicate);
    try {
        EmbeddingOptions embedding = options.embedding;
        embedding.smpl = options.smpl;
        run.graph = build_graph(dataset, job.length, run.seed, embedding);
    } catch (const DegenerateProjection& e) {
        return LengthFailure{job.length, job.replicate, e.what()};
    } catch (const std::exception& e) {
        return std::make_exception_ptr(
            StageError("embedding", "length " + std::to_string(job.length) + ": " + e.what()));
    }
    try {
        run.partition = cluster_graph(dataset, run.graph, options.k, derive_seed(run.seed, kKMeansStream), options.features);
    } catch (const std::exception& e) {
        return std::make_exception_ptr(
            StageError("graph-clustering", "length " + std::to_string(job.length) + ": " + e.what()));
    }
    return run;
}

} // namespace

std::uint64_t length_seed(std::uint64_t master, std::size_t length, std::size_t replicate) {
    return derive_seed(master, static_cast<std::uint64_t>(length), static_cast<std::uint64_t>(replicate) + 1);
}

PipelineResult fit(const Dataset& dataset, const PipelineOptions& options) {
    try {
        dataset.validate();
    } catch (const Error& e) {
        throw StageError("dataset", e.what());
    }
    if (options.k < 1)
        throw StageError("config", "k must be at least 1");
    if (static_cast<std::size_t>(options.k) > dataset.size())
        throw StageError("config", "k = " + std::to_string(options.k) + " exceeds the number of series " +
                                       std::to_string(dataset.size()));

    PipelineResult result;
    if (options.lengths) {
        if (options.lengths->empty())
            throw StageError("config", "the fixed length list is empty");
        result.lengths = *options.lengths;
        std::sort(result.lengths.begin(), result.lengths.end());
    } else {
        try {
            result.lengths = sample_lengths(dataset, options.m_lengths, options.rml, options.seed);
        } catch (const Error& e) {
            throw StageError("config", e.what());
        }
    }

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < result.lengths.size(); ++i) {
        const std::size_t rep = i == 0 ? 0
                                : (result.lengths[i] == result.lengths[i - 1] ? jobs.back().replicate + 1 : 0);
        jobs.push_back({result.lengths[i], rep});
    }

    const auto graphs_start = Clock::now();
    std::vector<JobOutcome> outcomes(jobs.size());
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, jobs.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            outcomes[i] = run_job(dataset, options, jobs[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++)
                    outcomes[i] = run_job(dataset, options, jobs[i]);
            });
    }
    result.times.graphs = seconds_since(graphs_start);

    std::vector<Partition> partitions;
    for (auto& outcome : outcomes) {
        if (auto* ep = std::get_if<std::exception_ptr>(&outcome))
            std::rethrow_exception(*ep);
        if (auto* failure = std::get_if<LengthFailure>(&outcome)) {
            result.failures.push_back(std::move(*failure));
            continue;
        }
        auto& run = std::get<LengthRun>(outcome);
        partitions.push_back(run.partition);
        result.runs.push_back(std::move(run));
    }
    if (result.runs.empty() || result.failures.size() * 2 > jobs.size()) {
        const std::string first = result.failures.empty() ? "" : ": " + result.failures.front().message;
        throw StageError("embedding", std::to_string(result.failures.size()) + " of " + std::to_string(jobs.size()) +
                                          " lengths failed graph construction" + first);
    }

    const auto consensus_start = Clock::now();
    try {
        result.consensus = consensus_matrix(partitions);
        result.labels = spectral_clustering(result.consensus, options.k, derive_seed(options.seed, kSpectralStream));
    } catch (const Error& e) {
        throw StageError("consensus", e.what());
    }
    result.times.consensus = seconds_since(consensus_start);

    const auto explain_start = Clock::now();
    try {
        std::vector<PatternGraph> graphs;
        // explain() wants contiguous graphs; move them out and back.
        graphs.reserve(result.runs.size());
        for (auto& r : result.runs)
            graphs.push_back(std::move(r.graph));
        std::exception_ptr failure;
        try {
            result.report = explain(graphs, partitions, result.labels, options.report);
        } catch (...) {
            failure = std::current_exception();
        }
        for (std::size_t i = 0; i < graphs.size(); ++i)
            result.runs[i].graph = std::move(graphs[i]);
        if (failure)
            std::rethrow_exception(failure);
    } catch (const Error& e) {
        throw StageError("interpretability", e.what());
    }
    result.times.interpretability = seconds_since(explain_start);
    return result;
}

double mean_noise_ratio(const Dataset& dataset) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& s : dataset.series) {
        try {
            sum += noise_ratio(s);
            ++count;
        } catch (const Error&) {
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

RunOutput execute(const RunConfig& config) {
    const auto start = Clock::now();
    RunOutput out;
    try {
        out.dataset = load_ucr(config.dataset);
        if (config.znormalize)
            out.dataset = znormalized(out.dataset);
    } catch (const Error& e) {
        throw StageError("dataset", e.what());
    }
    out.load_seconds = seconds_since(start);
    out.result = fit(out.dataset, config.pipeline);
    if (out.dataset.labels)
        out.metrics = score_all(*out.dataset.labels, out.result.labels.labels);
    out.total_seconds = seconds_since(start);
    out.report = make_report(out, config);
    return out;
}

nlohmann::json make_report(const RunOutput& output, const RunConfig& config) {
    const auto& opts = config.pipeline;
    nlohmann::json report = report_to_json(output.result.report);
    report["dataset"] = {{"name", output.dataset.name}, {"series", output.dataset.size()},
                         {"min_length", output.dataset.min_length()}, {"max_length", output.dataset.max_length()}};
    report["config"] = {{"k", opts.k},       {"m_lengths", opts.m_lengths}, {"smpl", opts.smpl},
                        {"rml", opts.rml},   {"seed", opts.seed},           {"znormalize", config.znormalize},
                        {"fixed_lengths", opts.lengths.has_value()},
                        {"path_counting", opts.features.counting == PathCounting::transitions ? "transitions" : "occurrences"}};
    report["requested_lengths"] = output.result.lengths;
    nlohmann::json failed = nlohmann::json::array();
    for (const auto& f : output.result.failures)
        failed.push_back({{"length", f.length}, {"replicate", f.replicate}, {"error", f.message}});
    report["failed_lengths"] = std::move(failed);
    if (output.metrics)
        report["metrics"] = metrics_to_json(*output.metrics);
    return report;
}

RunOutput run(const RunConfig& config) {
    RunOutput out = execute(config);
    namespace fs = std::filesystem;
    try {
        fs::create_directories(config.out_dir);
        auto open = [](const fs::path& p) {
            std::ofstream f(p);
            if (!f)
                throw Error("cannot write '" + p.string() + "'");
            return f;
        };
        {
            auto f = open(config.out_dir / "labels.txt");
            for (int l : out.result.labels.labels)
                f << l << '\n';
        }
        open(config.out_dir / "report.json") << out.report.dump(2) << '\n';
        if (config.export_consensus) {
            auto f = open(config.out_dir / "consensus.csv");
            write_consensus_csv(out.result.consensus, f);
        }
        if (config.export_graph || config.export_features) {
            for (const auto& r : out.result.runs) {
                const std::string stem = "l" + std::to_string(r.length) +
                                         (r.replicate > 0 ? "_r" + std::to_string(r.replicate) : "");
                if (config.export_graph)
                    open(config.out_dir / ("graph_" + stem + ".json")) << graph_to_json(r.graph, true).dump() << '\n';
                if (config.export_features) {
                    auto f = open(config.out_dir / ("features_" + stem + ".csv"));
                    write_features_csv(extract_features(out.dataset, r.graph, config.pipeline.features), f);
                }
            }
        }
    } catch (const std::exception& e) {
        throw StageError("output", e.what());
    }
    return out;
}

std::vector<BenchRow> bench(const std::vector<RunConfig>& configs, const std::vector<std::uint64_t>& seeds) {
    if (configs.empty())
        throw Error("bench needs at least one dataset");
    std::vector<BenchRow> rows;
    for (const auto& base : configs) {
        for (std::uint64_t seed : seeds) {
            BenchRow row;
            row.dataset = base.dataset.filename().empty() ? base.dataset.parent_path().filename().string()
                                                          : base.dataset.stem().string();
            row.seed = seed;
            RunConfig config = base;
            config.pipeline.seed = seed;
            try {
                if (config.pipeline.k <= 0) {
                    // Only the class count is read; the pipeline never sees labels.
                    const Dataset probe = load_ucr(config.dataset);
                    if (!probe.labels)
                        throw Error("k not given and dataset has no labels");
                    config.pipeline.k = static_cast<int>(std::set<int>(probe.labels->begin(), probe.labels->end()).size());
                }
                row.k = config.pipeline.k;
                const RunOutput out = execute(config);
                row.status = "ok";
                row.dataset = out.dataset.name;
                row.series = out.dataset.size();
                row.metrics = out.metrics;
                row.noise_ratio = mean_noise_ratio(out.dataset);
                row.selected_length = out.result.report.selected_length;
                const auto& g = out.result.runs[out.result.report.selected_index].graph;
                row.nodes = g.node_count();
                row.edges = g.edge_count();
                row.failed_lengths = out.result.failures.size();
                row.t_load = out.load_seconds;
                row.t_graphs = out.result.times.graphs;
                row.t_consensus = out.result.times.consensus;
                row.t_interpretability = out.result.times.interpretability;
                row.t_total = out.total_seconds;
            } catch (const std::exception& e) {
                row.status = "error";
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "dataset,seed,status,series,k,RI,ARI,AMI,NMI,noise_ratio,selected_length,nodes,edges,failed_lengths,"
           "t_load,t_graphs,t_consensus,t_interpretability,t_total,error\n";
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    for (const auto& r : rows) {
        out << quote(r.dataset) << ',' << r.seed << ',' << r.status << ',' << r.series << ',' << r.k << ',';
        if (r.metrics)
            out << r.metrics->ri << ',' << r.metrics->ari << ',' << r.metrics->ami << ',' << r.metrics->nmi << ',';
        else
            out << ",,,,";
        out << r.noise_ratio << ',' << r.selected_length << ',' << r.nodes << ',' << r.edges << ','
            << r.failed_lengths << ',' << r.t_load << ',' << r.t_graphs << ',' << r.t_consensus << ','
            << r.t_interpretability << ',' << r.t_total << ',' << quote(r.error) << '\n';
    }
}

} // namespace kgraph
