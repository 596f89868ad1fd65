#include "kgraph/error.hpp"
#include "kgraph/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::size_t> parse_lengths(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw kgraph::Error("bad length '" + item + "' in --lengths");
        }
        if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
            throw kgraph::Error("bad length '" + item + "' in --lengths");
        if (v < 1)
            throw kgraph::Error("lengths must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty())
        throw kgraph::Error("--lengths is empty");
    return out;
}

struct Flags {
    kgraph::RunConfig config;
    std::string lengths;
    double lambda = -1.0;
    double gamma = -1.0;
};

void add_common(CLI::App& app, Flags& f, bool k_required) {
    auto& p = f.config.pipeline;
    auto* k = app.add_option("--k", p.k, "number of clusters")->check(CLI::Range(k_required ? 1 : 0, 1 << 20));
    if (k_required)
        k->required();
    app.add_option("--m-lengths", p.m_lengths, "number of subsequence lengths")->check(CLI::PositiveNumber);
    app.add_option("--smpl", p.smpl, "PCA sample rate")->check(CLI::PositiveNumber);
    app.add_option("--rml", p.rml, "maximum length as a fraction of the shortest series")
        ->check(CLI::Range(1e-9, 1.0));
    app.add_option("--workers", p.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--lengths", f.lengths, "comma-separated fixed length list");
    app.add_flag("--znormalize", f.config.znormalize, "z-normalize each series on load");
}

void finish(Flags& f) {
    if (!f.lengths.empty())
        f.config.pipeline.lengths = parse_lengths(f.lengths);
    if (f.lambda >= 0.0)
        f.config.pipeline.report.lambda = f.lambda;
    if (f.gamma >= 0.0)
        f.config.pipeline.report.gamma = f.gamma;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-Graph time series clustering"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run = app.add_subcommand("run", "cluster one dataset and write labels and a report");
    run->add_option("--dataset", run_flags.config.dataset, "UCR tsv file or directory")->required();
    run->add_option("--seed", run_flags.config.pipeline.seed, "master seed");
    run->add_option("--out-dir", run_flags.config.out_dir, "output directory");
    run->add_flag("--export-graph", run_flags.config.export_graph, "write graph_l<length>.json per length");
    run->add_flag("--export-consensus", run_flags.config.export_consensus, "write consensus.csv");
    run->add_flag("--export-features", run_flags.config.export_features, "write raw feature CSVs per length");
    run->add_option("--lambda", run_flags.lambda, "emit lambda-graphoids at this exclusivity threshold")
        ->check(CLI::Range(0.0, 1.0));
    run->add_option("--gamma", run_flags.gamma, "emit gamma-graphoids at this representativity threshold")
        ->check(CLI::Range(0.0, 1.0));
    add_common(*run, run_flags, true);

    Flags bench_flags;
    std::vector<std::string> datasets;
    std::vector<std::uint64_t> seeds{0};
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "run several datasets and seeds, write a CSV summary");
    bench->add_option("--dataset", datasets, "UCR tsv files or directories")->required();
    bench->add_option("--seed", seeds, "master seeds");
    bench->add_option("--out", bench_out, "CSV path (default stdout)");
    bench_flags.config.pipeline.k = 0;
    add_common(*bench, bench_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            finish(run_flags);
            const auto out = kgraph::run(run_flags.config);
            std::cerr << "selected length " << out.result.report.selected_length << ", "
                      << out.result.runs.size() << " lengths";
            if (out.metrics)
                std::cerr << ", ARI " << out.metrics->ari;
            std::cerr << '\n';
        } else {
            finish(bench_flags);
            std::vector<kgraph::RunConfig> configs;
            for (const auto& d : datasets) {
                auto c = bench_flags.config;
                c.dataset = d;
                configs.push_back(std::move(c));
            }
            const auto rows = kgraph::bench(configs, seeds);
            if (bench_out.empty()) {
                kgraph::write_bench_csv(rows, std::cout);
            } else {
                std::ofstream f(bench_out);
                if (!f)
                    throw kgraph::StageError("output", "cannot write '" + bench_out + "'");
                kgraph::write_bench_csv(rows, f);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "kgraph: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
