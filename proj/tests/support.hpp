#pragma once

#include "kgraph/dataset.hpp"
#include "kgraph/embedding.hpp"
#include "kgraph/random.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace testing {

// Series built from a few noisy shape families so graphs are non-trivial.
inline kgraph::Dataset random_dataset(kgraph::Rng& rng, std::size_t count, std::size_t min_len, std::size_t max_len,
                                      int families = 2) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < count; ++i) {
        const int family = static_cast<int>(rng.index(static_cast<std::size_t>(families)));
        const std::size_t len = min_len + rng.index(max_len - min_len + 1);
        const double phase = rng.uniform() * 2.0 * std::numbers::pi;
        const double period = 6.0 + 4.0 * family;
        std::vector<double> row(len);
        for (std::size_t t = 0; t < len; ++t)
            row[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase) * (1.0 + family) +
                     0.2 * rng.normal();
        rows.push_back(std::move(row));
        labels.push_back(family);
    }
    return kgraph::make_dataset(std::move(rows), std::move(labels), "random");
}

inline std::vector<int> random_labels(kgraph::Rng& rng, std::size_t n, int k) {
    std::vector<int> out(n);
    for (auto& l : out)
        l = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
    return out;
}

// Graph whose edges are exactly the transitions of the given paths.
inline kgraph::PatternGraph graph_from_paths(const std::vector<std::vector<kgraph::NodeId>>& paths, int nodes,
                                             std::size_t length = 5) {
    kgraph::PatternGraph g;
    g.length = length;
    for (int n = 0; n < nodes; ++n) {
        kgraph::PatternNode node;
        node.id = n;
        node.prototype.assign(length, static_cast<double>(n));
        g.nodes.push_back(node);
    }
    g.paths = paths;
    for (const auto& p : paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            ++g.edges[{p[i], p[i + 1]}];
    return g;
}

inline kgraph::PatternGraph random_graph(kgraph::Rng& rng, std::size_t series, int nodes, std::size_t path_len) {
    std::vector<std::vector<kgraph::NodeId>> paths(series);
    for (auto& p : paths)
        for (std::size_t i = 0; i < path_len; ++i)
            p.push_back(static_cast<kgraph::NodeId>(rng.index(static_cast<std::size_t>(nodes))));
    return graph_from_paths(paths, nodes);
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("kgraph_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
