#include "kgraph/features.hpp"

#include "kgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

namespace kgraph {

FeatureMatrix extract_features(const Dataset& dataset, const PatternGraph& graph, const FeatureOptions& options) {
    if (graph.paths.size() != dataset.size())
        throw Error("graph has " + std::to_string(graph.paths.size()) + " paths for " +
                    std::to_string(dataset.size()) + " series");

    const std::size_t nodes = graph.nodes.size();
    std::map<EdgeKey, std::size_t> edge_column;
    FeatureMatrix fm;
    fm.length = graph.length;
    for (std::size_t n = 0; n < nodes; ++n)
        fm.columns.push_back({FeatureKind::node, {static_cast<NodeId>(n), static_cast<NodeId>(n)}});
    const bool merge_runs = options.counting == PathCounting::transitions;
    for (const auto& [key, weight] : graph.edges) {
        if (merge_runs && key.first == key.second)
            continue;
        edge_column.emplace(key, fm.columns.size());
        fm.columns.push_back({FeatureKind::edge, key});
    }
    const std::size_t degree_base = fm.columns.size();
    for (std::size_t n = 0; n < nodes; ++n)
        fm.columns.push_back({FeatureKind::degree, {static_cast<NodeId>(n), static_cast<NodeId>(n)}});

    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t s = 0; s < graph.paths.size(); ++s) {
        std::vector<NodeId> path;
        for (NodeId n : graph.paths[s])
            if (!merge_runs || path.empty() || path.back() != n)
                path.push_back(n);
        std::map<std::size_t, double> row;
        std::set<EdgeKey> distinct;
        for (std::size_t i = 0; i < path.size(); ++i) {
            row[static_cast<std::size_t>(path[i])] += 1.0;
            if (i + 1 < path.size()) {
                const EdgeKey e{path[i], path[i + 1]};
                const auto it = edge_column.find(e);
                if (it == edge_column.end())
                    throw Error("path transition missing from the graph's edge set");
                row[it->second] += 1.0;
                distinct.insert(e);
            }
        }
        // Total degree in the induced subgraph; a self-loop adds 2.
        for (const auto& [src, dst] : distinct) {
            row[degree_base + static_cast<std::size_t>(src)] += 1.0;
            row[degree_base + static_cast<std::size_t>(dst)] += 1.0;
        }
        for (const auto& [col, value] : row)
            triplets.emplace_back(static_cast<int>(s), static_cast<int>(col), value);
    }
    fm.counts.resize(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(fm.columns.size()));
    fm.counts.setFromTriplets(triplets.begin(), triplets.end());
    return fm;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& rows) {
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    if (rows.cols() == 0)
        return out;
    const double width = static_cast<double>(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const double mean = rows.row(r).sum() / width;
        const double sd = std::sqrt((rows.row(r).array() - mean).square().sum() / width);
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
            out.row(r).setZero();
        else
            out.row(r) = (rows.row(r).array() - mean) / sd;
    }
    return out;
}

Eigen::MatrixXd normalize_rows(const FeatureMatrix& features) {
    return normalize_rows(Eigen::MatrixXd(features.counts));
}

Partition cluster_graph(const Dataset& dataset, const PatternGraph& graph, int k, std::uint64_t seed,
                        const FeatureOptions& options) {
    Partition p = kmeans(normalize_rows(extract_features(dataset, graph, options)), k, seed);
    p.length = graph.length;
    return p;
}

void write_features_csv(const FeatureMatrix& features, std::ostream& out) {
    for (std::size_t c = 0; c < features.columns.size(); ++c) {
        const auto& col = features.columns[c];
        if (c > 0)
            out << ',';
        switch (col.kind) {
        case FeatureKind::node: out << 'n' << col.entity.first; break;
        case FeatureKind::edge: out << 'e' << col.entity.first << '-' << col.entity.second; break;
        case FeatureKind::degree: out << 'd' << col.entity.first; break;
        }
    }
    out << '\n';
    const Eigen::MatrixXd dense(features.counts);
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            if (c > 0)
                out << ',';
            out << static_cast<long long>(dense(r, c));
        }
        out << '\n';
    }
}

} // namespace kgraph
