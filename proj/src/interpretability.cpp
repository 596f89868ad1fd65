#include "kgraph/interpretability.hpp"

#include "kgraph/error.hpp"
#include "kgraph/metrics.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace kgraph {

namespace {

void check_partition(const PatternGraph& graph, const Partition& partition) {
    if (partition.size() != graph.paths.size())
        throw Error("partition covers " + std::to_string(partition.size()) + " series, graph has " +
                    std::to_string(graph.paths.size()));
    for (int l : partition.labels)
        if (l < 0 || l >= partition.k)
            throw Error("cluster label " + std::to_string(l) + " outside [0, " + std::to_string(partition.k) + ")");
}

void check_threshold(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0))
        throw Error(std::string(name) + " must lie in [0, 1]");
}

ElementStats element_stats(const std::vector<std::vector<int>>& visits_by_cluster_count, std::size_t elements,
                           const std::vector<std::size_t>& sizes) {
    const auto k = static_cast<Eigen::Index>(sizes.size());
    ElementStats s;
    s.representativity = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(elements), k);
    s.exclusivity = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(elements), k);
    s.visitors.assign(elements, 0);
    for (std::size_t e = 0; e < elements; ++e) {
        std::size_t total = 0;
        for (Eigen::Index c = 0; c < k; ++c)
            total += static_cast<std::size_t>(visits_by_cluster_count[e][static_cast<std::size_t>(c)]);
        s.visitors[e] = total;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double hits = visits_by_cluster_count[e][static_cast<std::size_t>(c)];
            s.representativity(static_cast<Eigen::Index>(e), c) = hits / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
            if (total > 0)
                s.exclusivity(static_cast<Eigen::Index>(e), c) = hits / static_cast<double>(total);
        }
    }
    return s;
}

Graphoid threshold_graphoid(const NodeClusterStats& stats, int cluster, double threshold, bool by_exclusivity) {
    if (cluster < 0 || cluster >= stats.clusters())
        throw Error("cluster index " + std::to_string(cluster) + " out of range");
    Graphoid g;
    const auto& nodes = by_exclusivity ? stats.nodes.exclusivity : stats.nodes.representativity;
    for (Eigen::Index n = 0; n < nodes.rows(); ++n)
        if (stats.nodes.visitors[static_cast<std::size_t>(n)] > 0 && nodes(n, cluster) >= threshold)
            g.nodes.push_back(static_cast<NodeId>(n));
    const auto& edges = by_exclusivity ? stats.edges.exclusivity : stats.edges.representativity;
    for (Eigen::Index e = 0; e < edges.rows(); ++e)
        if (stats.edges.visitors[static_cast<std::size_t>(e)] > 0 && edges(e, cluster) >= threshold)
            g.edges.push_back(stats.edge_keys[static_cast<std::size_t>(e)]);
    return g;
}

} // namespace

NodeClusterStats node_stats(const PatternGraph& graph, const Partition& partition) {
    check_partition(graph, partition);
    NodeClusterStats out;
    out.cluster_sizes = partition.cluster_sizes();
    for (std::size_t c = 0; c < out.cluster_sizes.size(); ++c)
        if (out.cluster_sizes[c] == 0)
            throw Error("empty cluster " + std::to_string(c));

    const auto k = out.cluster_sizes.size();
    std::map<EdgeKey, std::size_t> edge_index;
    for (const auto& [key, weight] : graph.edges) {
        edge_index.emplace(key, out.edge_keys.size());
        out.edge_keys.push_back(key);
    }

    std::vector<std::vector<int>> node_hits(graph.nodes.size(), std::vector<int>(k, 0));
    std::vector<std::vector<int>> edge_hits(out.edge_keys.size(), std::vector<int>(k, 0));
    for (std::size_t s = 0; s < graph.paths.size(); ++s) {
        const auto& path = graph.paths[s];
        const auto c = static_cast<std::size_t>(partition.labels[s]);
        std::set<NodeId> seen_nodes(path.begin(), path.end());
        std::set<std::size_t> seen_edges;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const auto it = edge_index.find({path[i], path[i + 1]});
            if (it == edge_index.end())
                throw Error("path transition missing from the graph's edge set");
            seen_edges.insert(it->second);
        }
        for (NodeId n : seen_nodes)
            ++node_hits[static_cast<std::size_t>(n)][c];
        for (std::size_t e : seen_edges)
            ++edge_hits[e][c];
    }
    out.nodes = element_stats(node_hits, graph.nodes.size(), out.cluster_sizes);
    out.edges = element_stats(edge_hits, out.edge_keys.size(), out.cluster_sizes);
    return out;
}

Graphoid graphoid(const PatternGraph& graph, const Partition& partition, int cluster) {
    check_partition(graph, partition);
    std::set<NodeId> nodes;
    std::set<EdgeKey> edges;
    for (std::size_t s = 0; s < graph.paths.size(); ++s) {
        if (partition.labels[s] != cluster)
            continue;
        const auto& path = graph.paths[s];
        nodes.insert(path.begin(), path.end());
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            edges.insert({path[i], path[i + 1]});
    }
    return {{nodes.begin(), nodes.end()}, {edges.begin(), edges.end()}};
}

Graphoid lambda_graphoid(const NodeClusterStats& stats, int cluster, double lambda) {
    check_threshold(lambda, "lambda");
    return threshold_graphoid(stats, cluster, lambda, true);
}

Graphoid gamma_graphoid(const NodeClusterStats& stats, int cluster, double gamma) {
    check_threshold(gamma, "gamma");
    return threshold_graphoid(stats, cluster, gamma, false);
}

double consistency(const Partition& final_partition, const Partition& per_length) {
    return adjusted_rand_index(final_partition.labels, per_length.labels);
}

double interpretability_factor(const NodeClusterStats& stats) {
    const auto& excl = stats.nodes.exclusivity;
    if (std::none_of(stats.nodes.visitors.begin(), stats.nodes.visitors.end(), [](std::size_t v) { return v > 0; }))
        throw Error("interpretability factor needs at least one visited node");
    double sum = 0.0;
    for (Eigen::Index c = 0; c < excl.cols(); ++c)
        sum += excl.col(c).maxCoeff();
    return sum / static_cast<double>(excl.cols());
}

double interpretability_factor(const PatternGraph& graph, const Partition& partition) {
    return interpretability_factor(node_stats(graph, partition));
}

std::size_t select_length(std::span<const LengthScore> scores) {
    if (scores.empty())
        throw Error("length selection needs at least one scored length");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const double p = scores[i].product();
        const double b = scores[best].product();
        if (p > b || (p == b && scores[i].length < scores[best].length))
            best = i;
    }
    return best;
}

std::vector<Exemplar> exemplar_nodes(const PatternGraph& graph, const NodeClusterStats& stats) {
    std::vector<Exemplar> out;
    const auto& rep = stats.nodes.representativity;
    const auto& excl = stats.nodes.exclusivity;
    for (int c = 0; c < stats.clusters(); ++c) {
        Eigen::Index best = -1;
        double best_score = -1.0;
        for (Eigen::Index n = 0; n < rep.rows(); ++n) {
            if (rep(n, c) <= 0.0)
                continue;
            const double score = rep(n, c) * excl(n, c);
            if (score > best_score) {
                best_score = score;
                best = n;
            }
        }
        if (best < 0)
            throw Error("cluster " + std::to_string(c) + " visits no node");
        Exemplar e;
        e.cluster = c;
        e.node = static_cast<NodeId>(best);
        e.representativity = rep(best, c);
        e.exclusivity = excl(best, c);
        e.centroid = graph.nodes[static_cast<std::size_t>(best)].prototype;
        out.push_back(std::move(e));
    }
    return out;
}

GraphoidReport explain(std::span<const PatternGraph> graphs, std::span<const Partition> partitions,
                       const Partition& final_partition, const ReportOptions& options) {
    if (graphs.size() != partitions.size())
        throw Error("one partition per graph is required");
    if (graphs.empty())
        throw Error("explanation needs at least one graph");
    if (options.lambda)
        check_threshold(*options.lambda, "lambda");
    if (options.gamma)
        check_threshold(*options.gamma, "gamma");

    GraphoidReport report;
    report.lambda = options.lambda;
    report.gamma = options.gamma;
    std::vector<NodeClusterStats> stats;
    stats.reserve(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        stats.push_back(node_stats(graphs[i], final_partition));
        report.lengths.push_back(
            {graphs[i].length, consistency(final_partition, partitions[i]), interpretability_factor(stats.back())});
    }
    report.selected_index = select_length(report.lengths);
    report.selected_length = report.lengths[report.selected_index].length;

    const auto& graph = graphs[report.selected_index];
    const auto& chosen = stats[report.selected_index];
    for (auto& ex : exemplar_nodes(graph, chosen)) {
        ClusterExplanation ce;
        ce.size = chosen.cluster_sizes[static_cast<std::size_t>(ex.cluster)];
        if (options.lambda)
            ce.lambda_graphoid = lambda_graphoid(chosen, ex.cluster, *options.lambda);
        if (options.gamma)
            ce.gamma_graphoid = gamma_graphoid(chosen, ex.cluster, *options.gamma);
        ce.exemplar = std::move(ex);
        report.clusters.push_back(std::move(ce));
    }
    return report;
}

} // namespace kgraph
