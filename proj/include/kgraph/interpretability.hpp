#pragma once

#include "kgraph/embedding.hpp"
#include "kgraph/kmeans.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace kgraph {

// Rows are graph elements (nodes or edges), columns are clusters.
struct ElementStats {
    // Fraction of the cluster's series that visit the element.
    Eigen::MatrixXd representativity;
    // Fraction of the element's visitors that belong to the cluster; 0 for
    // elements nobody visits.
    Eigen::MatrixXd exclusivity;
    // Number of distinct series visiting each element.
    std::vector<std::size_t> visitors;
};

struct NodeClusterStats {
    std::vector<std::size_t> cluster_sizes;
    ElementStats nodes;
    std::vector<EdgeKey> edge_keys;
    ElementStats edges;

    int clusters() const noexcept { return static_cast<int>(cluster_sizes.size()); }
};

NodeClusterStats node_stats(const PatternGraph& graph, const Partition& partition);

struct Graphoid {
    std::vector<NodeId> nodes;
    std::vector<EdgeKey> edges;

    bool operator==(const Graphoid&) const = default;
};

// Every node and edge crossed by at least one series of the cluster.
Graphoid graphoid(const PatternGraph& graph, const Partition& partition, int cluster);
// Visited elements whose exclusivity for the cluster is at least lambda.
Graphoid lambda_graphoid(const NodeClusterStats& stats, int cluster, double lambda);
// Visited elements whose representativity for the cluster is at least gamma.
Graphoid gamma_graphoid(const NodeClusterStats& stats, int cluster, double gamma);

double consistency(const Partition& final_partition, const Partition& per_length);
double interpretability_factor(const NodeClusterStats& stats);
double interpretability_factor(const PatternGraph& graph, const Partition& partition);

struct LengthScore {
    std::size_t length = 0;
    double consistency = 0.0;
    double interpretability = 0.0;

    // Consistency is clamped at 0 so a negative ARI cannot win.
    double product() const noexcept { return interpretability * std::max(consistency, 0.0); }
};

// Index of the best-scoring entry; ties go to the smaller length, then the
// earlier entry.
std::size_t select_length(std::span<const LengthScore> scores);

struct Exemplar {
    int cluster = 0;
    NodeId node = 0;
    double representativity = 0.0;
    double exclusivity = 0.0;
    // Pointwise mean of every subsequence assigned to the node.
    std::vector<double> centroid;
};

std::vector<Exemplar> exemplar_nodes(const PatternGraph& graph, const NodeClusterStats& stats);

struct ClusterExplanation {
    Exemplar exemplar;
    std::size_t size = 0;
    std::optional<Graphoid> lambda_graphoid;
    std::optional<Graphoid> gamma_graphoid;
};

struct GraphoidReport {
    std::vector<LengthScore> lengths;
    std::size_t selected_index = 0;
    std::size_t selected_length = 0;
    std::vector<ClusterExplanation> clusters;
    std::optional<double> lambda;
    std::optional<double> gamma;
};

struct ReportOptions {
    std::optional<double> lambda;
    std::optional<double> gamma;
};

// Scores every length against the final partition, picks the best graph and
// explains each cluster with it. `graphs[i]` produced `partitions[i]`.
GraphoidReport explain(std::span<const PatternGraph> graphs, std::span<const Partition> partitions,
                       const Partition& final_partition, const ReportOptions& options = {});

} // namespace kgraph
