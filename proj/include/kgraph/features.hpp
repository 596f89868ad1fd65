#pragma once

#include "kgraph/dataset.hpp"
#include "kgraph/embedding.hpp"
#include "kgraph/kmeans.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace kgraph {

enum class FeatureKind { node, edge, degree };

struct FeatureColumn {
    FeatureKind kind = FeatureKind::node;
    // Node id for node/degree columns, edge endpoints for edge columns.
    EdgeKey entity{0, 0};
};

// Per-series graph features: node visit counts, edge traversal counts, and
// node degrees in the subgraph the series' own path induces.
struct FeatureMatrix {
    std::size_t length = 0;
    // |D| x (2|N| + |E|), non-negative integer counts.
    Eigen::SparseMatrix<double, Eigen::RowMajor> counts;
    std::vector<FeatureColumn> columns;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(counts.rows()); }
    std::size_t cols() const noexcept { return columns.size(); }
};

// How a path is read when counting. `occurrences` counts every path position
// and every consecutive pair, self-loops included. `transitions` first merges
// runs of the same node, so a node counts once per visit and only moves
// between distinct nodes count as edges; self-loop columns are omitted.
enum class PathCounting { occurrences, transitions };

struct FeatureOptions {
    PathCounting counting = PathCounting::transitions;
};

FeatureMatrix extract_features(const Dataset& dataset, const PatternGraph& graph, const FeatureOptions& options = {});

// Row-wise z-score of the dense features; zero-variance rows become zeros.
Eigen::MatrixXd normalize_rows(const FeatureMatrix& features);
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& rows);

Partition cluster_graph(const Dataset& dataset, const PatternGraph& graph, int k, std::uint64_t seed,
                        const FeatureOptions& options = {});

// Dense CSV dump with a header naming each column (n<id>, e<src>-<dst>, d<id>).
void write_features_csv(const FeatureMatrix& features, std::ostream& out);

} // namespace kgraph
