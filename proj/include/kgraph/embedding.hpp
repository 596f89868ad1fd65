#pragma once

#include "kgraph/dataset.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace kgraph {

using NodeId = int;
using EdgeKey = std::pair<NodeId, NodeId>;
using Point2 = std::array<double, 2>;

// 2-D shape space of every subsequence of one length.
struct ShapeProjection {
    std::size_t length = 0;
    // One point per subsequence, grouped by series, then by start offset.
    std::vector<Point2> points2d;
    // points2d[series_offsets[s] .. series_offsets[s + 1]) belong to series s.
    std::vector<std::size_t> series_offsets;
    // Indices into points2d used to fit the PCA and to create the nodes.
    std::vector<std::size_t> sample;
    Eigen::VectorXd mean;
    // 3 x length, orthonormal rows.
    Eigen::MatrixXd components;
    Eigen::Matrix3d rotation;

    std::size_t series_count() const noexcept { return series_offsets.empty() ? 0 : series_offsets.size() - 1; }

    // Maps a raw subsequence to shape space.
    Point2 project(std::span<const double> values) const;
};

struct PatternNode {
    NodeId id = 0;
    int angular_bin = 0;
    double radius = 0.0;
    // Centroid of the member subsequences (empty until members are assigned).
    std::vector<double> prototype;
    std::size_t member_count = 0;
};

struct PatternGraph {
    std::size_t length = 0;
    std::vector<PatternNode> nodes;
    std::map<EdgeKey, std::size_t> edges;
    // Node sequence of every series, |T| - length + 1 entries each.
    std::vector<std::vector<NodeId>> paths;
    ShapeProjection projection;

    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t edge_count() const noexcept { return edges.size(); }
};

enum class Bandwidth { scott, silverman };

struct EmbeddingOptions {
    std::size_t smpl = 10;
    int angular_bins = 60;
    Bandwidth bandwidth = Bandwidth::scott;
    int kde_grid = 200;
    // Above this subsequence length the PCA switches to randomized SVD.
    std::size_t exact_pca_limit = 256;
};

// M lengths drawn from [5, floor(min|T| * rml)], sorted ascending.
std::vector<std::size_t> sample_lengths(const Dataset& dataset, std::size_t count, double rml,
                                        std::uint64_t seed);

ShapeProjection fit_projection(const Dataset& dataset, std::size_t length, std::size_t smpl,
                               std::uint64_t seed, std::size_t exact_pca_limit = 256);

// Nodes from the density maxima of the sampled points along each angular bin.
// Prototypes and member counts are left empty; see build_graph.
std::vector<PatternNode> create_nodes(const ShapeProjection& projection, int angular_bins = 60,
                                      Bandwidth bandwidth = Bandwidth::scott, int grid = 200);

struct Transitions {
    std::map<EdgeKey, std::size_t> edges;
    std::vector<std::vector<NodeId>> paths;
};

// Assigns every subsequence to a node and counts consecutive transitions.
Transitions create_edges(const ShapeProjection& projection, const std::vector<PatternNode>& nodes,
                         int angular_bins = 60);

PatternGraph build_graph(const Dataset& dataset, std::size_t length, std::size_t smpl, std::uint64_t seed);
PatternGraph build_graph(const Dataset& dataset, std::size_t length, std::uint64_t seed,
                         const EmbeddingOptions& options);

// Angular bin of a 2-D point, or -1 at the origin.
int angular_bin_of(const Point2& p, int angular_bins);

// Gaussian KDE of `samples` evaluated on `grid`, unnormalized.
std::vector<double> kde_evaluate(std::span<const double> samples, std::span<const double> grid,
                                 double bandwidth);
double kde_bandwidth(std::span<const double> samples, Bandwidth rule);

} // namespace kgraph
