#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace kgraph {

struct Partition {
    std::vector<int> labels;
    int k = 0;
    // Subsequence length that produced it; empty for the consensus partition.
    std::optional<std::size_t> length;

    std::size_t size() const noexcept { return labels.size(); }
    std::vector<std::size_t> cluster_sizes() const;
};

struct KMeansOptions {
    int n_init = 10;
    int max_iter = 300;
};

struct KMeansResult {
    Partition partition;
    Eigen::MatrixXd centroids;
    double inertia = 0.0;
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
// inertia wins.
KMeansResult kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

Partition kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

} // namespace kgraph
