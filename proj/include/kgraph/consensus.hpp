#pragma once

#include "kgraph/kmeans.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>

namespace kgraph {

// Fraction of partitions in which each pair of series shares a cluster.
struct ConsensusMatrix {
    Eigen::MatrixXd values;
    std::size_t partitions = 0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

ConsensusMatrix consensus_matrix(std::span<const Partition> partitions);

struct SpectralOptions {
    // Largest matrix handled by the dense eigensolver; bigger ones use
    // subspace iteration.
    std::size_t dense_limit = 4000;
    double degree_floor = 1e-12;
    KMeansOptions kmeans;
};

// Normalized spectral embedding of the affinity, clustered with k-means.
Partition spectral_clustering(const ConsensusMatrix& affinity, int k, std::uint64_t seed,
                              const SpectralOptions& options = {});

// Eigenvectors for the `count` smallest eigenvalues of
// I - D^-1/2 W D^-1/2, one per column, with their eigenvalues.
struct SpectralEmbedding {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd eigenvalues;
};
SpectralEmbedding laplacian_eigenvectors(const Eigen::MatrixXd& affinity, int count, std::uint64_t seed,
                                         const SpectralOptions& options = {});

void write_consensus_csv(const ConsensusMatrix& matrix, std::ostream& out);

} // namespace kgraph
