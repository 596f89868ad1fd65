#include "kgraph/consensus.hpp"

#include "kgraph/error.hpp"
#include "kgraph/random.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace kgraph {

ConsensusMatrix consensus_matrix(std::span<const Partition> partitions) {
    if (partitions.empty())
        throw Error("consensus needs at least one partition");
    const std::size_t n = partitions.front().size();
    Eigen::MatrixXi agree = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& p : partitions) {
        if (p.size() != n)
            throw Error("partition sizes differ: " + std::to_string(p.size()) + " vs " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                if (p.labels[i] == p.labels[j]) {
                    ++agree(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                    if (i != j)
                        ++agree(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
                }
    }
    ConsensusMatrix out;
    out.partitions = partitions.size();
    out.values = agree.cast<double>() / static_cast<double>(partitions.size());
    return out;
}

namespace {

Eigen::MatrixXd normalized_affinity(const Eigen::MatrixXd& affinity, double floor) {
    const Eigen::VectorXd degree = affinity.rowwise().sum().cwiseMax(floor);
    const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    return inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Top eigenpairs of the shifted operator S + I (spectrum in [0, 2]) by block
// subspace iteration with Rayleigh-Ritz extraction.
SpectralEmbedding subspace_iteration(const Eigen::MatrixXd& s, int count, std::uint64_t seed) {
    const Eigen::Index n = s.rows();
    const Eigen::Index block = std::min<Eigen::Index>(n, count + 8);
    const Eigen::MatrixXd shifted = s + Eigen::MatrixXd::Identity(n, n);
    Rng rng(seed);
    Eigen::MatrixXd q(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            q(i, j) = rng.normal();
    q = orthonormalize(q);

    Eigen::VectorXd previous = Eigen::VectorXd::Constant(count, -1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
    for (int iter = 0; iter < 5000; ++iter) {
        q = orthonormalize(shifted * q);
        const Eigen::MatrixXd h = q.transpose() * shifted * q;
        ritz.compute(h);
        const Eigen::VectorXd top = ritz.eigenvalues().tail(count).reverse();
        if ((top - previous).cwiseAbs().maxCoeff() < 1e-13 && iter > 10)
            break;
        previous = top;
    }
    SpectralEmbedding out;
    out.vectors.resize(n, count);
    out.eigenvalues.resize(count);
    for (int c = 0; c < count; ++c) {
        const Eigen::Index col = block - 1 - c;
        out.vectors.col(c) = q * ritz.eigenvectors().col(col);
        out.eigenvalues(c) = 2.0 - ritz.eigenvalues()(col);
    }
    return out;
}

} // namespace

SpectralEmbedding laplacian_eigenvectors(const Eigen::MatrixXd& affinity, int count, std::uint64_t seed,
                                         const SpectralOptions& options) {
    const Eigen::Index n = affinity.rows();
    const Eigen::MatrixXd s = normalized_affinity(affinity, options.degree_floor);
    if (static_cast<std::size_t>(n) > options.dense_limit)
        return subspace_iteration(s, count, seed);

    const Eigen::MatrixXd laplacian = Eigen::MatrixXd::Identity(n, n) - s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success)
        throw Error("Laplacian eigendecomposition did not converge");
    return {solver.eigenvectors().leftCols(count), solver.eigenvalues().head(count)};
}

Partition spectral_clustering(const ConsensusMatrix& affinity, int k, std::uint64_t seed,
                              const SpectralOptions& options) {
    const auto n = static_cast<int>(affinity.size());
    if (k < 1)
        throw Error("k must be at least 1");
    if (k > n)
        throw Error("k = " + std::to_string(k) + " exceeds the number of series " + std::to_string(n));
    if (affinity.values.rows() != affinity.values.cols())
        throw Error("consensus matrix must be square");

    Eigen::MatrixXd embedding = laplacian_eigenvectors(affinity.values, k, derive_seed(seed, 1), options).vectors;
    for (Eigen::Index r = 0; r < embedding.rows(); ++r) {
        const double norm = embedding.row(r).norm();
        if (norm > 0.0)
            embedding.row(r) /= norm;
    }
    return kmeans(embedding, k, derive_seed(seed, 2), options.kmeans);
}

void write_consensus_csv(const ConsensusMatrix& matrix, std::ostream& out) {
    const auto precision = out.precision(17);
    for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
            if (j > 0)
                out << ',';
            out << matrix.values(i, j);
        }
        out << '\n';
    }
    out.precision(precision);
}

} // namespace kgraph
