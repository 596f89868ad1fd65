#include "kgraph/kmeans.hpp"

#include "kgraph/error.hpp"
#include "kgraph/random.hpp"

#include <limits>
#include <string>

namespace kgraph {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fixed summation order so identical rows always get identical distances.
double squared_distance(const RowMajor& points, Eigen::Index row, const RowMajor& centroids, Eigen::Index c) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        const double d = points(row, j) - centroids(c, j);
        acc += d * d;
    }
    return acc;
}

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
    Eigen::VectorXd closest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = closest.sum();
        Eigen::Index pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += closest(i);
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
        }
        centroids.row(c) = points.row(pick);
        closest = closest.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

struct Run {
    Eigen::MatrixXd centroids;
    std::vector<int> labels;
    double inertia = 0.0;
    int iterations = 0;
};

Run lloyd(const RowMajor& points, const Eigen::VectorXd& norms, Eigen::MatrixXd centroids, int max_iter) {
    const Eigen::Index n = points.rows();
    const Eigen::Index k = centroids.rows();
    Run run;
    run.labels.assign(static_cast<std::size_t>(n), -1);
    Eigen::VectorXd best(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        run.iterations = iter + 1;
        const Eigen::MatrixXd cross = points * centroids.transpose();
        const Eigen::VectorXd cnorms = centroids.rowwise().squaredNorm();
        bool changed = false;
        std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index arg = 0;
            double value = std::numeric_limits<double>::infinity();
            for (Eigen::Index c = 0; c < k; ++c) {
                const double d = norms(i) - 2.0 * cross(i, c) + cnorms(c);
                if (d < value) {
                    value = d;
                    arg = c;
                }
            }
            best(i) = std::max(value, 0.0);
            if (run.labels[static_cast<std::size_t>(i)] != arg) {
                run.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
                changed = true;
            }
            ++sizes[static_cast<std::size_t>(arg)];
        }

        // Refill empty clusters with the point farthest from its centroid.
        for (Eigen::Index c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] != 0)
                continue;
            Eigen::Index far = -1;
            double far_d = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int owner = run.labels[static_cast<std::size_t>(i)];
                if (sizes[static_cast<std::size_t>(owner)] > 1 && best(i) > far_d) {
                    far_d = best(i);
                    far = i;
                }
            }
            if (far < 0)
                continue;
            --sizes[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(far)])];
            run.labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
            ++sizes[static_cast<std::size_t>(c)];
            best(far) = 0.0;
            changed = true;
        }

        if (!changed && iter > 0)
            break;
        RowMajor sums = RowMajor::Zero(k, points.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            sums.row(run.labels[static_cast<std::size_t>(i)]) += points.row(i);
        for (Eigen::Index c = 0; c < k; ++c)
            if (sizes[static_cast<std::size_t>(c)] > 0)
                centroids.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    }
    run.centroids = std::move(centroids);
    return run;
}

} // namespace

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
    for (int l : labels)
        ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

KMeansResult kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    const Eigen::Index n = points.rows();
    if (k < 1)
        throw Error("k must be at least 1");
    if (k > n)
        throw Error("k = " + std::to_string(k) + " exceeds the number of points " + std::to_string(n));
    if (!points.allFinite())
        throw Error("k-means input contains non-finite values");

    const RowMajor rows = points;
    const Eigen::VectorXd norms = rows.rowwise().squaredNorm();
    Run best;
    bool have = false;
    for (int init = 0; init < std::max(options.n_init, 1); ++init) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(init)));
        Run run = lloyd(rows, norms, plus_plus_init(points, k, rng), std::max(options.max_iter, 1));
        const RowMajor centroids = run.centroids;
        run.inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            run.inertia += squared_distance(rows, i, centroids, run.labels[static_cast<std::size_t>(i)]);
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }

    // Final assignment with exact, order-fixed distances.
    KMeansResult result;
    result.partition.k = k;
    result.partition.labels.resize(static_cast<std::size_t>(n));
    result.inertia = 0.0;
    const RowMajor centroids = best.centroids;
    for (Eigen::Index i = 0; i < n; ++i) {
        int arg = 0;
        double value = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < k; ++c) {
            const double d = squared_distance(rows, i, centroids, c);
            if (d < value) {
                value = d;
                arg = static_cast<int>(c);
            }
        }
        result.partition.labels[static_cast<std::size_t>(i)] = arg;
        result.inertia += value;
    }
    result.centroids = std::move(best.centroids);
    result.iterations = best.iterations;
    return result;
}

Partition kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    return kmeans_fit(points, k, seed, options).partition;
}

} // namespace kgraph
