#include "kgraph/embedding.hpp"

#include "kgraph/error.hpp"
#include "kgraph/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace kgraph {

namespace {

constexpr std::size_t kPcaComponents = 3;

std::size_t series_of(const std::vector<std::size_t>& offsets, std::size_t index) {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
}

// Largest-magnitude entry of each row made positive.
void fix_signs(Eigen::MatrixXd& rows) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        Eigen::Index arg = 0;
        rows.row(r).cwiseAbs().maxCoeff(&arg);
        if (rows(r, arg) < 0.0)
            rows.row(r) *= -1.0;
    }
}

Eigen::MatrixXd top_components_exact(const Eigen::MatrixXd& centered) {
    const double denom = static_cast<double>(std::max<Eigen::Index>(centered.rows() - 1, 1));
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw Error("PCA eigendecomposition did not converge");
    const Eigen::Index n = cov.rows();
    Eigen::MatrixXd out(kPcaComponents, n);
    // Eigenvalues come in increasing order.
    for (std::size_t c = 0; c < kPcaComponents; ++c)
        out.row(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(n - 1 - static_cast<Eigen::Index>(c)).transpose();
    return out;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Randomized range finder with power iterations, then an exact SVD of the
// small projected matrix.
Eigen::MatrixXd top_components_randomized(const Eigen::MatrixXd& centered, std::uint64_t seed) {
    constexpr Eigen::Index kOversample = 10;
    constexpr int kPowerIterations = 4;
    const Eigen::Index width = std::min<Eigen::Index>(static_cast<Eigen::Index>(kPcaComponents) + kOversample,
                                                      std::min(centered.rows(), centered.cols()));
    Rng rng(seed);
    Eigen::MatrixXd omega(centered.cols(), width);
    for (Eigen::Index j = 0; j < omega.cols(); ++j)
        for (Eigen::Index i = 0; i < omega.rows(); ++i)
            omega(i, j) = rng.normal();
    Eigen::MatrixXd q = orthonormal_columns(centered * omega);
    for (int it = 0; it < kPowerIterations; ++it) {
        const Eigen::MatrixXd z = orthonormal_columns(centered.transpose() * q);
        q = orthonormal_columns(centered * z);
    }
    const Eigen::MatrixXd small = q.transpose() * centered;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(small, Eigen::ComputeThinV);
    Eigen::MatrixXd out(kPcaComponents, centered.cols());
    for (std::size_t c = 0; c < kPcaComponents; ++c)
        out.row(static_cast<Eigen::Index>(c)) = svd.matrixV().col(static_cast<Eigen::Index>(c)).transpose();
    return out;
}

// Rotation taking `axis` onto e3.
Eigen::Matrix3d rotation_to_z(const Eigen::Vector3d& axis) {
    const double norm = axis.norm();
    if (!(norm > 1e-12))
        return Eigen::Matrix3d::Identity();
    const Eigen::Vector3d a = axis / norm;
    const Eigen::Vector3d b = Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d v = a.cross(b);
    const double c = a.dot(b);
    const double s = v.norm();
    if (s < 1e-12) {
        if (c > 0.0)
            return Eigen::Matrix3d::Identity();
        return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
    }
    Eigen::Matrix3d k;
    k << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return Eigen::Matrix3d::Identity() + k + k * k * ((1.0 - c) / (s * s));
}

double bin_center_angle(int bin, int bins) {
    return (static_cast<double>(bin) + 0.5) * 2.0 * std::numbers::pi / static_cast<double>(bins);
}

Point2 node_position(const PatternNode& node, int bins) {
    const double theta = bin_center_angle(node.angular_bin, bins);
    return {node.radius * std::cos(theta), node.radius * std::sin(theta)};
}

} // namespace

Point2 ShapeProjection::project(std::span<const double> values) const {
    const Eigen::Map<const Eigen::VectorXd> x(values.data(), static_cast<Eigen::Index>(values.size()));
    const Eigen::Vector3d y = rotation * (components * (x - mean));
    return {y.x(), y.y()};
}

std::vector<std::size_t> sample_lengths(const Dataset& dataset, std::size_t count, double rml,
                                        std::uint64_t seed) {
    if (count < 1)
        throw Error("number of lengths must be at least 1");
    if (!(rml > 0.0 && rml <= 1.0))
        throw Error("rml must lie in (0, 1]");
    const double bound = std::floor(static_cast<double>(dataset.min_length()) * rml + 1e-9);
    if (bound < static_cast<double>(kMinSeriesLength))
        throw Error("series too short for rml: upper length bound " + std::to_string(static_cast<long>(bound)) +
                    " < " + std::to_string(kMinSeriesLength));
    const auto upper = static_cast<std::size_t>(bound);
    const std::size_t span = upper - kMinSeriesLength + 1;

    Rng rng(seed);
    std::vector<std::size_t> lengths;
    if (span >= count) {
        for (std::size_t v : rng.sample_without_replacement(span, count))
            lengths.push_back(kMinSeriesLength + v);
    } else {
        for (std::size_t i = 0; i < count; ++i)
            lengths.push_back(kMinSeriesLength + rng.index(span));
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

ShapeProjection fit_projection(const Dataset& dataset, std::size_t length, std::size_t smpl,
                               std::uint64_t seed, std::size_t exact_pca_limit) {
    if (smpl < 1)
        throw Error("sample rate must be at least 1");
    if (length < kMinSeriesLength || length > dataset.min_length())
        throw Error("subsequence length " + std::to_string(length) + " outside [" +
                    std::to_string(kMinSeriesLength) + ", " + std::to_string(dataset.min_length()) + "]");

    ShapeProjection proj;
    proj.length = length;
    proj.series_offsets.reserve(dataset.size() + 1);
    proj.series_offsets.push_back(0);
    for (const auto& s : dataset.series)
        proj.series_offsets.push_back(proj.series_offsets.back() + s.size() - length + 1);
    const std::size_t total = proj.series_offsets.back();
    if (total < 3)
        throw Error("fewer than 3 subsequences of length " + std::to_string(length));

    const std::size_t wanted = std::min(total, std::max<std::size_t>(3, total / smpl));
    Rng rng(seed);
    proj.sample = rng.sample_without_replacement(total, wanted);

    const auto len = static_cast<Eigen::Index>(length);
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(proj.sample.size()), len);
    for (std::size_t r = 0; r < proj.sample.size(); ++r) {
        const std::size_t s = series_of(proj.series_offsets, proj.sample[r]);
        const std::size_t offset = proj.sample[r] - proj.series_offsets[s];
        samples.row(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Eigen::RowVectorXd>(dataset.series[s].values.data() + offset, len);
    }
    proj.mean = samples.colwise().mean().transpose();
    const Eigen::MatrixXd centered = samples.rowwise() - proj.mean.transpose();
    const double scale = std::max(1.0, samples.cwiseAbs().maxCoeff());
    if (centered.cwiseAbs().maxCoeff() <= 1e-12 * scale)
        throw DegenerateProjection("degenerate projection: sampled subsequences of length " +
                                   std::to_string(length) + " have zero variance");

    proj.components = length <= exact_pca_limit ? top_components_exact(centered)
                                                : top_components_randomized(centered, mix64(seed));
    fix_signs(proj.components);

    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(len, 1.0 / std::sqrt(static_cast<double>(length)));
    proj.rotation = rotation_to_z(proj.components * constant);

    const Eigen::Matrix<double, 2, Eigen::Dynamic> to_plane =
        (proj.rotation * proj.components).topRows<2>();
    const Eigen::Vector2d shift = to_plane * proj.mean;
    proj.points2d.resize(total);
    for (std::size_t s = 0; s < dataset.size(); ++s) {
        const auto& values = dataset.series[s].values;
        for (std::size_t i = 0; i + length <= values.size(); ++i) {
            const Eigen::Vector2d p = to_plane * Eigen::Map<const Eigen::VectorXd>(values.data() + i, len) - shift;
            proj.points2d[proj.series_offsets[s] + i] = {p.x(), p.y()};
        }
    }
    return proj;
}

int angular_bin_of(const Point2& p, int angular_bins) {
    if (p[0] == 0.0 && p[1] == 0.0)
        return -1;
    double theta = std::atan2(p[1], p[0]);
    if (theta < 0.0)
        theta += 2.0 * std::numbers::pi;
    const int bin = static_cast<int>(theta / (2.0 * std::numbers::pi) * angular_bins);
    return std::clamp(bin, 0, angular_bins - 1);
}

double kde_bandwidth(std::span<const double> samples, Bandwidth rule) {
    const double n = static_cast<double>(samples.size());
    if (samples.size() < 2)
        return 0.0;
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : samples)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double factor = rule == Bandwidth::scott ? std::pow(n, -0.2) : std::pow(n * 0.75, -0.2);
    return sd * factor;
}

std::vector<double> kde_evaluate(std::span<const double> samples, std::span<const double> grid, double bandwidth) {
    std::vector<double> density(grid.size(), 0.0);
    const double inv = 1.0 / bandwidth;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (double s : samples) {
            const double z = (grid[g] - s) * inv;
            acc += std::exp(-0.5 * z * z);
        }
        density[g] = acc;
    }
    return density;
}

std::vector<PatternNode> create_nodes(const ShapeProjection& projection, int angular_bins, Bandwidth bandwidth,
                                      int grid) {
    if (angular_bins < 1 || grid < 3)
        throw Error("radial scan needs at least 1 angular bin and 3 grid points");
    if (projection.sample.size() < 3)
        throw Error("node creation needs at least 3 sampled points");

    std::vector<std::vector<double>> radii(static_cast<std::size_t>(angular_bins));
    for (std::size_t idx : projection.sample) {
        const Point2& p = projection.points2d[idx];
        const int bin = angular_bin_of(p, angular_bins);
        if (bin >= 0)
            radii[static_cast<std::size_t>(bin)].push_back(std::hypot(p[0], p[1]));
    }
    if (std::all_of(radii.begin(), radii.end(), [](const auto& r) { return r.empty(); }))
        throw Error("node creation: every sampled point lies at the origin");

    std::vector<PatternNode> nodes;
    auto add_node = [&](int bin, double radius) {
        PatternNode node;
        node.id = static_cast<NodeId>(nodes.size());
        node.angular_bin = bin;
        node.radius = radius;
        nodes.push_back(std::move(node));
    };

    std::vector<double> grid_points(static_cast<std::size_t>(grid));
    for (int bin = 0; bin < angular_bins; ++bin) {
        const auto& r = radii[static_cast<std::size_t>(bin)];
        if (r.size() < 3)
            continue;
        const double h = kde_bandwidth(r, bandwidth);
        const double r_max = *std::max_element(r.begin(), r.end());
        if (!(h > 0.0) || !(r_max > 0.0)) {
            add_node(bin, r.front());
            continue;
        }
        for (int g = 0; g < grid; ++g)
            grid_points[static_cast<std::size_t>(g)] = r_max * g / (grid - 1);
        const std::vector<double> f = kde_evaluate(r, grid_points, h);
        const std::size_t last = f.size() - 1;
        std::size_t found = 0;
        for (std::size_t g = 0; g <= last; ++g) {
            const bool left = g == 0 || f[g] > f[g - 1];
            const bool right = g == last || f[g] > f[g + 1];
            if (left && right && f[g] > 0.0) {
                add_node(bin, grid_points[g]);
                ++found;
            }
        }
        if (found == 0) {
            const auto arg = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
            add_node(bin, grid_points[arg]);
        }
    }

    if (nodes.empty()) {
        // No bin holds 3 points: one node at the mean radius of the fullest bin.
        std::size_t best = 0;
        for (std::size_t b = 1; b < radii.size(); ++b)
            if (radii[b].size() > radii[best].size())
                best = b;
        const auto& r = radii[best];
        add_node(static_cast<int>(best), std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size()));
    }
    return nodes;
}

Transitions create_edges(const ShapeProjection& projection, const std::vector<PatternNode>& nodes, int angular_bins) {
    if (nodes.empty())
        throw Error("edge creation needs at least one node");

    std::vector<std::vector<const PatternNode*>> by_bin(static_cast<std::size_t>(angular_bins));
    std::vector<const PatternNode*> ordered;
    for (const auto& n : nodes)
        ordered.push_back(&n);
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::vector<Point2> positions;
    for (const auto* n : ordered) {
        if (n->angular_bin >= 0 && n->angular_bin < angular_bins)
            by_bin[static_cast<std::size_t>(n->angular_bin)].push_back(n);
        positions.push_back(node_position(*n, angular_bins));
    }

    auto assign = [&](const Point2& p) -> NodeId {
        const int bin = angular_bin_of(p, angular_bins);
        if (bin >= 0 && !by_bin[static_cast<std::size_t>(bin)].empty()) {
            const double r = std::hypot(p[0], p[1]);
            const PatternNode* best = nullptr;
            double best_d = std::numeric_limits<double>::infinity();
            for (const auto* n : by_bin[static_cast<std::size_t>(bin)]) {
                const double d = std::abs(r - n->radius);
                if (d < best_d) {
                    best_d = d;
                    best = n;
                }
            }
            return best->id;
        }
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const double dx = p[0] - positions[i][0];
            const double dy = p[1] - positions[i][1];
            const double d = dx * dx + dy * dy;
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return ordered[best]->id;
    };

    Transitions out;
    const std::size_t series = projection.series_count();
    out.paths.resize(series);
    for (std::size_t s = 0; s < series; ++s) {
        auto& path = out.paths[s];
        const std::size_t begin = projection.series_offsets[s];
        const std::size_t end = projection.series_offsets[s + 1];
        path.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            path.push_back(assign(projection.points2d[i]));
            if (path.size() > 1)
                ++out.edges[{path[path.size() - 2], path.back()}];
        }
    }
    return out;
}

PatternGraph build_graph(const Dataset& dataset, std::size_t length, std::size_t smpl, std::uint64_t seed) {
    EmbeddingOptions options;
    options.smpl = smpl;
    return build_graph(dataset, length, seed, options);
}

PatternGraph build_graph(const Dataset& dataset, std::size_t length, std::uint64_t seed,
                         const EmbeddingOptions& options) {
    PatternGraph graph;
    graph.length = length;
    graph.projection = fit_projection(dataset, length, options.smpl, seed, options.exact_pca_limit);
    std::vector<PatternNode> nodes =
        create_nodes(graph.projection, options.angular_bins, options.bandwidth, options.kde_grid);
    Transitions transitions = create_edges(graph.projection, nodes, options.angular_bins);

    // Member counts and prototypes, then drop nodes nobody was assigned to.
    std::vector<std::size_t> members(nodes.size(), 0);
    std::vector<Eigen::VectorXd> sums(nodes.size(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(length)));
    for (std::size_t s = 0; s < transitions.paths.size(); ++s) {
        const auto& values = dataset.series[s].values;
        const auto& path = transitions.paths[s];
        for (std::size_t i = 0; i < path.size(); ++i) {
            const auto n = static_cast<std::size_t>(path[i]);
            ++members[n];
            sums[n] += Eigen::Map<const Eigen::VectorXd>(values.data() + i, static_cast<Eigen::Index>(length));
        }
    }
    std::vector<NodeId> remap(nodes.size(), -1);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (members[n] == 0)
            continue;
        PatternNode node = nodes[n];
        node.id = static_cast<NodeId>(graph.nodes.size());
        node.member_count = members[n];
        const Eigen::VectorXd centroid = sums[n] / static_cast<double>(members[n]);
        node.prototype.assign(centroid.data(), centroid.data() + centroid.size());
        remap[n] = node.id;
        graph.nodes.push_back(std::move(node));
    }
    graph.paths = std::move(transitions.paths);
    for (auto& path : graph.paths)
        for (auto& n : path)
            n = remap[static_cast<std::size_t>(n)];
    for (const auto& [key, weight] : transitions.edges)
        graph.edges[{remap[static_cast<std::size_t>(key.first)], remap[static_cast<std::size_t>(key.second)]}] += weight;
    return graph;
}

} // namespace kgraph
