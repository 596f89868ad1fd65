#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "kgraph/consensus.hpp"
#include "kgraph/features.hpp"
#include "support.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Brute-force recount of one path, keyed by column name.
inline std::map<std::string, double> recount(const std::vector<kgraph::NodeId>& raw, bool merge_runs) {
    std::vector<kgraph::NodeId> path;
    for (kgraph::NodeId n : raw)
        if (!merge_runs || path.empty() || path.back() != n)
            path.push_back(n);
    std::map<std::string, double> out;
    std::set<std::pair<kgraph::NodeId, kgraph::NodeId>> seen;
    for (std::size_t i = 0; i < path.size(); ++i) {
        out["n" + std::to_string(path[i])] += 1;
        if (i + 1 < path.size()) {
            out["e" + std::to_string(path[i]) + "-" + std::to_string(path[i + 1])] += 1;
            seen.insert({path[i], path[i + 1]});
        }
    }
    for (const auto& [a, b] : seen) {
        out["d" + std::to_string(a)] += 1;
        out["d" + std::to_string(b)] += 1;
    }
    return out;
}

inline std::string column_name(const kgraph::FeatureColumn& c) {
    switch (c.kind) {
    case kgraph::FeatureKind::node: return "n" + std::to_string(c.entity.first);
    case kgraph::FeatureKind::edge:
        return "e" + std::to_string(c.entity.first) + "-" + std::to_string(c.entity.second);
    case kgraph::FeatureKind::degree: return "d" + std::to_string(c.entity.first);
    }
    return {};
}

// True when every feature cell equals the recount and nothing is left over.
inline bool features_match_recount(const kgraph::Dataset& d, const kgraph::PatternGraph& g,
                                   kgraph::PathCounting counting) {
    const kgraph::FeatureMatrix fm = kgraph::extract_features(d, g, {counting});
    const Eigen::MatrixXd dense(fm.counts);
    for (std::size_t s = 0; s < d.size(); ++s) {
        auto expected = recount(g.paths[s], counting == kgraph::PathCounting::transitions);
        for (std::size_t c = 0; c < fm.cols(); ++c) {
            const std::string name = column_name(fm.columns[c]);
            const double want = expected.count(name) ? expected[name] : 0.0;
            if (dense(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) != want)
                return false;
            expected.erase(name);
        }
        if (!expected.empty())
            return false;
    }
    return true;
}

inline double pair_rand(const std::vector<int>& a, const std::vector<int>& b) {
    double agree = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1.0 : 0.0;
            pairs += 1.0;
        }
    return agree / pairs;
}

// ARI from literal pair enumeration: pairs together in both, in each, overall.
inline double pair_ari(const std::vector<int>& a, const std::vector<int>& b) {
    double both = 0.0, in_a = 0.0, in_b = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool sa = a[i] == a[j];
            const bool sb = b[i] == b[j];
            both += sa && sb ? 1.0 : 0.0;
            in_a += sa ? 1.0 : 0.0;
            in_b += sb ? 1.0 : 0.0;
            pairs += 1.0;
        }
    const double expected = in_a * in_b / pairs;
    const double max = 0.5 * (in_a + in_b);
    if (max == expected)
        return 1.0;
    return (both - expected) / (max - expected);
}

// Every set partition of n items as a restricted growth string.
inline std::vector<std::vector<int>> all_labelings(std::size_t n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= used; ++v) {
            cur[i] = v;
            self(self, i + 1, std::max(used, v + 1));
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Connected components of the >0 affinity graph by breadth-first search.
inline std::vector<int> components(const Eigen::MatrixXd& a) {
    const auto n = static_cast<std::size_t>(a.rows());
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0)
            continue;
        std::vector<std::size_t> queue{s};
        comp[s] = next;
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (std::size_t j = 0; j < n; ++j)
                if (comp[j] < 0 && a(static_cast<Eigen::Index>(queue[q]), static_cast<Eigen::Index>(j)) > 0.0) {
                    comp[j] = next;
                    queue.push_back(j);
                }
        ++next;
    }
    return comp;
}

// 0/1 co-membership matrix of k interleaved blocks.
inline kgraph::ConsensusMatrix random_blocks(kgraph::Rng& rng, int k, std::size_t n, std::vector<int>& membership) {
    membership = testing::random_labels(rng, n, k);
    for (int c = 0; c < k; ++c)
        membership[static_cast<std::size_t>(c)] = c;
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(membership[i], membership[rng.index(i + 1)]);
    kgraph::ConsensusMatrix m;
    m.partitions = 1;
    m.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                membership[i] == membership[j] ? 1.0 : 0.0;
    return m;
}

} // namespace oracle
