#include "kgraph/metrics.hpp"

#include "kgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace kgraph {

namespace {

void check_inputs(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw Error("label length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    if (a.size() < 2)
        throw Error("metrics need at least 2 labels");
}

double pairs(std::size_t n) {
    return static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0) / 2.0;
}

std::vector<std::size_t> compact(std::span<const int> labels, std::size_t& distinct) {
    std::unordered_map<int, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (int l : labels)
        out.push_back(ids.try_emplace(l, ids.size()).first->second);
    distinct = ids.size();
    return out;
}

double entropy(const std::vector<std::size_t>& sums, std::size_t total) {
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (std::size_t s : sums)
        if (s > 0) {
            const double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
    return h;
}

double mutual_information(const ContingencyTable& t) {
    const double n = static_cast<double>(t.total);
    double mi = 0.0;
    for (std::size_t i = 0; i < t.counts.size(); ++i)
        for (std::size_t j = 0; j < t.counts[i].size(); ++j) {
            const auto c = t.counts[i][j];
            if (c == 0)
                continue;
            const double nij = static_cast<double>(c);
            mi += nij / n * std::log(n * nij / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
        }
    return std::max(mi, 0.0);
}

// Expected mutual information under the hypergeometric permutation model.
double expected_mutual_information(const ContingencyTable& t) {
    const std::size_t n = t.total;
    const double nd = static_cast<double>(n);
    const double lg_n = std::lgamma(nd + 1.0);
    double emi = 0.0;
    for (std::size_t a : t.row_sums) {
        for (std::size_t b : t.col_sums) {
            const double ad = static_cast<double>(a);
            const double bd = static_cast<double>(b);
            const double fixed = std::lgamma(ad + 1.0) + std::lgamma(bd + 1.0) + std::lgamma(nd - ad + 1.0) +
                                 std::lgamma(nd - bd + 1.0) - lg_n;
            const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
            const std::size_t hi = std::min(a, b);
            for (std::size_t nij = lo; nij <= hi; ++nij) {
                const double x = static_cast<double>(nij);
                const double log_weight = fixed - std::lgamma(x + 1.0) - std::lgamma(ad - x + 1.0) -
                                          std::lgamma(bd - x + 1.0) - std::lgamma(nd - ad - bd + x + 1.0);
                emi += x / nd * std::log(nd * x / (ad * bd)) * std::exp(log_weight);
            }
        }
    }
    return emi;
}

} // namespace

ContingencyTable ContingencyTable::from_labels(std::span<const int> a, std::span<const int> b) {
    check_inputs(a, b);
    std::size_t ka = 0;
    std::size_t kb = 0;
    const auto ca = compact(a, ka);
    const auto cb = compact(b, kb);
    ContingencyTable t;
    t.counts.assign(ka, std::vector<std::size_t>(kb, 0));
    t.row_sums.assign(ka, 0);
    t.col_sums.assign(kb, 0);
    t.total = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.counts[ca[i]][cb[i]];
        ++t.row_sums[ca[i]];
        ++t.col_sums[cb[i]];
    }
    return t;
}

double rand_index(std::span<const int> a, std::span<const int> b) {
    const auto t = ContingencyTable::from_labels(a, b);
    double same_both = 0.0;
    for (const auto& row : t.counts)
        for (auto c : row)
            same_both += pairs(c);
    double same_a = 0.0;
    double same_b = 0.0;
    for (auto s : t.row_sums)
        same_a += pairs(s);
    for (auto s : t.col_sums)
        same_b += pairs(s);
    const double total = pairs(t.total);
    const double agree = same_both + (total - same_a - same_b + same_both);
    return agree / total;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    const auto t = ContingencyTable::from_labels(a, b);
    double index = 0.0;
    for (const auto& row : t.counts)
        for (auto c : row)
            index += pairs(c);
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (auto s : t.row_sums)
        sum_a += pairs(s);
    for (auto s : t.col_sums)
        sum_b += pairs(s);
    const double expected = sum_a * sum_b / pairs(t.total);
    const double maximum = 0.5 * (sum_a + sum_b);
    const double denom = maximum - expected;
    // Only identical trivial partitions (one cluster, or all singletons) get here.
    if (denom == 0.0)
        return 1.0;
    return (index - expected) / denom;
}

double mutual_information(std::span<const int> a, std::span<const int> b) {
    return mutual_information(ContingencyTable::from_labels(a, b));
}

double nmi(std::span<const int> a, std::span<const int> b) {
    const auto t = ContingencyTable::from_labels(a, b);
    const double ha = entropy(t.row_sums, t.total);
    const double hb = entropy(t.col_sums, t.total);
    if (ha == 0.0 && hb == 0.0)
        return 1.0;
    return std::clamp(mutual_information(t) / (0.5 * (ha + hb)), 0.0, 1.0);
}

double ami(std::span<const int> a, std::span<const int> b) {
    const auto t = ContingencyTable::from_labels(a, b);
    const std::size_t ka = t.row_sums.size();
    const std::size_t kb = t.col_sums.size();
    if ((ka == 1 && kb == 1) || (ka == t.total && kb == t.total))
        return 1.0;
    const double mi = mutual_information(t);
    const double emi = expected_mutual_information(t);
    const double mean_h = 0.5 * (entropy(t.row_sums, t.total) + entropy(t.col_sums, t.total));
    double denom = mean_h - emi;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    denom = denom < 0.0 ? std::min(denom, -eps) : std::max(denom, eps);
    return (mi - emi) / denom;
}

MetricScores score_all(std::span<const int> truth, std::span<const int> predicted) {
    return {rand_index(truth, predicted), adjusted_rand_index(truth, predicted), ami(truth, predicted),
            nmi(truth, predicted)};
}

} // namespace kgraph
