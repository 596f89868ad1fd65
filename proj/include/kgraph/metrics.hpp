#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kgraph {

// Counts of items with true class i and predicted cluster j. Labels are
// compacted to 0..classes-1 / 0..clusters-1 in order of first appearance.
struct ContingencyTable {
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> row_sums;
    std::vector<std::size_t> col_sums;
    std::size_t total = 0;

    static ContingencyTable from_labels(std::span<const int> a, std::span<const int> b);
};

double rand_index(std::span<const int> a, std::span<const int> b);
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);
double mutual_information(std::span<const int> a, std::span<const int> b);
// Normalized by the arithmetic mean of the two entropies.
double nmi(std::span<const int> a, std::span<const int> b);
// Chance-adjusted under the permutation model, arithmetic-mean normalization.
double ami(std::span<const int> a, std::span<const int> b);

struct MetricScores {
    double ri = 0.0;
    double ari = 0.0;
    double ami = 0.0;
    double nmi = 0.0;
};

MetricScores score_all(std::span<const int> truth, std::span<const int> predicted);

} // namespace kgraph
