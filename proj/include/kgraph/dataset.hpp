#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kgraph {

// Shortest series (and subsequence) the embedding accepts.
inline constexpr std::size_t kMinSeriesLength = 5;

struct TimeSeries {
    std::vector<double> values;
    std::size_t id = 0;

    std::size_t size() const noexcept { return values.size(); }
};

struct Dataset {
    std::string name;
    std::vector<TimeSeries> series;
    // Ground-truth classes; only read by the metrics.
    std::optional<std::vector<int>> labels;

    std::size_t size() const noexcept { return series.size(); }
    std::size_t min_length() const;
    std::size_t max_length() const;

    // Throws kgraph::Error when an invariant is broken: fewer than two
    // series, a series shorter than kMinSeriesLength, a non-finite value,
    // or a label count different from the series count.
    void validate() const;
};

// A view of T[offset, offset + values.size()) inside its parent series.
struct Subsequence {
    std::span<const double> values;
    std::size_t series = 0;
    std::size_t offset = 0;
};

Dataset make_dataset(std::vector<std::vector<double>> rows,
                     std::optional<std::vector<int>> labels = std::nullopt,
                     std::string name = {});

// Parses one UCR-archive TSV file: `label<TAB>v1<TAB>v2...` per line.
Dataset load_ucr_tsv(const std::filesystem::path& path);

// Loads a dataset given either a TSV file or an archive directory holding
// <name>_TRAIN.tsv and/or <name>_TEST.tsv, which are concatenated in that order.
Dataset load_ucr(const std::filesystem::path& path);

std::string to_ucr_tsv(const Dataset& dataset);
void save_ucr_tsv(const Dataset& dataset, const std::filesystem::path& path);

// All windows of `length`, by increasing start offset. The views borrow from
// `series`.
std::vector<Subsequence> subsequences(const TimeSeries& series, std::size_t length);

// Mean absolute step divided by the series amplitude.
double noise_ratio(const TimeSeries& series);

// Per-series z-normalization; constant series become all zeros.
Dataset znormalized(const Dataset& dataset);

} // namespace kgraph
