#include "kgraph/dataset.hpp"

#include "kgraph/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

namespace kgraph {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    if (field.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc{} && ptr == field.data() + field.size();
}

std::string row_error(std::size_t row, const std::string& what) {
    return "row " + std::to_string(row) + " " + what;
}

} // namespace

std::size_t Dataset::min_length() const {
    std::size_t best = series.empty() ? 0 : series.front().size();
    for (const auto& s : series)
        best = std::min(best, s.size());
    return best;
}

std::size_t Dataset::max_length() const {
    std::size_t best = 0;
    for (const auto& s : series)
        best = std::max(best, s.size());
    return best;
}

void Dataset::validate() const {
    if (series.size() < 2)
        throw Error("dataset needs at least 2 series, got " + std::to_string(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (s.size() < kMinSeriesLength)
            throw Error("series " + std::to_string(i) + " has fewer than " +
                        std::to_string(kMinSeriesLength) + " values");
        if (!std::all_of(s.values.begin(), s.values.end(), [](double v) { return std::isfinite(v); }))
            throw Error("series " + std::to_string(i) + " contains a non-finite value");
    }
    if (labels && labels->size() != series.size())
        throw Error("label count " + std::to_string(labels->size()) + " does not match series count " +
                    std::to_string(series.size()));
}

Dataset make_dataset(std::vector<std::vector<double>> rows, std::optional<std::vector<int>> labels,
                     std::string name) {
    Dataset d;
    d.name = std::move(name);
    d.series.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        d.series.push_back(TimeSeries{std::move(rows[i]), i});
    d.labels = std::move(labels);
    d.validate();
    return d;
}

namespace {

struct RawRows {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
};

RawRows read_tsv_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read dataset file '" + path.string() + "'");

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const std::string_view body = trim(line);
        if (body.empty())
            continue;
        ++row;
        std::vector<double> values;
        double label = 0.0;
        bool first = true;
        std::size_t start = 0;
        while (start <= body.size()) {
            const std::size_t tab = body.find('\t', start);
            const std::string_view field =
                body.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
            double v = 0.0;
            if (!parse_double(field, v))
                throw Error(row_error(row, "has a malformed field '" + std::string(trim(field)) + "'"));
            if (!std::isfinite(v))
                throw Error(row_error(row, "has a non-finite value"));
            if (first) {
                label = v;
                first = false;
            } else {
                values.push_back(v);
            }
            if (tab == std::string_view::npos)
                break;
            start = tab + 1;
        }
        if (values.size() < kMinSeriesLength)
            throw Error(row_error(row, "has fewer than " + std::to_string(kMinSeriesLength) + " values"));
        rows.push_back(std::move(values));
        labels.push_back(static_cast<int>(std::trunc(label)));
    }
    return {std::move(rows), std::move(labels)};
}

} // namespace

Dataset load_ucr_tsv(const std::filesystem::path& path) {
    RawRows raw = read_tsv_rows(path);
    return make_dataset(std::move(raw.rows), std::move(raw.labels), path.stem().string());
}

Dataset load_ucr(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path))
        return load_ucr_tsv(path);

    const std::string name = path.filename().empty() ? path.parent_path().filename().string()
                                                     : path.filename().string();
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (const char* split : {"_TRAIN.tsv", "_TEST.tsv"}) {
        const fs::path file = path / (name + split);
        if (!fs::exists(file))
            continue;
        // Rows are checked per file, the merged set is validated once.
        RawRows part = read_tsv_rows(file);
        for (auto& r : part.rows)
            rows.push_back(std::move(r));
        labels.insert(labels.end(), part.labels.begin(), part.labels.end());
    }
    if (rows.empty())
        throw Error("no " + name + "_TRAIN.tsv or " + name + "_TEST.tsv in '" + path.string() + "'");
    return make_dataset(std::move(rows), std::move(labels), name);
}

std::string to_ucr_tsv(const Dataset& dataset) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        out << (dataset.labels ? (*dataset.labels)[i] : 0);
        for (double v : dataset.series[i].values)
            out << '\t' << v;
        out << '\n';
    }
    return out.str();
}

void save_ucr_tsv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << to_ucr_tsv(dataset);
}

std::vector<Subsequence> subsequences(const TimeSeries& series, std::size_t length) {
    if (length < kMinSeriesLength || length > series.size())
        throw Error("subsequence length " + std::to_string(length) + " outside [" +
                    std::to_string(kMinSeriesLength) + ", " + std::to_string(series.size()) + "]");
    const std::span<const double> all(series.values);
    std::vector<Subsequence> out;
    out.reserve(series.size() - length + 1);
    for (std::size_t i = 0; i + length <= series.size(); ++i)
        out.push_back(Subsequence{all.subspan(i, length), series.id, i});
    return out;
}

double noise_ratio(const TimeSeries& series) {
    const auto& v = series.values;
    if (v.size() < 2)
        throw Error("noise ratio needs at least 2 values");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double amplitude = *hi - *lo;
    if (!(amplitude > 0.0))
        throw Error("zero amplitude");
    double steps = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i)
        steps += std::abs(v[i] - v[i - 1]);
    return steps / static_cast<double>(v.size() - 1) / amplitude;
}

Dataset znormalized(const Dataset& dataset) {
    Dataset out = dataset;
    for (auto& s : out.series) {
        auto& v = s.values;
        const double n = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double var = 0.0;
        for (double x : v)
            var += (x - mean) * (x - mean);
        const double sd = std::sqrt(var / n);
        for (double& x : v)
            x = sd > 0.0 ? (x - mean) / sd : 0.0;
    }
    return out;
}

} // namespace kgraph
