#include "kgraph/error.hpp"
#include "kgraph/pipeline.hpp"
#include "kgraph/serialize.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace kgraph;

namespace {

py::object to_python(const nlohmann::json& value) {
    return py::module_::import("json").attr("loads")(value.dump());
}

Dataset dataset_from(const std::vector<std::vector<double>>& rows, std::optional<std::vector<int>> labels) {
    return make_dataset(rows, std::move(labels), "array");
}

PipelineOptions pipeline_options(int k, std::size_t m_lengths, std::size_t smpl, double rml, std::uint64_t seed,
                                 std::size_t workers, std::optional<std::vector<std::size_t>> lengths,
                                 const std::string& counting) {
    PipelineOptions o;
    o.k = k;
    o.m_lengths = m_lengths;
    o.smpl = smpl;
    o.rml = rml;
    o.seed = seed;
    o.workers = workers;
    o.lengths = std::move(lengths);
    if (counting == "transitions")
        o.features.counting = PathCounting::transitions;
    else if (counting == "occurrences")
        o.features.counting = PathCounting::occurrences;
    else
        throw Error("counting must be 'transitions' or 'occurrences'");
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "k-Graph time series clustering";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("load_ucr",
          [](const std::filesystem::path& path) {
              Dataset d = load_ucr(path);
              py::dict out;
              std::vector<std::vector<double>> rows;
              for (const auto& s : d.series)
                  rows.push_back(s.values);
              out["name"] = d.name;
              out["series"] = rows;
              out["labels"] = d.labels;
              return out;
          },
          py::arg("path"), "Read a UCR tsv file or archive directory into {name, series, labels}.");

    m.def("fit",
          [](const std::vector<std::vector<double>>& series, int k, std::size_t m_lengths, std::size_t smpl,
             double rml, std::uint64_t seed, std::size_t workers, std::optional<std::vector<std::size_t>> lengths,
             const std::string& counting) {
              const Dataset d = dataset_from(series, std::nullopt);
              const auto opts = pipeline_options(k, m_lengths, smpl, rml, seed, workers, std::move(lengths), counting);
              PipelineResult r;
              {
                  py::gil_scoped_release release;
                  r = fit(d, opts);
              }
              py::dict out;
              out["labels"] = r.labels.labels;
              out["lengths"] = r.lengths;
              out["consensus"] = r.consensus.values;
              out["report"] = to_python(report_to_json(r.report));
              std::vector<std::size_t> failed;
              for (const auto& f : r.failures)
                  failed.push_back(f.length);
              out["failed_lengths"] = failed;
              return out;
          },
          py::arg("series"), py::arg("k"), py::arg("m_lengths") = 30, py::arg("smpl") = 10, py::arg("rml") = 0.4,
          py::arg("seed") = 0, py::arg("workers") = 1, py::arg("lengths") = py::none(),
          py::arg("counting") = "transitions", "Run the whole pipeline and return labels plus the report.");

    m.def("build_graph",
          [](const std::vector<std::vector<double>>& series, std::size_t length, std::size_t smpl,
             std::uint64_t seed) {
              return to_python(graph_to_json(build_graph(dataset_from(series, std::nullopt), length, smpl, seed), true));
          },
          py::arg("series"), py::arg("length"), py::arg("smpl") = 10, py::arg("seed") = 0);

    m.def("features",
          [](const std::vector<std::vector<double>>& series, std::size_t length, std::size_t smpl, std::uint64_t seed,
             const std::string& counting) {
              const Dataset d = dataset_from(series, std::nullopt);
              const auto opts = pipeline_options(1, 1, smpl, 0.4, seed, 1, std::nullopt, counting);
              const auto g = build_graph(d, length, smpl, seed);
              return Eigen::MatrixXd(extract_features(d, g, opts.features).counts);
          },
          py::arg("series"), py::arg("length"), py::arg("smpl") = 10, py::arg("seed") = 0,
          py::arg("counting") = "transitions", "Raw per-series feature counts for one length.");

    m.def("kmeans",
          [](const Eigen::MatrixXd& points, int k, std::uint64_t seed) { return kmeans(points, k, seed).labels; },
          py::arg("points"), py::arg("k"), py::arg("seed") = 0);

    m.def("spectral_clustering",
          [](const Eigen::MatrixXd& affinity, int k, std::uint64_t seed) {
              ConsensusMatrix c;
              c.values = affinity;
              return spectral_clustering(c, k, seed).labels;
          },
          py::arg("affinity"), py::arg("k"), py::arg("seed") = 0);

    m.def("consensus_matrix",
          [](const std::vector<std::vector<int>>& labelings) {
              std::vector<Partition> parts;
              for (const auto& l : labelings) {
                  Partition p;
                  p.labels = l;
                  p.k = l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
                  parts.push_back(std::move(p));
              }
              return consensus_matrix(parts).values;
          },
          py::arg("labelings"));

    m.def("adjusted_rand_index", [](const std::vector<int>& a, const std::vector<int>& b) {
        return adjusted_rand_index(a, b);
    });
    m.def("rand_index", [](const std::vector<int>& a, const std::vector<int>& b) { return rand_index(a, b); });
    m.def("nmi", [](const std::vector<int>& a, const std::vector<int>& b) { return nmi(a, b); });
    m.def("ami", [](const std::vector<int>& a, const std::vector<int>& b) { return ami(a, b); });
    m.def("noise_ratio", [](const std::vector<double>& values) { return noise_ratio(TimeSeries{values, 0}); });
}
