#include "kgraph/serialize.hpp"

namespace kgraph {

nlohmann::json graph_to_json(const PatternGraph& graph, bool include_paths) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : graph.nodes)
        nodes.push_back({{"id", n.id},
                         {"angular_bin", n.angular_bin},
                         {"radius", n.radius},
                         {"prototype", n.prototype},
                         {"member_count", n.member_count}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [key, weight] : graph.edges)
        edges.push_back({{"src", key.first}, {"dst", key.second}, {"weight", weight}});
    nlohmann::json out = {{"length", graph.length}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
    if (include_paths)
        out["paths"] = graph.paths;
    return out;
}

nlohmann::json graphoid_to_json(const Graphoid& graphoid) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [src, dst] : graphoid.edges)
        edges.push_back({src, dst});
    return {{"nodes", graphoid.nodes}, {"edges", std::move(edges)}};
}

nlohmann::json report_to_json(const GraphoidReport& report) {
    nlohmann::json lengths = nlohmann::json::array();
    for (const auto& s : report.lengths)
        lengths.push_back({{"length", s.length}, {"W_c", s.consistency}, {"W_e", s.interpretability}});
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : report.clusters) {
        nlohmann::json entry = {{"cluster", c.exemplar.cluster},
                                {"size", c.size},
                                {"exemplar_node", c.exemplar.node},
                                {"representativity", c.exemplar.representativity},
                                {"exclusivity", c.exemplar.exclusivity},
                                {"centroid", c.exemplar.centroid}};
        if (c.lambda_graphoid)
            entry["lambda_graphoid"] = graphoid_to_json(*c.lambda_graphoid);
        if (c.gamma_graphoid)
            entry["gamma_graphoid"] = graphoid_to_json(*c.gamma_graphoid);
        clusters.push_back(std::move(entry));
    }
    nlohmann::json out = {{"lengths", std::move(lengths)},
                          {"selected_length", report.selected_length},
                          {"selected_index", report.selected_index},
                          {"clusters", std::move(clusters)}};
    if (report.lambda)
        out["lambda"] = *report.lambda;
    if (report.gamma)
        out["gamma"] = *report.gamma;
    return out;
}

nlohmann::json metrics_to_json(const MetricScores& scores) {
    return {{"RI", scores.ri}, {"ARI", scores.ari}, {"AMI", scores.ami}, {"NMI", scores.nmi}};
}

} // namespace kgraph
