#pragma once

#include "kgraph/embedding.hpp"
#include "kgraph/interpretability.hpp"
#include "kgraph/metrics.hpp"

#include <json.hpp>

namespace kgraph {

// {length, nodes: [{id, angular_bin, radius, prototype[], member_count}],
//  edges: [{src, dst, weight}], paths?: [[node...]...]}
nlohmann::json graph_to_json(const PatternGraph& graph, bool include_paths = false);

nlohmann::json graphoid_to_json(const Graphoid& graphoid);

// {lengths: [{length, W_c, W_e}], selected_length, clusters: [{cluster, size,
//  exemplar_node, representativity, exclusivity, centroid[], ...}]}
nlohmann::json report_to_json(const GraphoidReport& report);

nlohmann::json metrics_to_json(const MetricScores& scores);

} // namespace kgraph
