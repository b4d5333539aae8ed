#pragma once
// Graph serialization.
//
// Edge-list text:   first line "n m", then m lines "i j weight" (0-based).
//                   Blank lines and lines starting with '#' are ignored.
// JSON:             {"n": <int>, "edges": [[i, j, weight], ...]}

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "spectail/weighted_graph.hpp"

namespace spectail::io {

WeightedGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedGraph& g);

nlohmann::json to_json(const WeightedGraph& g);
WeightedGraph from_json(const nlohmann::json& j);

/// Dispatches on extension: ".json" is JSON, anything else the edge list.
WeightedGraph load_graph(const std::string& path);
void save_graph(const std::string& path, const WeightedGraph& g);

}  // namespace spectail::io
