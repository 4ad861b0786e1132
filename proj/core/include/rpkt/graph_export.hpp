#pragma once

#include "rpkt/engine.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace rpkt {

enum class NodeColor { Green, Red, Blue };

std::string_view to_string(NodeColor color);

// Known -> green, Unknown -> red, Unassessed (and the never-assessed target) -> blue.
NodeColor color_for(Status status);

struct GraphNode {
    Concept subject;
    int min_depth = 0;
    Status status = Status::Unassessed;
    NodeColor color = NodeColor::Blue;
    // max_depth - min_depth: larger for shallower concepts.
    int size_rank = 0;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
    ConceptId from;  // dependent concept
    ConceptId to;    // its prerequisite

    friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

// Merged concept DAG: one node per surfaced concept, one edge per distinct
// (parent concept, child concept) placement. Nodes and edges are sorted by
// concept key.
struct GraphDoc {
    int max_depth = 0;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    friend bool operator==(const GraphDoc&, const GraphDoc&) = default;
};

GraphDoc export_graph(const Session& session);

// Byte-stable DOT digraph.
std::string render_dot(const GraphDoc& doc);

nlohmann::json graph_to_json(const GraphDoc& doc);

}  // namespace rpkt
