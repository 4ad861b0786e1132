#include "rpkt/graph_export.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rpkt {

std::string_view to_string(NodeColor color) {
    switch (color) {
        case NodeColor::Green: return "green";
        case NodeColor::Red: return "red";
        case NodeColor::Blue: return "blue";
    }
    return "blue";
}

NodeColor color_for(Status status) {
    switch (status) {
        case Status::Known: return NodeColor::Green;
        case Status::Unknown: return NodeColor::Red;
        case Status::Unassessed: break;
    }
    return NodeColor::Blue;
}

GraphDoc export_graph(const Session& session) {
    GraphDoc doc;
    doc.max_depth = session.max_depth;

    std::map<ConceptId, int> min_depth;
    std::set<GraphEdge> edges;
    for (const auto& n : session.tree.nodes()) {
        auto [it, inserted] = min_depth.try_emplace(n.subject, n.depth);
        if (!inserted) it->second = std::min(it->second, n.depth);
        if (n.parent) edges.insert({session.tree.node(*n.parent).subject, n.subject});
    }

    for (const auto& [id, depth] : min_depth) {
        GraphNode node;
        node.subject = session.tree.concept_for(id);
        node.min_depth = depth;
        node.status = session.status.get(id);
        node.color = color_for(node.status);
        node.size_rank = session.max_depth - depth;
        doc.nodes.push_back(std::move(node));
    }
    doc.edges.assign(edges.begin(), edges.end());
    return doc;
}

namespace {

std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string render_dot(const GraphDoc& doc) {
    std::ostringstream os;
    os << "digraph rpkt {\n";
    os << "  rankdir=TB;\n";
    os << "  node [shape=circle, style=filled, fontcolor=white];\n";
    for (const auto& n : doc.nodes) {
        // Width grows with size_rank so the target is the largest node.
        const double width = 0.6 + 0.3 * n.size_rank;
        os << "  " << dot_quote(n.subject.id.key()) << " [label=" << dot_quote(n.subject.display_label)
           << ", fillcolor=" << to_string(n.color) << ", width=" << width << ", depth=" << n.min_depth
           << ", status=" << to_string(n.status) << "];\n";
    }
    for (const auto& e : doc.edges) {
        os << "  " << dot_quote(e.from.key()) << " -> " << dot_quote(e.to.key()) << ";\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json graph_to_json(const GraphDoc& doc) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : doc.nodes) {
        nodes.push_back({{"concept_id", n.subject.id.key()},
                         {"label", n.subject.display_label},
                         {"min_depth", n.min_depth},
                         {"status", to_string(n.status)},
                         {"color", to_string(n.color)},
                         {"size_rank", n.size_rank}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.edges) edges.push_back({{"from", e.from.key()}, {"to", e.to.key()}});
    return {{"max_depth", doc.max_depth}, {"nodes", nodes}, {"edges", edges}};
}

}  // namespace rpkt
