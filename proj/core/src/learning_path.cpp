#include "rpkt/learning_path.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace rpkt {

std::string_view to_string(PathMarker marker) {
    switch (marker) {
        case PathMarker::Target: return "target";
        case PathMarker::Unknown: return "unknown";
        case PathMarker::Unassessed: return "unassessed";
        case PathMarker::Known: return "known";
    }
    return "unassessed";
}

std::string_view glyph(PathMarker marker) {
    switch (marker) {
        case PathMarker::Target: return "◎";
        case PathMarker::Unknown: return "✗";
        case PathMarker::Unassessed: return "?";
        case PathMarker::Known: return "✓";
    }
    return "?";
}

namespace {

PathMarker marker_for(Status status) {
    switch (status) {
        case Status::Unknown: return PathMarker::Unknown;
        case Status::Known: return PathMarker::Known;
        case Status::Unassessed: break;
    }
    return PathMarker::Unassessed;
}

PathEntry build_entry(const Session& s, const TraceNode& node, PathOptions options) {
    PathEntry entry;
    entry.subject = s.tree.concept_for(node.subject);
    entry.depth = node.depth;
    entry.link = !node.is_primary();
    entry.marker = node.parent ? marker_for(s.status.get(node.subject)) : PathMarker::Target;
    if (entry.link) return entry;
    for (NodeId child_id : node.children) {
        const TraceNode& child = s.tree.node(child_id);
        Status st = s.status.get(child.subject);
        if (!options.include_known) {
            if (st == Status::Known) continue;
            if (st == Status::Unassessed && !node.parent) continue;
        }
        entry.children.push_back(build_entry(s, child, options));
    }
    return entry;
}

}  // namespace

PathEntry build_path(const Session& session, PathOptions options) {
    return build_entry(session, session.tree.root(), options);
}

std::vector<Concept> flatten_sequence(const PathEntry& path) {
    std::map<ConceptId, const PathEntry*> first;
    std::function<void(const PathEntry&)> index = [&](const PathEntry& e) {
        if (!e.link) first.try_emplace(e.subject.id, &e);
        for (const auto& c : e.children) index(c);
    };
    index(path);

    std::vector<Concept> out;
    std::set<ConceptId> visited;
    std::function<void(const PathEntry&)> visit = [&](const PathEntry& e) {
        if (!visited.insert(e.subject.id).second) return;
        const PathEntry* body = &e;
        if (e.link) {
            auto it = first.find(e.subject.id);
            if (it != first.end()) body = it->second;
        }
        for (const auto& c : body->children) visit(c);
        out.push_back(e.subject);
    };
    visit(path);
    return out;
}

std::string render_path_text(const PathEntry& path) {
    std::ostringstream os;
    std::function<void(const PathEntry&, int)> emit = [&](const PathEntry& e, int indent) {
        os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << glyph(e.marker) << ' '
           << e.subject.display_label << " [L" << e.depth << ']';
        if (e.link) os << " (see above)";
        os << '\n';
        for (const auto& c : e.children) emit(c, indent + 1);
    };
    emit(path, 0);
    return os.str();
}

nlohmann::json path_to_json(const PathEntry& path) {
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : path.children) children.push_back(path_to_json(c));
    return {{"concept_id", path.subject.id.key()},
            {"label", path.subject.display_label},
            {"depth", path.depth},
            {"marker", to_string(path.marker)},
            {"link", path.link},
            {"children", children}};
}

ExplanationRequest explanation_request(const Session& session) {
    ExplanationRequest req;
    req.question = session.question;
    req.education_level = session.education_level;
    const NodeId root = session.tree.root().node_id;
    for (const auto& n : session.tree.nodes()) {
        if (n.node_id == root || !n.is_primary()) continue;
        if (session.status.get(n.subject) == Status::Known) req.known.push_back(session.tree.concept_for(n.subject));
    }
    for (const auto& c : flatten_sequence(build_path(session))) {
        if (c.id == session.tree.root().subject) continue;
        req.unknown_ordered.push_back({c, session.status.get(c.id)});
    }
    return req;
}

}  // namespace rpkt
