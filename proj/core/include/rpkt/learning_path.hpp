#pragma once

#include "rpkt/engine.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace rpkt {

enum class PathMarker { Target, Unknown, Unassessed, Known };

std::string_view to_string(PathMarker marker);

// Glyph used in the text rendering: ✗ unknown, ? unassessed, ✓ known, ◎ target.
std::string_view glyph(PathMarker marker);

struct PathEntry {
    Concept subject;
    int depth = 0;
    PathMarker marker = PathMarker::Unassessed;
    // A repeated concept: rendered as a reference to its first entry and
    // never re-nested.
    bool link = false;
    std::vector<PathEntry> children;

    friend bool operator==(const PathEntry&, const PathEntry&) = default;
};

struct PathOptions {
    bool include_known = false;
};

// Gap tree: the target, every surfaced Unknown concept, and the still
// Unassessed prerequisites of Unknown concepts (everything with
// include_known). Works on incomplete sessions.
PathEntry build_path(const Session& session, PathOptions options = {});

// Post-order walk of the path, following links to the first entry of the
// linked concept: prerequisites come before dependents, the target comes
// last, every concept appears once.
std::vector<Concept> flatten_sequence(const PathEntry& path);

// Indented tree with level tags, e.g. "  ✗ Gradient Descent [L1]".
std::string render_path_text(const PathEntry& path);

nlohmann::json path_to_json(const PathEntry& path);

// Known concepts (tree order) and the flattened gap sequence without the
// target, as the explanation oracle expects them.
ExplanationRequest explanation_request(const Session& session);

}  // namespace rpkt
