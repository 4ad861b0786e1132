#pragma once

#include "rpkt/engine.hpp"

#include <nlohmann/json.hpp>

namespace rpkt::json_io {

using nlohmann::json;

json to_json(const Concept& subject);
json to_json(const QuestionAnalysis& analysis);
json to_json(const TraceNode& node, const TraceTree& tree);
json to_json(const PendingItem& item);
json to_json(const AssessmentOutcome& outcome, const TraceTree& tree);

json event_to_json(const SessionEvent& event);
// Throws Error(CorruptLog) on any schema problem.
SessionEvent event_from_json(const json& doc);

json events_to_json(std::span<const SessionEvent> events);
std::vector<SessionEvent> events_from_json(const json& doc);

// The derived state a stored document pins next to its log: tree, status
// map, expanded set, phase. Compared against replay on load.
json snapshot(const Session& session);

// Client-facing projection used by the API and `session.json`.
json session_view(const Session& session);

json pending_to_json(const std::vector<PendingItem>& pending);

}  // namespace rpkt::json_io
