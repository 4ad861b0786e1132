#include "rpkt/session_json.hpp"

#include "rpkt/error.hpp"

namespace rpkt::json_io {

namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::CorruptLog, "event log: " + why); }

json prerequisites_to_json(const std::vector<Prerequisite>& list) {
    json arr = json::array();
    for (const auto& p : list) arr.push_back({{"label", p.label}, {"rationale", p.rationale}});
    return arr;
}

std::vector<Prerequisite> prerequisites_from_json(const json& arr) {
    std::vector<Prerequisite> out;
    for (const auto& p : arr) out.push_back({p.at("label").get<std::string>(), p.value("rationale", std::string{})});
    return out;
}

}  // namespace

json to_json(const Concept& subject) {
    return {{"concept_id", subject.id.key()}, {"label", subject.display_label}, {"fundamental", subject.fundamental}};
}

json to_json(const QuestionAnalysis& analysis) {
    json concepts = json::array();
    for (const auto& c : analysis.key_concepts) concepts.push_back({{"concept_id", c.id.key()}, {"label", c.display_label}});
    return {{"understanding", analysis.understanding}, {"importance", analysis.importance}, {"key_concepts", concepts}};
}

json to_json(const TraceNode& node, const TraceTree& tree) {
    json j{{"node_id", node.node_id},
           {"concept_id", node.subject.key()},
           {"label", tree.concept_for(node.subject).display_label},
           {"depth", node.depth},
           {"parent", node.parent ? json(*node.parent) : json(nullptr)},
           {"children", node.children},
           {"occurrence", to_string(node.occurrence)},
           {"expansion", to_string(node.expansion)}};
    return j;
}

json to_json(const PendingItem& item) {
    return {{"node_id", item.node_id}, {"concept_id", item.subject.id.key()}, {"label", item.subject.display_label},
            {"depth", item.depth}};
}

json pending_to_json(const std::vector<PendingItem>& pending) {
    json arr = json::array();
    for (const auto& p : pending) arr.push_back(to_json(p));
    return arr;
}

json to_json(const AssessmentOutcome& outcome, const TraceTree& tree) {
    json fresh = json::array();
    json dups = json::array();
    for (const auto& n : outcome.new_nodes) fresh.push_back(to_json(n, tree));
    for (const auto& n : outcome.duplicate_nodes) dups.push_back(to_json(n, tree));
    return {{"new_nodes", fresh},
            {"duplicate_nodes", dups},
            {"cap_reason", outcome.cap_reason ? json(to_string(*outcome.cap_reason)) : json(nullptr)},
            {"session_complete", outcome.session_complete}};
}

json event_to_json(const SessionEvent& event) {
    json j{{"seq", event.sequence}, {"at_ms", event.timestamp_ms}, {"kind", event.kind()}};
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, StartedEvent>) {
                j["session_id"] = e.session_id;
                j["question"] = e.question;
                j["education_level"] = to_string(e.education_level);
                j["max_depth"] = e.max_depth;
            } else if constexpr (std::is_same_v<T, AnalyzedEvent>) {
                json labels = json::array();
                for (const auto& c : e.analysis.key_concepts) labels.push_back(c.display_label);
                j["understanding"] = e.analysis.understanding;
                j["importance"] = e.analysis.importance;
                j["key_concepts"] = labels;
            } else if constexpr (std::is_same_v<T, AssessedEvent>) {
                j["concept"] = e.subject.key();
                j["known"] = e.known;
                j["force"] = e.force;
            } else if constexpr (std::is_same_v<T, ExpandedEvent>) {
                j["concept"] = e.subject.key();
                j["prerequisites"] = prerequisites_to_json(e.prerequisites);
            } else if constexpr (std::is_same_v<T, CappedEvent>) {
                j["concept"] = e.subject.key();
                j["reason"] = to_string(e.reason);
            }
        },
        event.payload);
    return j;
}

SessionEvent event_from_json(const json& doc) {
    try {
        SessionEvent event;
        event.sequence = doc.at("seq").get<std::uint64_t>();
        event.timestamp_ms = doc.at("at_ms").get<std::int64_t>();
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "started") {
            auto level = parse_education_level(doc.at("education_level").get<std::string>());
            if (!level) corrupt("unknown education level");
            event.payload = StartedEvent{doc.at("session_id").get<std::string>(), doc.at("question").get<std::string>(),
                                         *level, doc.at("max_depth").get<int>()};
        } else if (kind == "analyzed") {
            QuestionAnalysis a;
            a.understanding = doc.value("understanding", std::string{});
            a.importance = doc.value("importance", std::string{});
            for (const auto& label : doc.at("key_concepts")) a.key_concepts.push_back(Concept::from_label(label.get<std::string>()));
            event.payload = AnalyzedEvent{std::move(a)};
        } else if (kind == "assessed") {
            event.payload = AssessedEvent{ConceptId::from_key(doc.at("concept").get<std::string>()),
                                          doc.at("known").get<bool>(), doc.value("force", false)};
        } else if (kind == "expanded") {
            event.payload = ExpandedEvent{ConceptId::from_key(doc.at("concept").get<std::string>()),
                                          prerequisites_from_json(doc.at("prerequisites"))};
        } else if (kind == "capped") {
            auto reason = parse_cap_reason(doc.at("reason").get<std::string>());
            if (!reason) corrupt("unknown cap reason");
            event.payload = CappedEvent{ConceptId::from_key(doc.at("concept").get<std::string>()), *reason};
        } else if (kind == "completed") {
            event.payload = CompletedEvent{};
        } else {
            corrupt("unknown event kind '" + kind + "'");
        }
        return event;
    } catch (const json::exception& e) {
        corrupt(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptLog) throw;
        corrupt(e.what());
    }
}

json events_to_json(std::span<const SessionEvent> events) {
    json arr = json::array();
    for (const auto& e : events) arr.push_back(event_to_json(e));
    return arr;
}

std::vector<SessionEvent> events_from_json(const json& doc) {
    if (!doc.is_array()) corrupt("event_log must be an array");
    std::vector<SessionEvent> out;
    out.reserve(doc.size());
    for (const auto& e : doc) out.push_back(event_from_json(e));
    return out;
}

json snapshot(const Session& session) {
    json nodes = json::array();
    for (const auto& n : session.tree.nodes()) nodes.push_back(to_json(n, session.tree));
    json status = json::object();
    for (const auto& [id, st] : session.status.entries()) status[id.key()] = to_string(st);
    json expanded = json::array();
    for (const auto& c : session.expanded) expanded.push_back(c.key());
    return {{"nodes", nodes}, {"status", status}, {"expanded", expanded}, {"phase", to_string(session.phase)}};
}

json session_view(const Session& session) {
    json view{{"session_id", session.session_id},
              {"question", session.question},
              {"education_level", to_string(session.education_level)},
              {"max_depth", session.max_depth},
              {"analysis", to_json(session.analysis)},
              {"pending", pending_to_json(pending_assessments(session))},
              {"created_at", session.created_at},
              {"updated_at", session.updated_at}};
    view.update(snapshot(session));
    return view;
}

}  // namespace rpkt::json_io
