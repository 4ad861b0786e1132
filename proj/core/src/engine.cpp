#include "rpkt/engine.hpp"

#include "rpkt/error.hpp"
#include "rpkt/log.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <unordered_set>

namespace rpkt {

std::string_view to_string(Phase phase) { return phase == Phase::Complete ? "complete" : "assessing"; }

std::string_view to_string(CapReason reason) { return reason == CapReason::Depth ? "depth" : "fundamental"; }

std::optional<Phase> parse_phase(std::string_view text) {
    if (text == "assessing") return Phase::Assessing;
    if (text == "complete") return Phase::Complete;
    return std::nullopt;
}

std::optional<CapReason> parse_cap_reason(std::string_view text) {
    if (text == "depth") return CapReason::Depth;
    if (text == "fundamental") return CapReason::Fundamental;
    return std::nullopt;
}

std::string_view SessionEvent::kind() const {
    struct Visitor {
        std::string_view operator()(const StartedEvent&) const { return "started"; }
        std::string_view operator()(const AnalyzedEvent&) const { return "analyzed"; }
        std::string_view operator()(const AssessedEvent&) const { return "assessed"; }
        std::string_view operator()(const ExpandedEvent&) const { return "expanded"; }
        std::string_view operator()(const CappedEvent&) const { return "capped"; }
        std::string_view operator()(const CompletedEvent&) const { return "completed"; }
    };
    return std::visit(Visitor{}, payload);
}

std::function<std::int64_t()> make_step_clock(std::int64_t start, std::int64_t step) {
    return [next = start, step]() mutable {
        std::int64_t now = next;
        next += step;
        return now;
    };
}

namespace {

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::CorruptLog, why); }

constexpr char kPathSeparator = '\x1f';

bool analyzed(const Session& s) { return s.event_log.size() >= 2; }

// Breadth-first, canonical construction of the occurrence tree from the
// analysis, the status map and the extraction records. A prerequisite of a
// node at depth d is placed only when its concept is not already placed at
// depth <= d; this subsumes the ancestor guard and keeps every edge pointing
// exactly one level down, so the result does not depend on the order in
// which assessments arrived.
void rebuild(Session& s) {
    auto alloc = [&s](const std::string& path) {
        auto [it, inserted] = s.node_paths.try_emplace(path, s.next_node_id);
        if (inserted) ++s.next_node_id;
        return it->second;
    };

    Concept root = Concept::from_label(s.question);
    alloc("");
    TraceTree tree(root, s.max_depth);
    s.expanded.clear();

    if (!analyzed(s)) {
        s.tree = std::move(tree);
        s.phase = Phase::Assessing;
        return;
    }

    std::map<ConceptId, int> placed_depth{{root.id, 0}};
    std::map<NodeId, std::string> paths{{tree.root().node_id, ""}};
    std::vector<NodeId> frontier{tree.root().node_id};

    for (int depth = 0; !frontier.empty(); ++depth) {
        std::vector<NodeId> next;
        for (NodeId nid : frontier) {
            const TraceNode& node = tree.node(nid);
            if (!node.is_primary()) continue;

            std::vector<Concept> children;
            if (depth == 0) {
                children = s.analysis.key_concepts;
                tree.set_expansion(nid, Expansion::Expanded);
            } else {
                Status st = s.status.get(node.subject);
                auto rec = s.extractions.find(node.subject);
                if (st != Status::Unknown) continue;
                if (rec != s.extractions.end() && rec->second.fundamental) {
                    tree.set_expansion(nid, Expansion::Fundamental);
                    continue;
                }
                if (depth >= s.max_depth) {
                    tree.set_expansion(nid, Expansion::DepthCapped);
                    continue;
                }
                if (rec == s.extractions.end()) continue;
                tree.set_expansion(nid, Expansion::Expanded);
                s.expanded.insert(node.subject);
                for (const auto& p : rec->second.prerequisites) children.push_back(Concept::from_label(p.label));
            }

            const ConceptId parent_concept = node.subject;
            const std::string parent_path = paths.at(nid);
            for (Concept& child : children) {
                if (child.id == parent_concept) continue;
                auto placed = placed_depth.find(child.id);
                if (placed != placed_depth.end() && placed->second <= depth) continue;
                if (auto rec = s.extractions.find(child.id); rec != s.extractions.end()) {
                    child.fundamental = rec->second.fundamental;
                }
                std::string path = parent_path + kPathSeparator + child.id.key();
                auto added = tree.add_child(nid, child, alloc(path));
                paths.emplace(added.node_id, std::move(path));
                if (added.occurrence == Occurrence::Primary) {
                    placed_depth.emplace(child.id, depth + 1);
                    next.push_back(added.node_id);
                }
            }
        }
        frontier = std::move(next);
    }

    s.tree = std::move(tree);
    s.phase = pending_assessments(s).empty() && outstanding_expansions(s).empty() ? Phase::Complete
                                                                                  : Phase::Assessing;
}

const TraceNode& surfaced_primary(const Session& s, const ConceptId& subject) {
    auto primary = s.tree.primary_of(subject);
    if (!primary || *primary == s.tree.root().node_id) {
        corrupt("'" + subject.key() + "' has no surfaced occurrence");
    }
    return s.tree.node(*primary);
}

void check_prerequisite_list(const ConceptId& owner, const std::vector<Prerequisite>& list) {
    if (list.empty() || list.size() > kMaxPrerequisites) {
        corrupt("expansion of '" + owner.key() + "' carries " + std::to_string(list.size()) + " prerequisites");
    }
    std::set<std::string> seen{owner.key()};
    for (const auto& p : list) {
        std::string key = normalized_key(p.label);
        if (key.empty() || !seen.insert(key).second) {
            corrupt("expansion of '" + owner.key() + "' has an invalid or repeated label '" + p.label + "'");
        }
    }
}

std::string random_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

std::int64_t system_clock_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

void apply_event(Session& s, const SessionEvent& event) {
    if (event.sequence != s.event_log.size()) {
        corrupt("expected sequence " + std::to_string(s.event_log.size()) + ", found " +
                std::to_string(event.sequence));
    }
    const bool is_started = std::holds_alternative<StartedEvent>(event.payload);
    if (s.event_log.empty() != is_started) corrupt("the log must open with exactly one Started event");
    if (std::holds_alternative<AnalyzedEvent>(event.payload) != (s.event_log.size() == 1)) {
        corrupt("Analyzed must directly follow Started");
    }

    if (const auto* e = std::get_if<StartedEvent>(&event.payload)) {
        if (e->max_depth < 1 || e->max_depth > kMaxAllowedDepth) corrupt("max_depth out of range");
        if (normalized_key(e->question).empty()) corrupt("empty question");
        s.session_id = e->session_id;
        s.question = e->question;
        s.education_level = e->education_level;
        s.max_depth = e->max_depth;
        s.created_at = event.timestamp_ms;
    } else if (const auto* e = std::get_if<AnalyzedEvent>(&event.payload)) {
        s.analysis = e->analysis;
    } else if (const auto* e = std::get_if<AssessedEvent>(&event.payload)) {
        surfaced_primary(s, e->subject);
        Status current = s.status.get(e->subject);
        Status desired = e->known ? Status::Known : Status::Unknown;
        if (current == desired) corrupt("no-op assessment of '" + e->subject.key() + "'");
        if (current != Status::Unassessed && !e->force) {
            corrupt("unforced flip of '" + e->subject.key() + "'");
        }
        s.status.set(e->subject, desired);
    } else if (const auto* e = std::get_if<ExpandedEvent>(&event.payload)) {
        const TraceNode& node = surfaced_primary(s, e->subject);
        if (s.status.get(e->subject) != Status::Unknown || node.depth >= s.max_depth ||
            s.extractions.contains(e->subject)) {
            corrupt("'" + e->subject.key() + "' is not eligible for expansion");
        }
        check_prerequisite_list(e->subject, e->prerequisites);
        s.extractions[e->subject] = ExtractionRecord{e->prerequisites, false};
    } else if (const auto* e = std::get_if<CappedEvent>(&event.payload)) {
        const TraceNode& node = surfaced_primary(s, e->subject);
        if (s.status.get(e->subject) != Status::Unknown) corrupt("cap of a concept that is not unknown");
        if (e->reason == CapReason::Depth) {
            if (node.depth != s.max_depth) corrupt("depth cap below max depth");
        } else {
            if (node.depth >= s.max_depth || s.extractions.contains(e->subject)) {
                corrupt("'" + e->subject.key() + "' cannot be marked fundamental here");
            }
            s.extractions[e->subject] = ExtractionRecord{{}, true};
        }
    } else if (std::holds_alternative<CompletedEvent>(event.payload)) {
        if (s.phase != Phase::Complete || s.completion_recorded) corrupt("unexpected Completed event");
        s.completion_recorded = true;
    }

    s.event_log.push_back(event);
    s.updated_at = event.timestamp_ms;
    if (!std::holds_alternative<CompletedEvent>(event.payload)) {
        rebuild(s);
        if (s.phase == Phase::Assessing) s.completion_recorded = false;
    }
}

Session replay(std::span<const SessionEvent> events) {
    if (events.empty()) corrupt("empty event log");
    Session s;
    try {
        for (const auto& e : events) apply_event(s, e);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptLog) throw;
        corrupt(e.what());
    }
    return s;
}

std::vector<PendingItem> pending_assessments(const Session& s) {
    std::vector<PendingItem> out;
    if (s.tree.size() == 0) return out;
    const NodeId root = s.tree.root().node_id;
    for (const auto& n : s.tree.nodes()) {
        if (n.node_id == root || !n.is_primary()) continue;
        if (s.status.get(n.subject) != Status::Unassessed) continue;
        out.push_back({n.node_id, s.tree.concept_for(n.subject), n.depth});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.node_id < b.node_id; });
    return out;
}

bool is_complete(const Session& s) {
    return analyzed(s) && pending_assessments(s).empty() && outstanding_expansions(s).empty();
}

std::vector<NodeId> outstanding_expansions(const Session& s) {
    std::vector<NodeId> out;
    if (s.tree.size() == 0) return out;
    const NodeId root = s.tree.root().node_id;
    for (const auto& n : s.tree.nodes()) {
        if (n.node_id == root || !n.is_primary()) continue;
        if (s.status.get(n.subject) == Status::Unknown && n.depth < s.max_depth &&
            !s.extractions.contains(n.subject)) {
            out.push_back(n.node_id);
        }
    }
    return out;
}

std::vector<std::string> invariant_violations(const Session& s) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < s.event_log.size(); ++i) {
        if (s.event_log[i].sequence != i) {
            v.push_back("event sequence gap at " + std::to_string(i));
            break;
        }
    }
    if (s.event_log.empty()) v.push_back("empty event log");
    if (s.tree.size() == 0) {
        v.push_back("empty tree");
        return v;
    }

    const TraceNode& root = s.tree.root();
    if (root.depth != 0 || root.parent) v.push_back("root must sit at depth 0 without a parent");

    std::map<ConceptId, int> primaries;
    for (const auto& n : s.tree.nodes()) {
        if (n.is_primary()) ++primaries[n.subject];
        if (n.depth > s.max_depth) v.push_back("node " + std::to_string(n.node_id) + " deeper than max_depth");
        if (n.parent) {
            const TraceNode* parent = s.tree.find(*n.parent);
            if (parent == nullptr) {
                v.push_back("node " + std::to_string(n.node_id) + " has a missing parent");
                continue;
            }
            if (n.depth != parent->depth + 1) v.push_back("node " + std::to_string(n.node_id) + " has a bad depth");
            if (s.tree.is_ancestor_or_self(*n.parent, n.subject)) {
                v.push_back("node " + std::to_string(n.node_id) + " repeats an ancestor concept");
            }
        } else if (n.node_id != root.node_id) {
            v.push_back("node " + std::to_string(n.node_id) + " has no parent");
        }
        if (!n.is_primary() && (!n.children.empty() || n.expansion != Expansion::Unexpanded)) {
            v.push_back("duplicate reference " + std::to_string(n.node_id) + " has children or an expansion");
        }
    }
    for (const auto& n : s.tree.nodes()) {
        if (primaries[n.subject] != 1) {
            v.push_back("concept '" + n.subject.key() + "' has " + std::to_string(primaries[n.subject]) +
                        " primary occurrences");
        }
    }
    for (const auto& c : s.expanded) {
        if (s.status.get(c) != Status::Unknown) v.push_back("expanded concept '" + c.key() + "' is not unknown");
    }
    if (analyzed(s) && (s.phase == Phase::Complete) != is_complete(s)) {
        v.push_back("phase disagrees with the pending list");
    }
    return v;
}

TraceEngine::TraceEngine(Oracle& oracle, EngineOptions options) : oracle_(oracle), options_(std::move(options)) {
    if (!options_.clock) options_.clock = system_clock_ms;
    if (!options_.id_generator) options_.id_generator = random_session_id;
}

void TraceEngine::append(Session& session, EventPayload payload) {
    SessionEvent event{session.event_log.size(), options_.clock(), std::move(payload)};
    apply_event(session, event);
}

Session TraceEngine::start_session(const SessionRequest& request) {
    std::string question = request.question;
    const auto first = question.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || normalized_key(question).empty()) {
        throw Error(ErrorCode::EmptyQuestion, "question is empty");
    }
    question = question.substr(first, question.find_last_not_of(" \t\r\n") - first + 1);
    if (request.max_depth < 1 || request.max_depth > kMaxAllowedDepth) {
        throw Error(ErrorCode::InvalidArgument,
                    "max_depth must be between 1 and " + std::to_string(kMaxAllowedDepth));
    }
    const ConceptId root = ConceptId::normalize(question);

    QuestionAnalysis analysis = oracle_.analyze_question(question, request.education_level);
    std::set<ConceptId> seen{root};
    std::erase_if(analysis.key_concepts, [&](const Concept& c) { return !seen.insert(c.id).second; });
    if (analysis.key_concepts.size() > kMaxKeyConcepts) {
        log_warning("truncating key concepts to " + std::to_string(kMaxKeyConcepts));
        analysis.key_concepts.resize(kMaxKeyConcepts);
    }
    if (analysis.key_concepts.empty()) {
        throw Error(ErrorCode::MalformedResponse, "analysis yielded no key concepts distinct from the question");
    }

    Session session;
    append(session, StartedEvent{options_.id_generator(), question, request.education_level, request.max_depth});
    append(session, AnalyzedEvent{std::move(analysis)});
    return session;
}

void TraceEngine::expand_outstanding(Session& session) {
    for (;;) {
        auto outstanding = outstanding_expansions(session);
        if (outstanding.empty()) return;
        const TraceNode& node = session.tree.node(outstanding.front());
        const Concept subject = session.tree.concept_for(node.subject);

        OracleRequestContext ctx{session.question, session.education_level, {}};
        for (const auto& a : session.tree.ancestor_concepts(node.node_id)) {
            ctx.ancestor_chain.push_back(session.tree.concept_for(a).display_label);
        }
        ctx.ancestor_chain.push_back(subject.display_label);

        ExtractionResult raw = oracle_.extract_candidates(subject, ctx);
        ExtractionResult result = sanitize_extraction(subject.id, std::move(raw.prerequisites), raw.fundamental);
        clamp_prerequisites(result);
        if (result.fundamental) {
            append(session, CappedEvent{subject.id, CapReason::Fundamental});
        } else {
            append(session, ExpandedEvent{subject.id, std::move(result.prerequisites)});
        }
    }
}

void TraceEngine::record_completion(Session& session) {
    if (session.phase == Phase::Complete && !session.completion_recorded) append(session, CompletedEvent{});
}

namespace {

struct OutcomeTracker {
    std::unordered_set<NodeId> before;
    std::size_t first_event = 0;

    explicit OutcomeTracker(const Session& s) : first_event(s.event_log.size()) {
        for (const auto& n : s.tree.nodes()) before.insert(n.node_id);
    }

    AssessmentOutcome finish(const Session& s, const std::optional<ConceptId>& assessed) const {
        AssessmentOutcome out;
        for (const auto& n : s.tree.nodes()) {
            if (before.contains(n.node_id)) continue;
            (n.is_primary() ? out.new_nodes : out.duplicate_nodes).push_back(n);
        }
        if (assessed) {
            for (std::size_t i = first_event; i < s.event_log.size(); ++i) {
                const auto* cap = std::get_if<CappedEvent>(&s.event_log[i].payload);
                if (cap && cap->subject == *assessed) out.cap_reason = cap->reason;
            }
        }
        out.session_complete = is_complete(s);
        return out;
    }
};

}  // namespace

AssessmentOutcome TraceEngine::submit_assessment(Session& session, std::string_view subject, bool known,
                                                 bool force) {
    if (!analyzed(session)) throw Error(ErrorCode::InvalidArgument, "session has not been started");
    const std::string key = normalized_key(subject);
    if (key.empty()) throw Error(ErrorCode::UnknownConcept, "empty concept id");
    const ConceptId id = ConceptId::from_key(key);
    auto primary = session.tree.primary_of(id);
    if (!primary || *primary == session.tree.root().node_id) {
        throw Error(ErrorCode::UnknownConcept, "'" + key + "' has not been surfaced in this session");
    }

    OutcomeTracker tracker(session);
    const Status current = session.status.get(id);
    const Status desired = known ? Status::Known : Status::Unknown;

    if (current != desired) {
        if (current != Status::Unassessed && !force) {
            throw Error(ErrorCode::ConflictingAssessment,
                        "'" + key + "' is already " + std::string(to_string(current)) +
                            "; pass force to change it");
        }
        append(session, AssessedEvent{id, known, force && current != Status::Unassessed});
        if (desired == Status::Unknown) {
            const TraceNode& node = session.tree.node(*session.tree.primary_of(id));
            auto rec = session.extractions.find(id);
            const bool fundamental = rec != session.extractions.end() && rec->second.fundamental;
            if (node.depth == session.max_depth && !fundamental) {
                append(session, CappedEvent{id, CapReason::Depth});
            }
        }
    }

    expand_outstanding(session);
    record_completion(session);
    return tracker.finish(session, current != desired ? std::optional<ConceptId>(id) : std::nullopt);
}

AssessmentOutcome TraceEngine::retry_expansions(Session& session) {
    OutcomeTracker tracker(session);
    expand_outstanding(session);
    record_completion(session);
    return tracker.finish(session, std::nullopt);
}

}  // namespace rpkt
