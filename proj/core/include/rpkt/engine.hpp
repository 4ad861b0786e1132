#pragma once

#include "rpkt/concept.hpp"
#include "rpkt/education_level.hpp"
#include "rpkt/oracle.hpp"
#include "rpkt/trace_tree.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rpkt {

inline constexpr int kDefaultMaxDepth = 3;
inline constexpr int kMaxAllowedDepth = 6;

enum class Phase { Assessing, Complete };
enum class CapReason { Depth, Fundamental };

std::string_view to_string(Phase phase);
std::string_view to_string(CapReason reason);
std::optional<Phase> parse_phase(std::string_view text);
std::optional<CapReason> parse_cap_reason(std::string_view text);

struct StartedEvent {
    std::string session_id;
    std::string question;
    EducationLevel education_level = EducationLevel::Undergraduate;
    int max_depth = kDefaultMaxDepth;
    friend bool operator==(const StartedEvent&, const StartedEvent&) = default;
};

struct AnalyzedEvent {
    QuestionAnalysis analysis;
    friend bool operator==(const AnalyzedEvent&, const AnalyzedEvent&) = default;
};

struct AssessedEvent {
    ConceptId subject;
    bool known = false;
    bool force = false;
    friend bool operator==(const AssessedEvent&, const AssessedEvent&) = default;
};

// Carries the prerequisite list so replay never needs the oracle.
struct ExpandedEvent {
    ConceptId subject;
    std::vector<Prerequisite> prerequisites;
    friend bool operator==(const ExpandedEvent&, const ExpandedEvent&) = default;
};

struct CappedEvent {
    ConceptId subject;
    CapReason reason = CapReason::Depth;
    friend bool operator==(const CappedEvent&, const CappedEvent&) = default;
};

struct CompletedEvent {
    friend bool operator==(const CompletedEvent&, const CompletedEvent&) = default;
};

using EventPayload =
    std::variant<StartedEvent, AnalyzedEvent, AssessedEvent, ExpandedEvent, CappedEvent, CompletedEvent>;

struct SessionEvent {
    std::uint64_t sequence = 0;
    std::int64_t timestamp_ms = 0;
    EventPayload payload;

    std::string_view kind() const;
    friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

// What the oracle said about a concept the one time it was asked.
struct ExtractionRecord {
    std::vector<Prerequisite> prerequisites;
    bool fundamental = false;
    friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

// Full state of one tracing session. Every field except the log itself is a
// fold over `event_log`; mutate only through TraceEngine or replay().
struct Session {
    std::string session_id;
    std::string question;
    EducationLevel education_level = EducationLevel::Undergraduate;
    int max_depth = kDefaultMaxDepth;
    QuestionAnalysis analysis;
    TraceTree tree;
    KnowledgeStatus status;
    std::set<ConceptId> expanded;
    std::map<ConceptId, ExtractionRecord> extractions;
    Phase phase = Phase::Assessing;
    std::vector<SessionEvent> event_log;
    std::int64_t created_at = 0;
    std::int64_t updated_at = 0;

    // Node ids are keyed by root-to-node concept path so that a node keeps
    // its id across rebuilds.
    std::map<std::string, NodeId> node_paths;
    NodeId next_node_id = 0;
    bool completion_recorded = false;

    friend bool operator==(const Session&, const Session&) = default;
};

struct PendingItem {
    NodeId node_id = 0;
    Concept subject;
    int depth = 0;
    friend bool operator==(const PendingItem&, const PendingItem&) = default;
};

struct AssessmentOutcome {
    std::vector<TraceNode> new_nodes;        // new Primary occurrences
    std::vector<TraceNode> duplicate_nodes;  // new DuplicateReference occurrences
    std::optional<CapReason> cap_reason;
    bool session_complete = false;
};

struct SessionRequest {
    std::string question;
    EducationLevel education_level = EducationLevel::Undergraduate;
    int max_depth = kDefaultMaxDepth;
};

struct EngineOptions {
    // Milliseconds since the epoch; defaults to the system clock.
    std::function<std::int64_t()> clock;
    // Defaults to 16 random hex digits.
    std::function<std::string()> id_generator;
};

// Clock returning start, start + step, start + 2 * step, ...
std::function<std::int64_t()> make_step_clock(std::int64_t start = 0, std::int64_t step = 1);

// Drives sessions forward: asks the oracle, logs events, folds them into
// the session. Holds no per-session state, so one engine can serve many
// sessions; a single session must not be mutated concurrently.
class TraceEngine {
public:
    explicit TraceEngine(Oracle& oracle, EngineOptions options = {});

    // Throws EmptyQuestion, InvalidArgument (max_depth outside 1..6) or the
    // oracle's error.
    Session start_session(const SessionRequest& request);

    // Records a know / don't-know answer and expands as far as the rules
    // allow. Re-submitting the current value is a no-op that also retries
    // any extraction left outstanding by an earlier oracle failure.
    // Throws UnknownConcept, ConflictingAssessment (a flip without `force`)
    // or the oracle's error; on an oracle error the assessment itself stays
    // recorded.
    AssessmentOutcome submit_assessment(Session& session, std::string_view subject, bool known,
                                        bool force = false);

    // Re-attempts extractions that an earlier oracle failure left pending.
    AssessmentOutcome retry_expansions(Session& session);

    Oracle& oracle() noexcept { return oracle_; }

private:
    void append(Session& session, EventPayload payload);
    void expand_outstanding(Session& session);
    void record_completion(Session& session);

    Oracle& oracle_;
    EngineOptions options_;
};

// Primary occurrences whose concept is Unassessed, ordered by node_id.
std::vector<PendingItem> pending_assessments(const Session& session);

// Nothing left to assess and no extraction left outstanding.
bool is_complete(const Session& session);

// Unknown primaries below max depth that still wait for an extraction.
std::vector<NodeId> outstanding_expansions(const Session& session);

// Rebuilds a session from its log alone. Throws Error(CorruptLog) on a gap,
// a misplaced Started/Analyzed, or any event the rules would not produce.
Session replay(std::span<const SessionEvent> events);

// Applies one event to a session (the fold step). Throws Error(CorruptLog).
void apply_event(Session& session, const SessionEvent& event);

// Structural checks over tree, statuses and phase; returns human-readable
// violations (empty when the session is consistent).
std::vector<std::string> invariant_violations(const Session& session);

}  // namespace rpkt
