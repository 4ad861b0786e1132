#pragma once

#include "rpkt/concept.hpp"
#include "rpkt/education_level.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rpkt {

inline constexpr std::size_t kMaxPrerequisites = 4;
inline constexpr std::size_t kMaxKeyConcepts = 6;

struct QuestionAnalysis {
    std::string understanding;
    std::string importance;
    std::vector<Concept> key_concepts;

    friend bool operator==(const QuestionAnalysis&, const QuestionAnalysis&) = default;
};

struct OracleRequestContext {
    std::string question;
    EducationLevel education_level = EducationLevel::Undergraduate;
    // Display labels from the root target down to the concept being expanded.
    std::vector<std::string> ancestor_chain;
};

struct Prerequisite {
    std::string label;
    std::string rationale;

    friend bool operator==(const Prerequisite&, const Prerequisite&) = default;
};

struct ExtractionResult {
    std::vector<Prerequisite> prerequisites;
    bool fundamental = false;

    friend bool operator==(const ExtractionResult&, const ExtractionResult&) = default;
};

struct ExplanationItem {
    Concept subject;
    Status status = Status::Unknown;
};

struct ExplanationRequest {
    std::string question;
    EducationLevel education_level = EducationLevel::Undergraduate;
    std::vector<Concept> known;
    // Prerequisite-first order; items may be Unknown or still Unassessed.
    std::vector<ExplanationItem> unknown_ordered;
};

struct HealthReport {
    bool reachable = true;
    std::string detail;
};

// Source of question analyses, prerequisite lists, fundamentality and
// explanations. Implementations must be safe to share between sessions.
class Oracle {
public:
    virtual ~Oracle() = default;

    virtual std::string_view mode() const = 0;

    // 1..6 distinct key concepts. Throws OracleFailure / MalformedResponse.
    virtual QuestionAnalysis analyze_question(std::string_view question, EducationLevel level) = 0;

    // Validated prerequisite candidates for `concept`: self references and
    // duplicates removed, fundamental flag resolved, NOT clamped and NOT
    // filtered against the context's ancestor chain. This is the single
    // oracle round-trip per concept; the trace engine applies its own
    // placement filter on top.
    virtual ExtractionResult extract_candidates(const Concept& subject,
                                                const OracleRequestContext& ctx) = 0;

    // Candidates with the context's ancestors removed, clamped to four.
    ExtractionResult extract_prereqs(const Concept& subject, const OracleRequestContext& ctx);

    virtual std::string generate_explanation(const ExplanationRequest& request) = 0;

    virtual HealthReport health() { return {}; }
};

// Drops empty labels, self references and duplicates; clears the list for
// fundamental concepts; coerces an empty non-fundamental list to
// fundamental (with a warning).
ExtractionResult sanitize_extraction(const ConceptId& self, std::vector<Prerequisite> raw,
                                     bool fundamental);

// Truncates to kMaxPrerequisites in the given order, warning on overflow.
void clamp_prerequisites(ExtractionResult& result);

// Removes every label that normalizes to one of `ancestors`.
void remove_ancestors(ExtractionResult& result, const std::vector<std::string>& ancestors);

// Dedups key concepts by key, clamps to six (warning), and throws
// MalformedResponse when nothing usable remains.
QuestionAnalysis sanitize_analysis(std::string understanding, std::string importance,
                                   const std::vector<std::string>& key_concept_labels);

}  // namespace rpkt
