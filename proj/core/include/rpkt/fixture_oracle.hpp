#pragma once

#include "rpkt/oracle.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rpkt {

inline constexpr int kFixtureVersion = 1;

struct FixtureAnalysis {
    // Normalized substring of the question; "*" matches any question.
    std::string match;
    QuestionAnalysis analysis;
};

struct FixtureExplanation {
    std::string match;
    std::set<ConceptId> unknown;
    std::string text;
};

// Deterministic stand-in for a language model. Concepts absent from
// `prerequisites` are fundamental in open mode and an oracle failure in
// closed mode.
struct FixtureGraph {
    bool open_mode = true;
    std::vector<FixtureAnalysis> analyses;
    std::map<ConceptId, std::vector<Prerequisite>> prerequisites;
    std::set<ConceptId> fundamentals;
    std::vector<FixtureExplanation> explanations;

    // Throws Error(InvalidArgument) if a closed fixture lists a prerequisite
    // that has neither an entry nor a fundamental mark.
    void validate() const;

    static FixtureGraph from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

// Throws Error(NotFound) / Error(InvalidArgument).
FixtureGraph load_fixture(const std::filesystem::path& path);

class FixtureOracle : public Oracle {
public:
    explicit FixtureOracle(FixtureGraph graph);

    std::string_view mode() const override { return "fixture"; }
    QuestionAnalysis analyze_question(std::string_view question, EducationLevel level) override;
    ExtractionResult extract_candidates(const Concept& subject, const OracleRequestContext& ctx) override;
    std::string generate_explanation(const ExplanationRequest& request) override;

    const FixtureGraph& graph() const noexcept { return graph_; }

private:
    FixtureGraph graph_;
};

// Deterministic explanation text with the acknowledge / explain / synthesize
// structure; used when a fixture carries no canned text.
std::string compose_fallback_explanation(const ExplanationRequest& request);

}  // namespace rpkt
