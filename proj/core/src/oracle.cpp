#include "rpkt/oracle.hpp"

#include "rpkt/error.hpp"
#include "rpkt/log.hpp"

#include <algorithm>
#include <set>

namespace rpkt {

ExtractionResult Oracle::extract_prereqs(const Concept& subject, const OracleRequestContext& ctx) {
    ExtractionResult result = extract_candidates(subject, ctx);
    remove_ancestors(result, ctx.ancestor_chain);
    clamp_prerequisites(result);
    return result;
}

ExtractionResult sanitize_extraction(const ConceptId& self, std::vector<Prerequisite> raw,
                                     bool fundamental) {
    ExtractionResult out;
    out.fundamental = fundamental;
    if (fundamental) {
        if (!raw.empty()) {
            log_warning("'" + self.key() + "' marked fundamental; ignoring " +
                        std::to_string(raw.size()) + " listed prerequisites");
        }
        return out;
    }
    std::set<std::string> seen{self.key()};
    for (auto& p : raw) {
        std::string key = normalized_key(p.label);
        if (key.empty() || !seen.insert(key).second) continue;
        out.prerequisites.push_back(std::move(p));
    }
    if (out.prerequisites.empty()) {
        log_warning("no usable prerequisites for '" + self.key() + "'; treating it as fundamental");
        out.fundamental = true;
    }
    return out;
}

void clamp_prerequisites(ExtractionResult& result) {
    if (result.prerequisites.size() > kMaxPrerequisites) {
        log_warning("truncating " + std::to_string(result.prerequisites.size()) +
                    " prerequisites to " + std::to_string(kMaxPrerequisites));
        result.prerequisites.resize(kMaxPrerequisites);
    }
}

void remove_ancestors(ExtractionResult& result, const std::vector<std::string>& ancestors) {
    std::set<std::string> keys;
    for (const auto& a : ancestors) keys.insert(normalized_key(a));
    std::erase_if(result.prerequisites,
                  [&](const Prerequisite& p) { return keys.contains(normalized_key(p.label)); });
}

QuestionAnalysis sanitize_analysis(std::string understanding, std::string importance,
                                   const std::vector<std::string>& key_concept_labels) {
    QuestionAnalysis analysis;
    analysis.understanding = std::move(understanding);
    analysis.importance = std::move(importance);
    std::set<std::string> seen;
    for (const auto& label : key_concept_labels) {
        std::string key = normalized_key(label);
        if (key.empty() || !seen.insert(key).second) continue;
        analysis.key_concepts.push_back(Concept::from_label(label));
    }
    if (analysis.key_concepts.empty()) {
        throw Error(ErrorCode::MalformedResponse, "question analysis lists no usable key concepts");
    }
    if (analysis.key_concepts.size() > kMaxKeyConcepts) {
        log_warning("truncating " + std::to_string(analysis.key_concepts.size()) +
                    " key concepts to " + std::to_string(kMaxKeyConcepts));
        analysis.key_concepts.resize(kMaxKeyConcepts);
    }
    return analysis;
}

}  // namespace rpkt
