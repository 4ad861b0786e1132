#pragma once

#include "rpkt/oracle.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rpkt::prompts {

// Template names as shipped under core/prompts (file stem, e.g. "extraction.v1").
inline constexpr std::string_view kAnalysis = "analysis.v1";
inline constexpr std::string_view kExtraction = "extraction.v1";
inline constexpr std::string_view kExplanation = "explanation.v1";
inline constexpr std::string_view kExplanationMastered = "explanation_mastered.v1";
inline constexpr std::string_view kRepair = "repair.v1";
inline constexpr std::string_view kSystem = "system.v1";

// Throws Error(NotFound) for an unknown template name.
std::string_view get(std::string_view name);
std::vector<std::string_view> names();

// Replaces every {{placeholder}}. A placeholder without a value, or a value
// without a placeholder, is an Error(InvalidArgument).
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

std::string analysis(std::string_view question, EducationLevel level);
std::string extraction(const Concept& subject, const OracleRequestContext& ctx);
std::string explanation(const ExplanationRequest& request);
std::string repair(std::string_view error);

}  // namespace rpkt::prompts
