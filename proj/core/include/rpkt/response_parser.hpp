#pragma once

#include "rpkt/oracle.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace rpkt::response {

// Pulls choices[0].message.content out of a chat-completion response body.
// Throws Error(MalformedResponse).
std::string message_content(std::string_view http_body);

// Parses model output as a JSON object, tolerating surrounding whitespace
// and a ``` / ```json code fence. Throws Error(MalformedResponse).
nlohmann::json parse_object(std::string_view content);

// Schema checks. Unknown extra fields are ignored. Throw
// Error(MalformedResponse) on violations.
QuestionAnalysis to_analysis(const nlohmann::json& doc);
ExtractionResult to_extraction(const nlohmann::json& doc, const ConceptId& self);

// Whole pipeline from arbitrary bytes of model output. Never throws
// anything but rpkt::Error.
ExtractionResult parse_extraction(std::string_view content, const ConceptId& self);
QuestionAnalysis parse_analysis(std::string_view content);

}  // namespace rpkt::response
