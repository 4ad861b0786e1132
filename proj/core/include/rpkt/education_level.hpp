#pragma once

#include <optional>
#include <string_view>

namespace rpkt {

enum class EducationLevel { MiddleSchool, HighSchool, Undergraduate, Graduate };

// Wire form: "middle_school", "high_school", "undergraduate", "graduate".
std::string_view to_string(EducationLevel level);

// Human-readable form used inside prompts ("high school").
std::string_view describe(EducationLevel level);

// Accepts the wire form case-insensitively, with spaces or hyphens in place
// of underscores.
std::optional<EducationLevel> parse_education_level(std::string_view text);

}  // namespace rpkt
