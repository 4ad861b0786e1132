#include "rpkt/education_level.hpp"

#include <cctype>
#include <string>

namespace rpkt {

std::string_view to_string(EducationLevel level) {
    switch (level) {
        case EducationLevel::MiddleSchool: return "middle_school";
        case EducationLevel::HighSchool: return "high_school";
        case EducationLevel::Undergraduate: return "undergraduate";
        case EducationLevel::Graduate: return "graduate";
    }
    return "undergraduate";
}

std::string_view describe(EducationLevel level) {
    switch (level) {
        case EducationLevel::MiddleSchool: return "middle school";
        case EducationLevel::HighSchool: return "high school";
        case EducationLevel::Undergraduate: return "undergraduate";
        case EducationLevel::Graduate: return "graduate";
    }
    return "undergraduate";
}

std::optional<EducationLevel> parse_education_level(std::string_view text) {
    std::string norm;
    for (char c : text) {
        if (c == ' ' || c == '-') {
            norm.push_back('_');
        } else {
            norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    for (auto level : {EducationLevel::MiddleSchool, EducationLevel::HighSchool,
                       EducationLevel::Undergraduate, EducationLevel::Graduate}) {
        if (norm == to_string(level)) return level;
    }
    return std::nullopt;
}

}  // namespace rpkt
