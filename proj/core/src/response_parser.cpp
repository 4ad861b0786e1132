#include "rpkt/response_parser.hpp"

#include "rpkt/error.hpp"

namespace rpkt::response {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedResponse, why); }

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string_view strip_fence(std::string_view s) {
    s = trim(s);
    if (s.starts_with("```")) {
        std::size_t eol = s.find('\n');
        if (eol == std::string_view::npos) return s;
        s.remove_prefix(eol + 1);
        s = trim(s);
        if (s.ends_with("```")) s.remove_suffix(3);
        s = trim(s);
    }
    return s;
}

std::string optional_text(const json& doc, const char* field) {
    auto it = doc.find(field);
    if (it == doc.end() || it->is_null()) return {};
    if (!it->is_string()) malformed(std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

std::string message_content(std::string_view http_body) {
    json body = json::parse(http_body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) malformed("response body is not a JSON object");
    auto choices = body.find("choices");
    if (choices == body.end() || !choices->is_array() || choices->empty()) {
        malformed("response has no choices");
    }
    const json& first = choices->front();
    if (!first.is_object()) malformed("choice is not an object");
    auto message = first.find("message");
    if (message == first.end() || !message->is_object()) malformed("choice has no message");
    auto content = message->find("content");
    if (content == message->end() || !content->is_string()) malformed("message has no text content");
    return content->get<std::string>();
}

json parse_object(std::string_view content) {
    std::string_view text = strip_fence(content);
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded()) malformed("model output is not valid JSON");
    if (!doc.is_object()) malformed("model output is not a JSON object");
    return doc;
}

QuestionAnalysis to_analysis(const json& doc) {
    if (!doc.is_object()) malformed("analysis must be an object");
    auto kc = doc.find("key_concepts");
    if (kc == doc.end() || !kc->is_array()) malformed("analysis needs a 'key_concepts' array");
    std::vector<std::string> labels;
    for (const auto& item : *kc) {
        if (item.is_string()) {
            labels.push_back(item.get<std::string>());
        } else if (item.is_object() && item.contains("label") && item["label"].is_string()) {
            labels.push_back(item["label"].get<std::string>());
        } else {
            malformed("key concepts must be strings");
        }
    }
    return sanitize_analysis(optional_text(doc, "understanding"), optional_text(doc, "importance"),
                             labels);
}

ExtractionResult to_extraction(const json& doc, const ConceptId& self) {
    if (!doc.is_object()) malformed("extraction must be an object");
    bool fundamental = false;
    if (auto f = doc.find("fundamental"); f != doc.end() && !f->is_null()) {
        if (!f->is_boolean()) malformed("'fundamental' must be a boolean");
        fundamental = f->get<bool>();
    }
    std::vector<Prerequisite> raw;
    auto list = doc.find("prerequisites");
    if (list == doc.end() || list->is_null()) {
        if (!fundamental) malformed("extraction needs a 'prerequisites' array");
    } else {
        if (!list->is_array()) malformed("'prerequisites' must be an array");
        for (const auto& item : *list) {
            if (item.is_string()) {
                raw.push_back({item.get<std::string>(), {}});
                continue;
            }
            if (!item.is_object()) malformed("prerequisite entries must be objects or strings");
            auto label = item.find("label");
            if (label == item.end() || !label->is_string()) malformed("prerequisite without a string 'label'");
            raw.push_back({label->get<std::string>(), optional_text(item, "rationale")});
        }
    }
    return sanitize_extraction(self, std::move(raw), fundamental);
}

ExtractionResult parse_extraction(std::string_view content, const ConceptId& self) {
    try {
        return to_extraction(parse_object(content), self);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        malformed(e.what());
    }
}

QuestionAnalysis parse_analysis(std::string_view content) {
    try {
        return to_analysis(parse_object(content));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        malformed(e.what());
    }
}

}  // namespace rpkt::response
