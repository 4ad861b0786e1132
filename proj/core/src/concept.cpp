#include "rpkt/concept.hpp"

#include "rpkt/error.hpp"

#include <cctype>

namespace rpkt {
namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

// '+' and '#' are kept so that "C++" and "C#" survive trimming.
bool is_trim_punct(unsigned char c) {
    return c < 0x80 && std::ispunct(c) != 0 && c != '+' && c != '#';
}

}  // namespace

std::string normalized_key(std::string_view raw) {
    std::string collapsed;
    collapsed.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (is_space(c)) {
            pending_space = !collapsed.empty();
            continue;
        }
        if (pending_space) {
            collapsed.push_back(' ');
            pending_space = false;
        }
        collapsed.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }

    std::size_t begin = 0;
    std::size_t end = collapsed.size();
    auto trimmable = [](unsigned char c) { return is_space(c) || is_trim_punct(c); };
    while (begin < end && trimmable(static_cast<unsigned char>(collapsed[begin]))) ++begin;
    while (end > begin && trimmable(static_cast<unsigned char>(collapsed[end - 1]))) --end;
    return collapsed.substr(begin, end - begin);
}

ConceptId ConceptId::normalize(std::string_view raw) {
    std::string key = normalized_key(raw);
    if (key.empty()) {
        throw Error(ErrorCode::EmptyLabel, "label '" + std::string(raw) + "' normalizes to nothing");
    }
    return ConceptId(std::move(key));
}

ConceptId ConceptId::from_key(std::string_view key) {
    ConceptId id = normalize(key);
    if (id.key() != key) {
        throw Error(ErrorCode::InvalidArgument, "'" + std::string(key) + "' is not a canonical concept key");
    }
    return id;
}

ConceptId normalize_label(std::string_view raw) { return ConceptId::normalize(raw); }

Concept Concept::from_label(std::string_view label, bool fundamental) {
    ConceptId id = ConceptId::normalize(label);
    // Display label keeps the original casing; whitespace runs collapse to one space.
    std::string display;
    bool gap = false;
    for (unsigned char ch : label) {
        if (std::isspace(ch)) {
            gap = !display.empty();
            continue;
        }
        if (gap) display += ' ';
        gap = false;
        display += static_cast<char>(ch);
    }
    return Concept{std::move(id), std::move(display), fundamental};
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::Unassessed: return "unassessed";
        case Status::Known: return "known";
        case Status::Unknown: return "unknown";
    }
    return "unassessed";
}

std::optional<Status> parse_status(std::string_view text) {
    if (text == "unassessed") return Status::Unassessed;
    if (text == "known") return Status::Known;
    if (text == "unknown") return Status::Unknown;
    return std::nullopt;
}

Status KnowledgeStatus::get(const ConceptId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? Status::Unassessed : it->second;
}

void KnowledgeStatus::set(const ConceptId& id, Status status) {
    if (status == Status::Unassessed) {
        throw Error(ErrorCode::InvariantViolation,
                    "status of '" + id.key() + "' cannot revert to unassessed");
    }
    entries_[id] = status;
}

}  // namespace rpkt
