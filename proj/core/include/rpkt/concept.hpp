#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rpkt {

// Canonical identity of a named concept: lowercased, internal whitespace
// collapsed to single spaces, surrounding punctuation trimmed. Two labels
// name the same concept iff their keys are equal. No stemming or synonym
// merging: "Derivative" and "Differentiation" stay distinct.
class ConceptId {
public:
    ConceptId() = default;

    // Throws Error(EmptyLabel) when nothing survives normalization.
    static ConceptId normalize(std::string_view raw);

    // Accepts a key that is already canonical; throws Error(EmptyLabel) or
    // Error(InvalidArgument) otherwise.
    static ConceptId from_key(std::string_view key);

    const std::string& key() const noexcept { return key_; }
    bool empty() const noexcept { return key_.empty(); }

    friend auto operator<=>(const ConceptId&, const ConceptId&) = default;

private:
    explicit ConceptId(std::string key) : key_(std::move(key)) {}
    std::string key_;
};

ConceptId normalize_label(std::string_view raw);

// Label normalization without the non-empty check; returns "" for inputs
// that contain only whitespace and punctuation.
std::string normalized_key(std::string_view raw);

struct Concept {
    ConceptId id;
    std::string display_label;
    bool fundamental = false;

    static Concept from_label(std::string_view label, bool fundamental = false);

    friend bool operator==(const Concept&, const Concept&) = default;
};

enum class Status { Unassessed, Known, Unknown };

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

// Per-concept knowledge state shared by every occurrence of a concept.
// Absent concepts read as Unassessed; a set status never reverts.
class KnowledgeStatus {
public:
    Status get(const ConceptId& id) const;

    // Throws Error(InvariantViolation) on an attempt to reset to Unassessed.
    void set(const ConceptId& id, Status status);

    bool contains(const ConceptId& id) const { return entries_.contains(id); }
    std::size_t assessed_count() const noexcept { return entries_.size(); }
    const std::map<ConceptId, Status>& entries() const noexcept { return entries_; }

    friend bool operator==(const KnowledgeStatus&, const KnowledgeStatus&) = default;

private:
    std::map<ConceptId, Status> entries_;
};

}  // namespace rpkt

template <>
struct std::hash<rpkt::ConceptId> {
    std::size_t operator()(const rpkt::ConceptId& id) const noexcept {
        return std::hash<std::string>{}(id.key());
    }
};
