#pragma once

#include "rpkt/concept.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rpkt {

using NodeId = std::uint32_t;

enum class Occurrence { Primary, DuplicateReference };
enum class Expansion { Unexpanded, Expanded, DepthCapped, Fundamental };

std::string_view to_string(Occurrence occurrence);
std::string_view to_string(Expansion expansion);
std::optional<Occurrence> parse_occurrence(std::string_view text);
std::optional<Expansion> parse_expansion(std::string_view text);

struct TraceNode {
    NodeId node_id = 0;
    ConceptId subject;
    int depth = 0;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    Occurrence occurrence = Occurrence::Primary;
    Expansion expansion = Expansion::Unexpanded;

    bool is_primary() const noexcept { return occurrence == Occurrence::Primary; }

    friend bool operator==(const TraceNode&, const TraceNode&) = default;
};

// Occurrence tree rooted at the target question. Every surfacing of a
// concept is a node; the first surfacing is the Primary occurrence and later
// ones are childless DuplicateReference nodes. Nodes are stored in insertion
// order and addressed by a session-scoped NodeId.
class TraceTree {
public:
    TraceTree() = default;
    TraceTree(Concept root, int max_depth);

    // Builds a single-node tree for the question. Throws Error(EmptyLabel).
    static TraceTree for_question(std::string_view question, int max_depth);

    struct Added {
        NodeId node_id;
        Occurrence occurrence;
    };

    // Appends `concept` under `parent`. Throws Error(NotFound) for a missing
    // parent, Error(DepthExceeded) when the parent sits at max_depth,
    // Error(CycleDetected) when the concept is the parent or one of its
    // ancestors, and Error(InvariantViolation) when the parent is a
    // DuplicateReference.
    Added add_child(NodeId parent, const Concept& subject);

    // Same as above with a caller-assigned id (must be unused).
    Added add_child(NodeId parent, const Concept& subject, NodeId id);

    const TraceNode& root() const;
    const TraceNode& node(NodeId id) const;
    const TraceNode* find(NodeId id) const;
    bool contains(NodeId id) const { return index_.contains(id); }

    // Insertion order (breadth-first for engine-built trees).
    std::span<const TraceNode> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    int max_depth() const noexcept { return max_depth_; }

    std::optional<NodeId> primary_of(const ConceptId& subject) const;
    std::vector<NodeId> occurrences_of(const ConceptId& subject) const;

    // Concepts on the root-to-node path, root first, excluding the node.
    std::vector<ConceptId> ancestor_concepts(NodeId id) const;
    bool is_ancestor_or_self(NodeId id, const ConceptId& subject) const;

    // Display metadata for every concept in the tree.
    const Concept& concept_for(const ConceptId& id) const;
    const std::map<ConceptId, Concept>& concepts() const noexcept { return concepts_; }
    void mark_fundamental(const ConceptId& id);

    void set_expansion(NodeId id, Expansion expansion);

    NodeId next_free_id() const noexcept { return next_id_; }

    friend bool operator==(const TraceTree&, const TraceTree&) = default;

private:
    TraceNode& mutable_node(NodeId id);

    int max_depth_ = 0;
    NodeId next_id_ = 0;
    std::vector<TraceNode> nodes_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::map<ConceptId, NodeId> primaries_;
    std::map<ConceptId, Concept> concepts_;
};

}  // namespace rpkt
