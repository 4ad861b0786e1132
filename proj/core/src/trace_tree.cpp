#include "rpkt/trace_tree.hpp"

#include "rpkt/error.hpp"

#include <algorithm>

namespace rpkt {

std::string_view to_string(Occurrence occurrence) {
    return occurrence == Occurrence::Primary ? "primary" : "duplicate_reference";
}

std::string_view to_string(Expansion expansion) {
    switch (expansion) {
        case Expansion::Unexpanded: return "unexpanded";
        case Expansion::Expanded: return "expanded";
        case Expansion::DepthCapped: return "depth_capped";
        case Expansion::Fundamental: return "fundamental";
    }
    return "unexpanded";
}

std::optional<Occurrence> parse_occurrence(std::string_view text) {
    if (text == "primary") return Occurrence::Primary;
    if (text == "duplicate_reference") return Occurrence::DuplicateReference;
    return std::nullopt;
}

std::optional<Expansion> parse_expansion(std::string_view text) {
    if (text == "unexpanded") return Expansion::Unexpanded;
    if (text == "expanded") return Expansion::Expanded;
    if (text == "depth_capped") return Expansion::DepthCapped;
    if (text == "fundamental") return Expansion::Fundamental;
    return std::nullopt;
}

TraceTree::TraceTree(Concept root, int max_depth) : max_depth_(max_depth) {
    if (max_depth < 0) throw Error(ErrorCode::InvalidArgument, "max_depth must be non-negative");
    TraceNode node;
    node.node_id = next_id_++;
    node.subject = root.id;
    node.depth = 0;
    primaries_.emplace(root.id, node.node_id);
    concepts_.emplace(root.id, std::move(root));
    index_.emplace(node.node_id, 0);
    nodes_.push_back(std::move(node));
}

TraceTree TraceTree::for_question(std::string_view question, int max_depth) {
    return TraceTree(Concept::from_label(question), max_depth);
}

TraceTree::Added TraceTree::add_child(NodeId parent, const Concept& subject) {
    return add_child(parent, subject, next_id_);
}

TraceTree::Added TraceTree::add_child(NodeId parent_id, const Concept& subject, NodeId id) {
    const TraceNode* parent = find(parent_id);
    if (parent == nullptr) {
        throw Error(ErrorCode::NotFound, "no node " + std::to_string(parent_id));
    }
    if (!parent->is_primary()) {
        throw Error(ErrorCode::InvariantViolation, "duplicate reference nodes cannot have children");
    }
    if (parent->depth >= max_depth_) {
        throw Error(ErrorCode::DepthExceeded,
                    "cannot add '" + subject.id.key() + "' below depth " + std::to_string(max_depth_));
    }
    if (is_ancestor_or_self(parent_id, subject.id)) {
        throw Error(ErrorCode::CycleDetected,
                    "'" + subject.id.key() + "' already appears on the path to node " +
                        std::to_string(parent_id));
    }
    if (index_.contains(id)) {
        throw Error(ErrorCode::InvariantViolation, "node id " + std::to_string(id) + " already in use");
    }

    TraceNode node;
    node.node_id = id;
    node.subject = subject.id;
    node.depth = parent->depth + 1;
    node.parent = parent_id;
    auto [it, inserted] = primaries_.try_emplace(subject.id, id);
    node.occurrence = inserted ? Occurrence::Primary : Occurrence::DuplicateReference;
    if (inserted) {
        concepts_.try_emplace(subject.id, subject);
    } else if (subject.fundamental) {
        concepts_.at(subject.id).fundamental = true;
    }

    mutable_node(parent_id).children.push_back(id);
    index_.emplace(id, nodes_.size());
    nodes_.push_back(std::move(node));
    next_id_ = std::max<NodeId>(next_id_, id + 1);
    return Added{id, nodes_.back().occurrence};
}

const TraceNode& TraceTree::root() const {
    if (nodes_.empty()) throw Error(ErrorCode::NotFound, "empty tree");
    return nodes_.front();
}

const TraceNode& TraceTree::node(NodeId id) const {
    const TraceNode* n = find(id);
    if (n == nullptr) throw Error(ErrorCode::NotFound, "no node " + std::to_string(id));
    return *n;
}

const TraceNode* TraceTree::find(NodeId id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

TraceNode& TraceTree::mutable_node(NodeId id) { return nodes_[index_.at(id)]; }

std::optional<NodeId> TraceTree::primary_of(const ConceptId& subject) const {
    auto it = primaries_.find(subject);
    if (it == primaries_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> TraceTree::occurrences_of(const ConceptId& subject) const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_) {
        if (n.subject == subject) out.push_back(n.node_id);
    }
    return out;
}

std::vector<ConceptId> TraceTree::ancestor_concepts(NodeId id) const {
    std::vector<ConceptId> chain;
    const TraceNode* n = &node(id);
    while (n->parent) {
        n = &node(*n->parent);
        chain.push_back(n->subject);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

bool TraceTree::is_ancestor_or_self(NodeId id, const ConceptId& subject) const {
    for (const TraceNode* n = &node(id);; n = &node(*n->parent)) {
        if (n->subject == subject) return true;
        if (!n->parent) return false;
    }
}

const Concept& TraceTree::concept_for(const ConceptId& id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) throw Error(ErrorCode::NotFound, "concept '" + id.key() + "' not in tree");
    return it->second;
}

void TraceTree::mark_fundamental(const ConceptId& id) {
    auto it = concepts_.find(id);
    if (it != concepts_.end()) it->second.fundamental = true;
}

void TraceTree::set_expansion(NodeId id, Expansion expansion) { mutable_node(id).expansion = expansion; }

}  // namespace rpkt
