#include "rpkt/error.hpp"
#include "rpkt/trace_tree.hpp"

#include <gtest/gtest.h>

using namespace rpkt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvariantViolation;
}

Concept c(const char* label) { return Concept::from_label(label); }

}  // namespace

TEST(TraceTree, RootSitsAtDepthZero) {
    TraceTree t = TraceTree::for_question("How does backpropagation work?", 3);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.root().depth, 0);
    EXPECT_FALSE(t.root().parent);
    EXPECT_EQ(t.root().subject.key(), "how does backpropagation work");
    EXPECT_EQ(code_of([] { TraceTree::for_question("  ?? ", 3); }), ErrorCode::EmptyLabel);
}

TEST(TraceTree, FirstSurfacingIsPrimaryLaterOnesAreReferences) {
    TraceTree t(c("Q"), 3);
    auto a = t.add_child(t.root().node_id, c("A"));
    auto b = t.add_child(t.root().node_id, c("B"));
    auto x1 = t.add_child(a.node_id, c("X"));
    auto x2 = t.add_child(b.node_id, c("X"));
    EXPECT_EQ(x1.occurrence, Occurrence::Primary);
    EXPECT_EQ(x2.occurrence, Occurrence::DuplicateReference);
    EXPECT_EQ(t.primary_of(ConceptId::normalize("x")), x1.node_id);
    EXPECT_EQ(t.occurrences_of(ConceptId::normalize("x")).size(), 2u);
    EXPECT_EQ(t.node(x2.node_id).depth, 2);
    EXPECT_EQ(t.node(a.node_id).children, std::vector<NodeId>{x1.node_id});
}

TEST(TraceTree, ReferencesCannotHaveChildren) {
    TraceTree t(c("Q"), 3);
    auto a = t.add_child(t.root().node_id, c("A"));
    auto b = t.add_child(t.root().node_id, c("B"));
    t.add_child(a.node_id, c("X"));
    auto ref = t.add_child(b.node_id, c("X"));
    EXPECT_EQ(code_of([&] { t.add_child(ref.node_id, c("Y")); }), ErrorCode::InvariantViolation);
}

TEST(TraceTree, RejectsAncestorsAsCycles) {
    TraceTree t(c("Q"), 4);
    auto a = t.add_child(t.root().node_id, c("A"));
    auto b = t.add_child(a.node_id, c("B"));
    EXPECT_EQ(code_of([&] { t.add_child(b.node_id, c("A")); }), ErrorCode::CycleDetected);
    EXPECT_EQ(code_of([&] { t.add_child(b.node_id, c("b")); }), ErrorCode::CycleDetected);
    EXPECT_EQ(code_of([&] { t.add_child(b.node_id, c("Q")); }), ErrorCode::CycleDetected);
}

TEST(TraceTree, RejectsGrowthPastMaxDepth) {
    TraceTree t(c("Q"), 1);
    auto a = t.add_child(t.root().node_id, c("A"));
    EXPECT_EQ(code_of([&] { t.add_child(a.node_id, c("B")); }), ErrorCode::DepthExceeded);
}

TEST(TraceTree, MissingParentAndReusedId) {
    TraceTree t(c("Q"), 3);
    EXPECT_EQ(code_of([&] { t.add_child(99, c("A")); }), ErrorCode::NotFound);
    auto a = t.add_child(t.root().node_id, c("A"), 7);
    EXPECT_EQ(a.node_id, 7u);
    EXPECT_EQ(code_of([&] { t.add_child(t.root().node_id, c("B"), 7); }), ErrorCode::InvariantViolation);
}

TEST(TraceTree, AncestorConceptsRunRootFirst) {
    TraceTree t(c("Q"), 3);
    auto a = t.add_child(t.root().node_id, c("A"));
    auto b = t.add_child(a.node_id, c("B"));
    auto keys = t.ancestor_concepts(b.node_id);
    ASSERT_EQ(keys.size(), 2u);
    EXPECT_EQ(keys[0].key(), "q");
    EXPECT_EQ(keys[1].key(), "a");
    EXPECT_TRUE(t.is_ancestor_or_self(b.node_id, ConceptId::normalize("b")));
    EXPECT_FALSE(t.is_ancestor_or_self(a.node_id, ConceptId::normalize("b")));
}

TEST(TraceTree, ExpansionStateAndNames) {
    TraceTree t(c("Q"), 3);
    auto a = t.add_child(t.root().node_id, c("A"));
    t.set_expansion(a.node_id, Expansion::DepthCapped);
    EXPECT_EQ(t.node(a.node_id).expansion, Expansion::DepthCapped);
    for (auto e : {Expansion::Unexpanded, Expansion::Expanded, Expansion::DepthCapped, Expansion::Fundamental}) {
        EXPECT_EQ(parse_expansion(to_string(e)), e);
    }
    for (auto o : {Occurrence::Primary, Occurrence::DuplicateReference}) {
        EXPECT_EQ(parse_occurrence(to_string(o)), o);
    }
}
