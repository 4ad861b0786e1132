#include "backprop_scenario.hpp"
#include "counting_oracle.hpp"
#include "random_fixture.hpp"
#include "reference_trace.hpp"
#include "session_driver.hpp"

#include "rpkt/engine.hpp"
#include "rpkt/graph_export.hpp"
#include "rpkt/learning_path.hpp"
#include "rpkt/log.hpp"

#include <gtest/gtest.h>

using namespace rpkt;
using namespace rpkt::testing;

namespace {

struct Quiet {
    ScopedLogSink sink{[](LogLevel, std::string_view) {}};
};

std::map<std::string, int> depths_of(const GraphDoc& g) {
    std::map<std::string, int> out;
    for (const auto& n : g.nodes) out[n.subject.id.key()] = n.min_depth;
    return out;
}

std::set<std::pair<std::string, std::string>> edges_of(const GraphDoc& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : g.edges) out.insert({e.from.key(), e.to.key()});
    return out;
}

class RandomSessions : public ::testing::TestWithParam<std::uint64_t> {};

}  // namespace

// Invariants hold after every single step, not just at the end.
TEST_P(RandomSessions, InvariantsHoldAtEveryStep) {
    Quiet q;
    const std::uint64_t seed = GetParam();
    auto gen = random_fixture(seed, {30, 4, 0.3});
    FixtureOracle fixture(gen.graph);
    CountingOracle oracle(fixture);
    const int depth = 1 + static_cast<int>(seed % 5);
    TraceEngine engine(oracle, deterministic_options());
    Session s = engine.start_session({gen.question, EducationLevel::Undergraduate, depth});
    auto answers = hashed_answers(seed, 0.4);
    std::mt19937_64 rng(seed);
    std::size_t assessed = 0;
    while (!pending_assessments(s).empty()) {
        auto pending = pending_assessments(s);
        const auto& item = pending[rng() % pending.size()];
        auto before_status = s.status;
        engine.submit_assessment(s, item.subject.id.key(), answers(item.subject.id.key()));
        auto v = invariant_violations(s);
        ASSERT_TRUE(v.empty()) << v.front();
        // Statuses only grow.
        for (const auto& [id, st] : before_status.entries()) ASSERT_EQ(s.status.get(id), st);
        ASSERT_EQ(s.status.assessed_count(), ++assessed);
        for (const auto& n : s.tree.nodes()) ASSERT_LE(n.depth, depth);
    }
    EXPECT_EQ(s.phase, Phase::Complete);
    for (const auto& [key, calls] : oracle.extract_calls_by_concept) EXPECT_EQ(calls, 1) << key;
    EXPECT_LE(static_cast<std::size_t>(oracle.extract_calls.load()), gen.labels.size());
}

TEST_P(RandomSessions, FinalStateMatchesTheReference) {
    Quiet q;
    const std::uint64_t seed = GetParam();
    auto gen = random_fixture(seed, {40, 4, 0.3});
    FixtureOracle fixture(gen.graph);
    const int depth = 2 + static_cast<int>(seed % 4);
    auto answers = hashed_answers(seed * 31, 0.35);
    const ReferenceTrace ref = reference_trace(gen.graph, gen.question, depth, answers);

    TraceEngine engine(fixture, deterministic_options());
    Session s = engine.start_session({gen.question, EducationLevel::Undergraduate, depth});
    std::mt19937_64 rng(seed);
    drive_random_order(engine, s, answers, rng);
    ASSERT_EQ(s.phase, Phase::Complete);

    const GraphDoc g = export_graph(s);
    EXPECT_EQ(depths_of(g), ref.min_depth);
    EXPECT_EQ(edges_of(g), ref.edges);
    std::map<std::string, bool> known;
    for (const auto& [id, st] : s.status.entries()) known[id.key()] = st == Status::Known;
    EXPECT_EQ(known, ref.known);
    EXPECT_EQ(static_cast<int>(s.expanded.size()), ref.expansions);

    std::string why;
    EXPECT_TRUE(respects_prerequisites(keys_of(flatten_sequence(build_path(s))), ref.edges, &why)) << why;
    EXPECT_EQ(replay(s.event_log), s);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomSessions, ::testing::Range<std::uint64_t>(1, 41));

TEST(ReferenceTrace, HandComputedExample) {
    // Q -> {A, B}; A -> {C, A}; B -> {C, D}; C -> {B}; everything unknown.
    FixtureGraph g;
    g.analyses.push_back({"*", sanitize_analysis("", "", {"A", "B"})});
    g.prerequisites[ConceptId::normalize("A")] = {{"C", ""}, {"A", ""}};
    g.prerequisites[ConceptId::normalize("B")] = {{"C", ""}, {"D", ""}};
    g.prerequisites[ConceptId::normalize("C")] = {{"B", ""}};
    auto ref = reference_trace(g, "Q", 3, [](const std::string&) { return false; });
    const std::map<std::string, int> depths{{"q", 0}, {"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}};
    EXPECT_EQ(ref.min_depth, depths);
    const std::set<std::pair<std::string, std::string>> edges{
        {"q", "a"}, {"q", "b"}, {"a", "c"}, {"b", "c"}, {"b", "d"}};
    EXPECT_EQ(ref.edges, edges);
    EXPECT_EQ(ref.expansions, 3);
}
