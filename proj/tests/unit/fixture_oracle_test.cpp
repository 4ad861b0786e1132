#include "golden.hpp"

#include "rpkt/error.hpp"
#include "rpkt/fixture_oracle.hpp"
#include "rpkt/log.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

using namespace rpkt;
using nlohmann::json;

namespace {

FixtureGraph small_fixture(bool open) {
    return FixtureGraph::from_json(json{
        {"fixture_version", 1},
        {"open_mode", open},
        {"analyses", {{{"match", "orbits"}, {"key_concepts", {"Gravity", "Velocity"}}}}},
        {"prerequisites", {{"Gravity", {"Mass", {{"label", "Force"}, {"rationale", "gravity is a force"}}}},
                           {"Velocity", {"Distance"}}}},
        {"fundamentals", {"Mass", "Force"}},
        {"explanations", {{{"match", "*"}, {"unknown", {"Gravity"}}, {"text", "canned"}}}}});
}

OracleRequestContext ctx() { return {"Why do planets orbit?", EducationLevel::HighSchool, {}}; }

}  // namespace

TEST(FixtureOracle, LoadsTheBackpropFixture) {
    FixtureOracle oracle(load_fixture(rpkt::testing::fixture_path("backprop.json")));
    auto a = oracle.analyze_question("How does backpropagation work?", EducationLevel::Undergraduate);
    ASSERT_EQ(a.key_concepts.size(), 4u);
    EXPECT_EQ(a.key_concepts[0].display_label, "Forward Propagation");
    EXPECT_EQ(a.key_concepts[3].display_label, "Chain Rule");
    auto gd = oracle.extract_candidates(Concept::from_label("Gradient Descent"), {});
    ASSERT_EQ(gd.prerequisites.size(), 2u);
    EXPECT_EQ(gd.prerequisites[0].label, "Derivative");
    EXPECT_EQ(gd.prerequisites[1].label, "Cost Function");
}

TEST(FixtureOracle, AnalysisMatchesBySubstring) {
    FixtureOracle oracle(small_fixture(true));
    EXPECT_EQ(oracle.analyze_question("Why do ORBITS happen?", EducationLevel::HighSchool).key_concepts.size(), 2u);
    try {
        oracle.analyze_question("What is rain?", EducationLevel::HighSchool);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleFailure);
    }
}

TEST(FixtureOracle, OpenModeTreatsUnlistedConceptsAsFundamental) {
    FixtureOracle oracle(small_fixture(true));
    EXPECT_TRUE(oracle.extract_candidates(Concept::from_label("Distance"), ctx()).fundamental);
    EXPECT_TRUE(oracle.extract_candidates(Concept::from_label("Mass"), ctx()).fundamental);
    auto g = oracle.extract_candidates(Concept::from_label("Gravity"), ctx());
    EXPECT_FALSE(g.fundamental);
    ASSERT_EQ(g.prerequisites.size(), 2u);
    EXPECT_EQ(g.prerequisites[1].rationale, "gravity is a force");
}

TEST(FixtureOracle, ClosedModeRejectsDanglingPrerequisites) {
    try {
        small_fixture(false);
        FAIL() << "Distance has no entry";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(FixtureOracle, RejectsUnknownVersionAndBadShapes) {
    EXPECT_THROW(FixtureGraph::from_json(json{{"fixture_version", 2}}), Error);
    EXPECT_THROW(FixtureGraph::from_json(json::array()), Error);
    EXPECT_THROW(FixtureGraph::from_json(json{{"fixture_version", 1}, {"prerequisites", {{"A", "B"}}}}), Error);
    EXPECT_THROW(load_fixture("/nonexistent/fixture.json"), Error);
}

TEST(FixtureOracle, JsonRoundTrip) {
    FixtureGraph g = small_fixture(true);
    FixtureGraph again = FixtureGraph::from_json(g.to_json());
    EXPECT_EQ(again.to_json(), g.to_json());
}

TEST(FixtureOracle, CannedExplanationNeedsTheExactUnknownSet) {
    FixtureOracle oracle(small_fixture(true));
    ExplanationRequest req{"Why do planets orbit?", EducationLevel::HighSchool, {}, {}};
    req.unknown_ordered.push_back({Concept::from_label("Gravity"), Status::Unknown});
    EXPECT_EQ(oracle.generate_explanation(req), "canned");
    req.unknown_ordered.push_back({Concept::from_label("Mass"), Status::Unknown});
    EXPECT_NE(oracle.generate_explanation(req), "canned");
}

TEST(FallbackExplanation, AcknowledgesExplainsThenSynthesizes) {
    ExplanationRequest req{"Why do planets orbit?", EducationLevel::HighSchool, {}, {}};
    req.known = {Concept::from_label("Velocity"), Concept::from_label("Mass")};
    req.unknown_ordered = {{Concept::from_label("Force"), Status::Unknown},
                           {Concept::from_label("Gravity"), Status::Unassessed}};
    const std::string text = compose_fallback_explanation(req);
    const auto ack = text.find("Velocity and Mass");
    const auto s1 = text.find("Step 1: Force");
    const auto s2 = text.find("Step 2: Gravity");
    const auto synth = text.find("Putting it together");
    ASSERT_NE(ack, std::string::npos) << text;
    ASSERT_NE(s1, std::string::npos);
    ASSERT_NE(s2, std::string::npos);
    ASSERT_NE(synth, std::string::npos);
    EXPECT_LT(ack, s1);
    EXPECT_LT(s1, s2);
    EXPECT_LT(s2, synth);
    EXPECT_EQ(compose_fallback_explanation(req), text);
}
