#include "rpkt/concept.hpp"
#include "rpkt/education_level.hpp"
#include "rpkt/error.hpp"

#include <gtest/gtest.h>

using namespace rpkt;

TEST(Normalization, LowercasesAndCollapsesWhitespace) {
    EXPECT_EQ(normalized_key("  Gradient \t  Descent "), "gradient descent");
    EXPECT_EQ(normalized_key("CHAIN\nRULE"), "chain rule");
}

TEST(Normalization, TrimsSurroundingPunctuationOnly) {
    EXPECT_EQ(normalized_key("\"Limits.\""), "limits");
    EXPECT_EQ(normalized_key("(Big-O notation)?"), "big-o notation");
    EXPECT_EQ(normalized_key("C++"), "c++");
    EXPECT_EQ(normalized_key("C#"), "c#");
}

TEST(Normalization, NoSynonymMerging) {
    EXPECT_NE(ConceptId::normalize("Derivative"), ConceptId::normalize("Differentiation"));
    EXPECT_NE(ConceptId::normalize("Derivative"), ConceptId::normalize("Derivatives"));
}

TEST(Normalization, IsIdempotent) {
    for (const char* raw : {"  Mean Squared   Error!", "vectors", "...x...", "C++ templates"}) {
        const std::string once = normalized_key(raw);
        EXPECT_EQ(normalized_key(once), once) << raw;
    }
}

TEST(ConceptId, EmptyLabelsAreRejected) {
    EXPECT_EQ(normalized_key(" ?! "), "");
    try {
        ConceptId::normalize("  ...  ");
        FAIL() << "expected EmptyLabel";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyLabel);
    }
}

TEST(ConceptId, FromKeyRequiresCanonicalForm) {
    EXPECT_EQ(ConceptId::from_key("chain rule").key(), "chain rule");
    EXPECT_THROW(ConceptId::from_key("Chain Rule"), Error);
    EXPECT_THROW(ConceptId::from_key(""), Error);
}

TEST(ConceptTest, FromLabelKeepsDisplayLabel) {
    Concept c = Concept::from_label("  Cost   Function ");
    EXPECT_EQ(c.id.key(), "cost function");
    EXPECT_EQ(c.display_label, "Cost Function");
}

TEST(KnowledgeStatus, AbsentReadsUnassessed) {
    KnowledgeStatus st;
    EXPECT_EQ(st.get(ConceptId::normalize("x")), Status::Unassessed);
    EXPECT_EQ(st.assessed_count(), 0u);
}

TEST(KnowledgeStatus, CannotResetToUnassessed) {
    KnowledgeStatus st;
    const auto id = ConceptId::normalize("x");
    st.set(id, Status::Known);
    EXPECT_EQ(st.get(id), Status::Known);
    try {
        st.set(id, Status::Unassessed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
    }
}

TEST(StatusNames, RoundTrip) {
    for (Status s : {Status::Unassessed, Status::Known, Status::Unknown}) {
        EXPECT_EQ(parse_status(to_string(s)), s);
    }
    EXPECT_FALSE(parse_status("maybe"));
}

TEST(EducationLevelNames, ParseIsLenient) {
    EXPECT_EQ(parse_education_level("High School"), EducationLevel::HighSchool);
    EXPECT_EQ(parse_education_level("middle-school"), EducationLevel::MiddleSchool);
    EXPECT_EQ(parse_education_level("GRADUATE"), EducationLevel::Graduate);
    EXPECT_FALSE(parse_education_level("kindergarten"));
    for (auto l : {EducationLevel::MiddleSchool, EducationLevel::HighSchool, EducationLevel::Undergraduate,
                   EducationLevel::Graduate}) {
        EXPECT_EQ(parse_education_level(to_string(l)), l);
    }
}

TEST(ErrorTest, RetryableCodes) {
    EXPECT_TRUE(Error(ErrorCode::Timeout, "t").retryable());
    EXPECT_TRUE(Error(ErrorCode::RateLimited, "t").retryable());
    EXPECT_FALSE(Error(ErrorCode::AuthFailure, "t").retryable());
    EXPECT_FALSE(Error(ErrorCode::ConflictingAssessment, "t").retryable());
    EXPECT_TRUE(is_oracle_error(ErrorCode::MalformedResponse));
    EXPECT_FALSE(is_oracle_error(ErrorCode::NotFound));
}
