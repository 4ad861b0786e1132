#include "backprop_scenario.hpp"
#include "golden.hpp"

#include "rpkt/error.hpp"
#include "rpkt/fixture_oracle.hpp"
#include "rpkt/log.hpp"
#include "rpkt/session_json.hpp"
#include "rpkt/session_store.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace rpkt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class StoreTest : public ::testing::Test {
protected:
    fs::path dir;
    FixtureOracle oracle{load_fixture(rpkt::testing::fixture_path("backprop.json"))};
    TraceEngine engine{oracle, rpkt::testing::deterministic_options("sess-1")};
    ScopedLogSink quiet{[](LogLevel, std::string_view) {}};

    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("rpkt-store-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    json read_doc(const std::string& id) { return json::parse(rpkt::testing::read_text(dir / (id + ".json"))); }
    void write_doc(const std::string& id, const json& doc) {
        rpkt::testing::write_text(dir / (id + ".json"), doc.dump(2));
    }
};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvariantViolation;
}

}  // namespace

TEST_F(StoreTest, SaveLoadRoundTrip) {
    SessionStore store(dir);
    Session s = rpkt::testing::run_backprop(engine);
    store.save(s);
    EXPECT_TRUE(store.exists("sess-1"));
    EXPECT_EQ(store.load("sess-1"), s);
    json doc = read_doc("sess-1");
    EXPECT_EQ(doc["schema_version"], 2);
    EXPECT_EQ(doc["snapshot"], json_io::snapshot(s));
}

TEST_F(StoreTest, MissingSessionIsNotFound) {
    SessionStore store(dir);
    EXPECT_EQ(code_of([&] { store.load("nope"); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([&] { store.load("../etc/passwd"); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([&] { store.remove("nope"); }), ErrorCode::NotFound);
}

TEST_F(StoreTest, ListAndRemove) {
    SessionStore store(dir);
    EXPECT_TRUE(store.list().empty());
    Session s = rpkt::testing::run_backprop(engine, "limits");
    store.save(s);
    auto all = store.list();
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].session_id, "sess-1");
    EXPECT_EQ(all[0].phase, Phase::Assessing);
    EXPECT_EQ(all[0].question, rpkt::testing::kBackpropQuestion);
    store.remove("sess-1");
    EXPECT_FALSE(store.exists("sess-1"));
}

TEST_F(StoreTest, SnapshotMutationIsCorruptLog) {
    SessionStore store(dir);
    store.save(rpkt::testing::run_backprop(engine));
    json doc = read_doc("sess-1");
    doc["snapshot"]["status"]["limits"] = "known";
    write_doc("sess-1", doc);
    EXPECT_EQ(code_of([&] { store.load("sess-1"); }), ErrorCode::CorruptLog);
}

TEST_F(StoreTest, LogGapIsCorruptLog) {
    SessionStore store(dir);
    store.save(rpkt::testing::run_backprop(engine));
    json doc = read_doc("sess-1");
    doc["event_log"].erase(4);
    write_doc("sess-1", doc);
    EXPECT_EQ(code_of([&] { store.load("sess-1"); }), ErrorCode::CorruptLog);
}

TEST_F(StoreTest, GarbageAndVersions) {
    SessionStore store(dir);
    rpkt::testing::write_text(dir / "junk.json", "{ not json");
    EXPECT_EQ(code_of([&] { store.load("junk"); }), ErrorCode::CorruptLog);
    write_doc("future", json{{"schema_version", 3}, {"event_log", json::array()}});
    EXPECT_EQ(code_of([&] { store.load("future"); }), ErrorCode::SchemaVersionUnsupported);
    write_doc("none", json{{"event_log", json::array()}});
    EXPECT_EQ(code_of([&] { store.load("none"); }), ErrorCode::SchemaVersionUnsupported);
    // list() skips unreadable documents instead of failing.
    EXPECT_NO_THROW(store.list());
}

TEST_F(StoreTest, VersionOneDocumentsAreMigrated) {
    SessionStore store(dir);
    Session s = rpkt::testing::run_backprop(engine);
    json v1{{"schema_version", 1}, {"id", "sess-1"}, {"events", json::array()}};
    for (const auto& e : s.event_log) {
        json j = json_io::event_to_json(e);
        j["type"] = j["kind"];
        j.erase("kind");
        j["ts"] = j["at_ms"].get<std::int64_t>();
        j.erase("at_ms");
        v1["events"].push_back(j);
    }
    write_doc("sess-1", v1);
    Session loaded = store.load("sess-1");
    EXPECT_EQ(json_io::snapshot(loaded), json_io::snapshot(s));
    EXPECT_EQ(loaded.event_log.size(), s.event_log.size());
    EXPECT_EQ(loaded.event_log[3].timestamp_ms, s.event_log[3].timestamp_ms * 1000);
}

TEST_F(StoreTest, InconsistentSessionsAreNotWritten) {
    SessionStore store(dir);
    Session s = rpkt::testing::run_backprop(engine);
    s.phase = Phase::Assessing;
    EXPECT_EQ(code_of([&] { store.save(s); }), ErrorCode::InvariantViolation);
    EXPECT_FALSE(store.exists("sess-1"));
}

TEST_F(StoreTest, CrashBeforeRenameKeepsThePreviousDocument) {
    SessionStore store(dir);
    Session early = engine.start_session({rpkt::testing::kBackpropQuestion, EducationLevel::Undergraduate, 3});
    store.save(early);
    Session later = early;
    engine.submit_assessment(later, "gradient descent", false);

    store.set_before_rename_hook([](const fs::path&) { throw std::runtime_error("simulated crash"); });
    EXPECT_THROW(store.save(later), std::runtime_error);
    store.set_before_rename_hook({});

    SessionStore reopened(dir);
    EXPECT_EQ(reopened.load(early.session_id), early);
    store.save(later);
    EXPECT_EQ(reopened.load(early.session_id), later);
}
