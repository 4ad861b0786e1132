#include "golden.hpp"

#include "rpkt/config.hpp"
#include "rpkt/error.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace rpkt;
using nlohmann::json;

TEST(Config, Defaults) {
    ServiceConfig c = ServiceConfig::from_json(json::object());
    EXPECT_EQ(c.listen_host, "127.0.0.1");
    EXPECT_EQ(c.listen_port, 8080);
    EXPECT_EQ(c.oracle_mode, "fixture");
    EXPECT_EQ(c.remote.timeout.count(), 30000);
    EXPECT_EQ(c.remote.max_inflight, 4);
    EXPECT_EQ(c.remote.rate_limit_retries, 3);
}

TEST(Config, ReadsEveryField) {
    json doc{{"listen", {{"host", "0.0.0.0"}, {"port", 9000}}},
             {"data_dir", "data"},
             {"cors_origin", "http://ui.local"},
             {"oracle",
              {{"mode", "remote"},
               {"base_url", "http://llm.local/v1"},
               {"model", "local-model"},
               {"timeout_ms", 1000},
               {"backoff_ms", 5},
               {"repair_retries", 1},
               {"rate_limit_retries", 2},
               {"max_inflight", 8}}}};
    ServiceConfig c = ServiceConfig::from_json(doc, "/etc/rpkt");
    EXPECT_EQ(c.listen_port, 9000);
    EXPECT_EQ(c.data_dir, std::filesystem::path("/etc/rpkt/data"));
    EXPECT_EQ(c.cors_origin, "http://ui.local");
    EXPECT_EQ(c.oracle_mode, "remote");
    EXPECT_EQ(c.remote.model, "local-model");
    EXPECT_EQ(c.remote.timeout.count(), 1000);
    EXPECT_EQ(c.remote.max_inflight, 8);
}

TEST(Config, RejectsCredentialsAndBadValues) {
    EXPECT_THROW(ServiceConfig::from_json(json{{"oracle", {{"api_key", "sk-123"}}}}), Error);
    EXPECT_THROW(ServiceConfig::from_json(json{{"oracle", {{"mode", "magic"}}}}), Error);
    EXPECT_THROW(ServiceConfig::from_json(json{{"listen", {{"port", "eighty"}}}}), Error);
    EXPECT_THROW(ServiceConfig::from_json(json{{"oracle", {{"timeout_ms", -1}}}}), Error);
    EXPECT_THROW(ServiceConfig::from_json(json::array()), Error);
    EXPECT_THROW(load_config("/nonexistent/rpkt.json"), Error);
}

TEST(Config, CredentialComesFromTheEnvironment) {
    ServiceConfig c;
    ::setenv(kApiKeyEnv, "from-env", 1);
    apply_environment(c);
    ::unsetenv(kApiKeyEnv);
    EXPECT_EQ(c.remote.api_key, "from-env");
}

TEST(Config, OracleSpec) {
    ServiceConfig c;
    apply_oracle_spec(c, "fixture:/tmp/f.json");
    EXPECT_EQ(c.oracle_mode, "fixture");
    EXPECT_EQ(c.fixture_path, std::filesystem::path("/tmp/f.json"));
    apply_oracle_spec(c, "remote");
    EXPECT_EQ(c.oracle_mode, "remote");
    EXPECT_THROW(apply_oracle_spec(c, "fixture:"), Error);
    EXPECT_THROW(apply_oracle_spec(c, "llm"), Error);
}

TEST(Config, MakeOracle) {
    ServiceConfig c;
    EXPECT_THROW(make_oracle(c), Error);
    c.fixture_path = rpkt::testing::fixture_path("backprop.json");
    EXPECT_EQ(make_oracle(c)->mode(), "fixture");
    c.oracle_mode = "remote";
    EXPECT_EQ(make_oracle(c)->mode(), "remote");
}
