#pragma once

#include "rpkt/oracle.hpp"
#include "rpkt/remote_oracle.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <string>

namespace rpkt {

inline constexpr const char* kApiKeyEnv = "RPKT_API_KEY";

struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;

    std::string oracle_mode = "fixture";  // "fixture" or "remote"
    std::filesystem::path fixture_path;
    RemoteOracleConfig remote;

    std::filesystem::path data_dir = "rpkt-data";
    std::string cors_origin = "http://localhost:5173";

    // Relative fixture/data paths resolve against `base`. The file may not
    // carry a credential. Throws Error(InvalidArgument).
    static ServiceConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base = {});
};

// Throws NotFound / InvalidArgument.
ServiceConfig load_config(const std::filesystem::path& path);

// Fills remote.api_key from RPKT_API_KEY when it is set.
void apply_environment(ServiceConfig& config);

// "fixture:PATH" or "remote".
void apply_oracle_spec(ServiceConfig& config, std::string_view spec);

std::unique_ptr<Oracle> make_oracle(const ServiceConfig& config);

}  // namespace rpkt
