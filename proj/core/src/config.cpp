#include "rpkt/config.hpp"

#include "rpkt/error.hpp"
#include "rpkt/fixture_oracle.hpp"
#include "rpkt/transport.hpp"

#include <cstdlib>
#include <fstream>

namespace rpkt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string("config field '") + key + "' has the wrong type");
    }
}

void read_ms(const json& obj, const char* key, std::chrono::milliseconds& out) {
    std::int64_t ms = out.count();
    read_opt(obj, key, ms);
    if (ms < 0) throw Error(ErrorCode::InvalidArgument, std::string("config field '") + key + "' is negative");
    out = std::chrono::milliseconds(ms);
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& doc, const fs::path& base) {
    if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    ServiceConfig cfg;
    if (auto it = doc.find("listen"); it != doc.end()) {
        read_opt(*it, "host", cfg.listen_host);
        read_opt(*it, "port", cfg.listen_port);
    }
    std::string data_dir = cfg.data_dir.string();
    read_opt(doc, "data_dir", data_dir);
    cfg.data_dir = resolve(base, data_dir);
    read_opt(doc, "cors_origin", cfg.cors_origin);

    if (auto it = doc.find("oracle"); it != doc.end()) {
        const json& o = *it;
        if (o.contains("api_key")) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("credentials belong in the ") + kApiKeyEnv + " environment variable");
        }
        read_opt(o, "mode", cfg.oracle_mode);
        std::string fixture;
        read_opt(o, "fixture", fixture);
        cfg.fixture_path = resolve(base, fixture);
        read_opt(o, "base_url", cfg.remote.base_url);
        read_opt(o, "model", cfg.remote.model);
        read_ms(o, "timeout_ms", cfg.remote.timeout);
        read_ms(o, "backoff_ms", cfg.remote.backoff);
        read_opt(o, "repair_retries", cfg.remote.repair_retries);
        read_opt(o, "rate_limit_retries", cfg.remote.rate_limit_retries);
        read_opt(o, "max_inflight", cfg.remote.max_inflight);
    }
    if (cfg.oracle_mode != "fixture" && cfg.oracle_mode != "remote") {
        throw Error(ErrorCode::InvalidArgument, "oracle mode must be 'fixture' or 'remote'");
    }
    if (cfg.listen_port < 0 || cfg.listen_port > 65535) {
        throw Error(ErrorCode::InvalidArgument, "listen port out of range");
    }
    if (cfg.remote.max_inflight < 1) throw Error(ErrorCode::InvalidArgument, "max_inflight must be positive");
    return cfg;
}

ServiceConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read config " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::InvalidArgument, "config " + path.string() + " is not valid JSON");
    return ServiceConfig::from_json(doc, path.parent_path());
}

void apply_environment(ServiceConfig& config) {
    if (const char* key = std::getenv(kApiKeyEnv); key && *key) config.remote.api_key = key;
}

void apply_oracle_spec(ServiceConfig& config, std::string_view spec) {
    if (spec == "remote") {
        config.oracle_mode = "remote";
    } else if (spec.rfind("fixture:", 0) == 0 && spec.size() > 8) {
        config.oracle_mode = "fixture";
        config.fixture_path = std::string(spec.substr(8));
    } else {
        throw Error(ErrorCode::InvalidArgument, "oracle must be 'fixture:PATH' or 'remote'");
    }
}

std::unique_ptr<Oracle> make_oracle(const ServiceConfig& config) {
    if (config.oracle_mode == "remote") {
        return std::make_unique<RemoteOracle>(config.remote, std::make_shared<HttpTransport>(config.remote.base_url));
    }
    if (config.fixture_path.empty()) throw Error(ErrorCode::InvalidArgument, "fixture mode needs a fixture path");
    return std::make_unique<FixtureOracle>(load_fixture(config.fixture_path));
}

}  // namespace rpkt
