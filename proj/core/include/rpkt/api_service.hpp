#pragma once

#include "rpkt/engine.hpp"
#include "rpkt/error.hpp"
#include "rpkt/oracle.hpp"
#include "rpkt/session_store.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace rpkt {

struct ApiRequest {
    std::string method;
    std::string path;  // without query string
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct ApiOptions {
    std::string cors_origin = "*";
    EngineOptions engine;
};

int http_status_for(ErrorCode code);

// Transport-independent router for the /api/v1 surface. Sessions are
// loaded from and saved to the store on every request, so any response
// with a 2xx status describes state that is already on disk.
class ApiService {
public:
    ApiService(Oracle& oracle, SessionStore& store, ApiOptions options = {});

    ApiResponse handle(const ApiRequest& request);

    const std::string& cors_origin() const noexcept { return options_.cors_origin; }
    std::size_t explanation_cache_size() const;

private:
    ApiResponse create_session(const std::string& body);
    ApiResponse list_sessions();
    ApiResponse get_session(const std::string& id);
    ApiResponse get_graph(const std::string& id);
    ApiResponse get_path(const std::string& id, bool text);
    ApiResponse assess(const std::string& id, const std::string& body);
    ApiResponse explain(const std::string& id);
    ApiResponse healthz();

    std::mutex& session_lock(const std::string& id);

    Oracle& oracle_;
    SessionStore& store_;
    ApiOptions options_;
    TraceEngine engine_;

    std::mutex locks_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> session_locks_;

    mutable std::mutex cache_mutex_;
    std::map<std::string, std::string> explanation_cache_;
};

// cpp-httplib front end for an ApiService.
class ApiServer {
public:
    explicit ApiServer(ApiService& service);
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws
    // Error(InvalidArgument) when binding fails.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    void stop();
    void wait_until_ready();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rpkt
