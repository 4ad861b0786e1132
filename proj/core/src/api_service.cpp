#include "rpkt/api_service.hpp"

#include "rpkt/graph_export.hpp"
#include "rpkt/learning_path.hpp"
#include "rpkt/log.hpp"
#include "rpkt/session_json.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <vector>

namespace rpkt {

using nlohmann::json;

namespace {

ApiResponse json_response(int status, const json& body) {
    return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, std::string_view code, const std::string& message, bool retryable) {
    return json_response(status, {{"error", {{"code", code}, {"message", message}, {"retryable", retryable}}}});
}

ApiResponse error_response(const Error& e) {
    return error_response(http_status_for(e.code()), to_string(e.code()), e.what(), e.retryable());
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t slash = path.find('/', start);
        if (slash == std::string::npos) slash = path.size();
        if (slash > start) parts.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    return parts;
}

json parse_body(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    }
    return doc;
}

template <typename T>
T require(const json& doc, const char* key, bool (json::*check)() const noexcept) {
    auto it = doc.find(key);
    if (it == doc.end() || !((*it).*check)()) {
        throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' is missing or has the wrong type");
    }
    return it->get<T>();
}

std::string status_fingerprint(const Session& session) {
    std::string fp = session.session_id;
    for (const auto& [id, st] : session.status.entries()) {
        fp += '|';
        fp += id.key();
        fp += '=';
        fp += to_string(st);
    }
    return fp;
}

}  // namespace

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyLabel:
        case ErrorCode::EmptyQuestion:
        case ErrorCode::InvalidArgument:
            return 422;
        case ErrorCode::NotFound:
        case ErrorCode::UnknownConcept:
            return 404;
        case ErrorCode::ConflictingAssessment:
            return 409;
        case ErrorCode::Timeout:
            return 504;
        case ErrorCode::OracleFailure:
        case ErrorCode::MalformedResponse:
        case ErrorCode::AuthFailure:
        case ErrorCode::RateLimited:
            return 502;
        default:
            return 500;
    }
}

ApiService::ApiService(Oracle& oracle, SessionStore& store, ApiOptions options)
    : oracle_(oracle), store_(store), options_(std::move(options)), engine_(oracle, options_.engine) {}

std::size_t ApiService::explanation_cache_size() const {
    std::lock_guard guard(cache_mutex_);
    return explanation_cache_.size();
}

std::mutex& ApiService::session_lock(const std::string& id) {
    std::lock_guard guard(locks_mutex_);
    auto& slot = session_locks_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

ApiResponse ApiService::handle(const ApiRequest& request) {
    try {
        const auto parts = split_path(request.path);
        const std::string& m = request.method;
        if (m == "OPTIONS") return {204, "text/plain", ""};
        if (parts.size() == 1 && parts[0] == "healthz" && m == "GET") return healthz();
        if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1" || parts[2] != "sessions") {
            return error_response(404, "NotFound", "no route for " + request.path, false);
        }
        if (parts.size() == 3) {
            if (m == "POST") return create_session(request.body);
            if (m == "GET") return list_sessions();
        } else if (parts.size() == 4) {
            if (m == "GET") return get_session(parts[3]);
        } else if (parts.size() == 5) {
            const std::string& id = parts[3];
            const std::string& leaf = parts[4];
            if (m == "POST" && leaf == "assessments") return assess(id, request.body);
            if (m == "POST" && leaf == "explanation") return explain(id);
            if (m == "GET" && leaf == "graph") return get_graph(id);
            if (m == "GET" && leaf == "path") return get_path(id, false);
            if (m == "GET" && leaf == "path.txt") return get_path(id, true);
        } else {
            return error_response(404, "NotFound", "no route for " + request.path, false);
        }
        return error_response(405, "MethodNotAllowed", m + " is not supported on " + request.path, false);
    } catch (const Error& e) {
        if (http_status_for(e.code()) >= 500) log(LogLevel::Error, e.what());
        return error_response(e);
    } catch (const std::exception& e) {
        log(LogLevel::Error, e.what());
        return error_response(500, "Internal", e.what(), false);
    }
}

ApiResponse ApiService::create_session(const std::string& body) {
    const json doc = parse_body(body);
    SessionRequest req;
    req.question = require<std::string>(doc, "question", &json::is_string);
    const auto level_text = require<std::string>(doc, "education_level", &json::is_string);
    auto level = parse_education_level(level_text);
    if (!level) throw Error(ErrorCode::InvalidArgument, "unknown education_level '" + level_text + "'");
    req.education_level = *level;
    if (auto it = doc.find("max_depth"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw Error(ErrorCode::InvalidArgument, "max_depth must be an integer");
        req.max_depth = it->get<int>();
    }
    Session session = engine_.start_session(req);
    std::lock_guard guard(session_lock(session.session_id));
    store_.save(session);
    return json_response(201, {{"session_id", session.session_id},
                               {"analysis", json_io::to_json(session.analysis)},
                               {"pending", json_io::pending_to_json(pending_assessments(session))},
                               {"phase", to_string(session.phase)}});
}

ApiResponse ApiService::list_sessions() {
    json arr = json::array();
    for (const auto& s : store_.list()) {
        arr.push_back({{"session_id", s.session_id},
                       {"question", s.question},
                       {"phase", to_string(s.phase)},
                       {"updated_at", s.updated_at}});
    }
    return json_response(200, {{"sessions", arr}});
}

ApiResponse ApiService::get_session(const std::string& id) {
    std::lock_guard guard(session_lock(id));
    return json_response(200, json_io::session_view(store_.load(id)));
}

ApiResponse ApiService::get_graph(const std::string& id) {
    std::lock_guard guard(session_lock(id));
    return json_response(200, graph_to_json(export_graph(store_.load(id))));
}

ApiResponse ApiService::get_path(const std::string& id, bool text) {
    std::lock_guard guard(session_lock(id));
    const PathEntry path = build_path(store_.load(id));
    if (text) return {200, "text/plain; charset=utf-8", render_path_text(path)};
    return json_response(200, path_to_json(path));
}

ApiResponse ApiService::assess(const std::string& id, const std::string& body) {
    std::lock_guard guard(session_lock(id));
    Session session = store_.load(id);
    const json doc = parse_body(body);
    const auto subject = require<std::string>(doc, "concept_id", &json::is_string);
    const bool known = require<bool>(doc, "known", &json::is_boolean);
    bool force = false;
    if (auto it = doc.find("force"); it != doc.end() && !it->is_null()) {
        if (!it->is_boolean()) throw Error(ErrorCode::InvalidArgument, "force must be a boolean");
        force = it->get<bool>();
    }

    const std::size_t logged = session.event_log.size();
    AssessmentOutcome outcome;
    try {
        outcome = engine_.submit_assessment(session, subject, known, force);
    } catch (const Error& e) {
        // The answer may already be in the log even though expansion failed.
        if (session.event_log.size() != logged) store_.save(session);
        throw;
    }
    if (session.event_log.size() != logged) store_.save(session);
    return json_response(200, {{"outcome", json_io::to_json(outcome, session.tree)},
                               {"pending", json_io::pending_to_json(pending_assessments(session))},
                               {"phase", to_string(session.phase)}});
}

ApiResponse ApiService::explain(const std::string& id) {
    std::lock_guard guard(session_lock(id));
    const Session session = store_.load(id);
    if (session.status.assessed_count() == 0) {
        throw Error(ErrorCode::ConflictingAssessment, "assess at least one concept before asking for an explanation");
    }
    const std::string key = status_fingerprint(session);
    {
        std::lock_guard cache_guard(cache_mutex_);
        if (auto it = explanation_cache_.find(key); it != explanation_cache_.end()) {
            return json_response(200, {{"explanation", it->second}});
        }
    }
    std::string text = oracle_.generate_explanation(explanation_request(session));
    {
        std::lock_guard cache_guard(cache_mutex_);
        explanation_cache_.emplace(key, text);
    }
    return json_response(200, {{"explanation", text}});
}

ApiResponse ApiService::healthz() {
    HealthReport report = oracle_.health();
    json body{{"status", report.reachable ? "ok" : "degraded"}, {"oracle_mode", oracle_.mode()}};
    if (!report.detail.empty()) body["detail"] = report.detail;
    return json_response(200, body);
}

struct ApiServer::Impl {
    ApiService& service;
    httplib::Server server;

    explicit Impl(ApiService& s) : service(s) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            ApiResponse out = service.handle({req.method, req.path, req.body});
            res.status = out.status;
            res.set_header("Access-Control-Allow-Origin", service.cors_origin());
            res.set_header("Vary", "Origin");
            if (req.method == "OPTIONS") {
                res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
                res.set_header("Access-Control-Max-Age", "600");
            }
            if (!out.body.empty() || out.status != 204) res.set_content(out.body, out.content_type);
        };
        server.Get(".*", handler);
        server.Post(".*", handler);
        server.Options(".*", handler);
    }
};

ApiServer::ApiServer(ApiService& service) : impl_(std::make_unique<Impl>(service)) {}
ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw Error(ErrorCode::InvalidArgument, "cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error(ErrorCode::InvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }
void ApiServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}
void ApiServer::wait_until_ready() { impl_->server.wait_until_ready(); }

}  // namespace rpkt
