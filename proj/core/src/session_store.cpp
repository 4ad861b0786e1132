#include "rpkt/session_store.hpp"

#include "rpkt/error.hpp"
#include "rpkt/session_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rpkt {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool valid_id(const std::string& id) {
    return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    });
}

json read_document(const fs::path& path, const std::string& id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "no stored session '" + id + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::CorruptLog, "stored session '" + id + "' is not a JSON object");
    }
    return doc;
}

}  // namespace

SessionStore::SessionStore(fs::path directory) : directory_(std::move(directory)) {
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + directory_.string() + ": " + ec.message());
}

fs::path SessionStore::path_for(const std::string& session_id) const {
    return directory_ / (session_id + ".json");
}

std::mutex& SessionStore::lock_for(const std::string& session_id) const {
    std::lock_guard guard(locks_mutex_);
    auto& slot = locks_[session_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

json SessionStore::to_document(const Session& session) {
    return {{"schema_version", kSchemaVersion},
            {"session_id", session.session_id},
            {"question", session.question},
            {"phase", to_string(session.phase)},
            {"updated_at", session.updated_at},
            {"event_log", json_io::events_to_json(session.event_log)},
            {"snapshot", json_io::snapshot(session)}};
}

// Version 1 documents kept the log under "events", named the event kind
// "type", stored whole-second "ts" timestamps and carried no snapshot.
json SessionStore::migrate_v1(const json& document) {
    json out{{"schema_version", kSchemaVersion}, {"session_id", document.at("id")}};
    json events = json::array();
    for (json e : document.at("events")) {
        e["kind"] = e.at("type");
        e.erase("type");
        e["at_ms"] = e.at("ts").get<std::int64_t>() * 1000;
        e.erase("ts");
        events.push_back(std::move(e));
    }
    out["event_log"] = std::move(events);
    return out;
}

Session SessionStore::from_document(const json& raw) {
    auto version = raw.find("schema_version");
    if (version == raw.end() || !version->is_number_integer()) {
        throw Error(ErrorCode::SchemaVersionUnsupported, "document has no integer schema_version");
    }
    json document;
    const int v = version->get<int>();
    if (v == 1) {
        try {
            document = migrate_v1(raw);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::CorruptLog, std::string("v1 document: ") + e.what());
        }
    } else if (v == kSchemaVersion) {
        document = raw;
    } else {
        throw Error(ErrorCode::SchemaVersionUnsupported, "schema_version " + std::to_string(v));
    }

    auto log = document.find("event_log");
    if (log == document.end()) throw Error(ErrorCode::CorruptLog, "document has no event_log");
    Session session = replay(json_io::events_from_json(*log));

    if (document.value("session_id", std::string{}) != session.session_id) {
        throw Error(ErrorCode::CorruptLog, "session_id disagrees with the log");
    }
    if (auto snap = document.find("snapshot"); snap != document.end()) {
        if (*snap != json_io::snapshot(session)) {
            throw Error(ErrorCode::CorruptLog, "snapshot of '" + session.session_id + "' disagrees with its log");
        }
    }
    return session;
}

json SessionStore::save(const Session& session) {
    if (!valid_id(session.session_id)) {
        throw Error(ErrorCode::InvariantViolation, "session id '" + session.session_id + "' is not storable");
    }
    if (auto violations = invariant_violations(session); !violations.empty()) {
        throw Error(ErrorCode::InvariantViolation, "refusing to store inconsistent session: " + violations.front(),
                    violations);
    }
    json document = to_document(session);

    std::lock_guard guard(lock_for(session.session_id));
    const fs::path target = path_for(session.session_id);
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out << document.dump(2) << '\n';
        out.flush();
        if (!out) throw Error(ErrorCode::StorageFailure, "cannot write " + temp.string());
    }
    if (before_rename_) before_rename_(temp);
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot replace " + target.string() + ": " + ec.message());
    return document;
}

Session SessionStore::load(const std::string& session_id) const {
    if (!valid_id(session_id)) throw Error(ErrorCode::NotFound, "no stored session '" + session_id + "'");
    std::lock_guard guard(lock_for(session_id));
    return from_document(read_document(path_for(session_id), session_id));
}

bool SessionStore::exists(const std::string& session_id) const {
    return valid_id(session_id) && fs::exists(path_for(session_id));
}

std::vector<SessionSummary> SessionStore::list() const {
    std::vector<SessionSummary> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(directory_, ec)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        const std::string id = entry.path().stem().string();
        try {
            json doc = read_document(entry.path(), id);
            SessionSummary summary;
            summary.session_id = doc.value("session_id", doc.value("id", id));
            summary.question = doc.value("question", std::string{});
            summary.phase = parse_phase(doc.value("phase", std::string{})).value_or(Phase::Assessing);
            summary.updated_at = doc.value("updated_at", std::int64_t{0});
            out.push_back(std::move(summary));
        } catch (const Error&) {
            continue;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
    return out;
}

void SessionStore::remove(const std::string& session_id) {
    if (!valid_id(session_id)) throw Error(ErrorCode::NotFound, "no stored session '" + session_id + "'");
    std::lock_guard guard(lock_for(session_id));
    std::error_code ec;
    if (!fs::remove(path_for(session_id), ec)) {
        throw Error(ErrorCode::NotFound, "no stored session '" + session_id + "'");
    }
}

}  // namespace rpkt
