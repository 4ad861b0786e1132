#pragma once

#include "rpkt/engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace rpkt {

inline constexpr int kSchemaVersion = 2;

struct SessionSummary {
    std::string session_id;
    std::string question;
    Phase phase = Phase::Assessing;
    std::int64_t updated_at = 0;
};

// One JSON document per session under a data directory. Documents hold the
// full event log plus a snapshot of the derived state; loading replays the
// log and rejects a snapshot that disagrees.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path directory);

    // Throws Error(InvariantViolation) before touching disk when the
    // session is inconsistent, Error(StorageFailure) on I/O errors.
    nlohmann::json save(const Session& session);

    // Throws NotFound, CorruptLog or SchemaVersionUnsupported.
    Session load(const std::string& session_id) const;

    bool exists(const std::string& session_id) const;
    std::vector<SessionSummary> list() const;

    // Throws NotFound.
    void remove(const std::string& session_id);

    const std::filesystem::path& directory() const noexcept { return directory_; }

    // Test hook called after the temporary file is written and before it is
    // renamed over the live document. Throwing from it simulates a crash.
    void set_before_rename_hook(std::function<void(const std::filesystem::path&)> hook) {
        before_rename_ = std::move(hook);
    }

    static nlohmann::json to_document(const Session& session);
    // Migrates older schema versions, replays, verifies the snapshot.
    static Session from_document(const nlohmann::json& document);
    static nlohmann::json migrate_v1(const nlohmann::json& document);

    std::filesystem::path path_for(const std::string& session_id) const;

private:
    std::mutex& lock_for(const std::string& session_id) const;

    std::filesystem::path directory_;
    std::function<void(const std::filesystem::path&)> before_rename_;
    mutable std::mutex locks_mutex_;
    mutable std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace rpkt
