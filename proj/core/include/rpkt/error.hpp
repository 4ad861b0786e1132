#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rpkt {

enum class ErrorCode {
    EmptyLabel,
    EmptyQuestion,
    InvalidArgument,
    CycleDetected,
    DepthExceeded,
    UnknownConcept,
    ConflictingAssessment,
    OracleFailure,
    MalformedResponse,
    Timeout,
    AuthFailure,
    RateLimited,
    CorruptLog,
    NotFound,
    StorageFailure,
    SchemaVersionUnsupported,
    InvariantViolation,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports is an rpkt::Error carrying a typed code.
// `details` holds auxiliary payloads (for instance the raw bodies of
// malformed oracle responses) that callers may want to log.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::vector<std::string> details = {});

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

    // True for failures where repeating the same request may succeed.
    bool retryable() const noexcept;

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

// Any oracle-side failure: transport, timeout, auth, rate limit, schema.
bool is_oracle_error(ErrorCode code) noexcept;

}  // namespace rpkt
