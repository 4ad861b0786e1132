#include "rpkt/error.hpp"

namespace rpkt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyLabel: return "EmptyLabel";
        case ErrorCode::EmptyQuestion: return "EmptyQuestion";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::DepthExceeded: return "DepthExceeded";
        case ErrorCode::UnknownConcept: return "UnknownConcept";
        case ErrorCode::ConflictingAssessment: return "ConflictingAssessment";
        case ErrorCode::OracleFailure: return "OracleFailure";
        case ErrorCode::MalformedResponse: return "MalformedResponse";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::AuthFailure: return "AuthFailure";
        case ErrorCode::RateLimited: return "RateLimited";
        case ErrorCode::CorruptLog: return "CorruptLog";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::StorageFailure: return "StorageFailure";
        case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::string> details)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      details_(std::move(details)) {}

bool Error::retryable() const noexcept {
    switch (code_) {
        case ErrorCode::OracleFailure:
        case ErrorCode::Timeout:
        case ErrorCode::RateLimited:
        case ErrorCode::MalformedResponse:
        case ErrorCode::StorageFailure:
            return true;
        default:
            return false;
    }
}

bool is_oracle_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::OracleFailure:
        case ErrorCode::MalformedResponse:
        case ErrorCode::Timeout:
        case ErrorCode::AuthFailure:
        case ErrorCode::RateLimited:
            return true;
        default:
            return false;
    }
}

}  // namespace rpkt
