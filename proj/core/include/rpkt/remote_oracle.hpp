#pragma once

#include "rpkt/oracle.hpp"
#include "rpkt/transport.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <tuple>
#include <vector>

namespace rpkt {

struct RemoteOracleConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    std::string api_key;
    std::chrono::milliseconds timeout{30000};
    int repair_retries = 2;
    int rate_limit_retries = 3;
    std::chrono::milliseconds backoff{500};
    int max_inflight = 4;
};

enum class ResponseSchema { Analysis, Extraction, Text };

struct RemoteCallResult {
    nlohmann::json document;  // validated object, or {"text": ...} for Text
    int repair_retries = 0;
    int rate_limit_retries = 0;
    std::vector<std::string> raw_payloads;
};

// Oracle backed by an OpenAI-compatible chat-completion endpoint. Requests
// ask for temperature 0 and JSON output; malformed output is retried with a
// repair instruction, 429s with exponential backoff. Extraction results are
// memoized per (question, concept, education level).
class RemoteOracle : public Oracle {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    RemoteOracle(RemoteOracleConfig config, std::shared_ptr<Transport> transport,
                 Sleeper sleeper = {});

    std::string_view mode() const override { return "remote"; }
    QuestionAnalysis analyze_question(std::string_view question, EducationLevel level) override;
    ExtractionResult extract_candidates(const Concept& subject, const OracleRequestContext& ctx) override;
    std::string generate_explanation(const ExplanationRequest& request) override;
    HealthReport health() override;

    // One validated exchange. `validate` may throw Error(MalformedResponse)
    // to trigger a repair retry. Throws MalformedResponse (with every raw
    // payload attached as details), Timeout, AuthFailure, RateLimited or
    // OracleFailure.
    RemoteCallResult remote_call(const std::string& prompt, ResponseSchema schema,
                                 const std::function<void(const nlohmann::json&)>& validate = {});

    std::size_t cache_size() const;

private:
    TransportResponse send_with_backoff(const nlohmann::json& body, int& rate_limit_retries);

    RemoteOracleConfig config_;
    std::shared_ptr<Transport> transport_;
    Sleeper sleeper_;
    std::counting_semaphore<1024> inflight_;

    mutable std::mutex cache_mutex_;
    std::map<std::tuple<std::string, std::string, EducationLevel>, ExtractionResult> cache_;
};

}  // namespace rpkt
