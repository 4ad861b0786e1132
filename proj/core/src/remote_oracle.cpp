#include "rpkt/remote_oracle.hpp"

#include "rpkt/error.hpp"
#include "rpkt/log.hpp"
#include "rpkt/prompts.hpp"
#include "rpkt/response_parser.hpp"

#include <algorithm>
#include <thread>

namespace rpkt {

using nlohmann::json;

namespace {

class InflightSlot {
public:
    explicit InflightSlot(std::counting_semaphore<1024>& sem) : sem_(sem) { sem_.acquire(); }
    ~InflightSlot() { sem_.release(); }
    InflightSlot(const InflightSlot&) = delete;
    InflightSlot& operator=(const InflightSlot&) = delete;

private:
    std::counting_semaphore<1024>& sem_;
};

}  // namespace

RemoteOracle::RemoteOracle(RemoteOracleConfig config, std::shared_ptr<Transport> transport,
                           Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })),
      inflight_(std::clamp(config_.max_inflight, 1, 1024)) {
    if (!transport_) throw Error(ErrorCode::InvalidArgument, "remote oracle needs a transport");
}

TransportResponse RemoteOracle::send_with_backoff(const json& body, int& rate_limit_retries) {
    TransportRequest request;
    request.path = "/chat/completions";
    request.body = body.dump();
    request.timeout = config_.timeout;
    request.headers.emplace_back("Content-Type", "application/json");
    if (!config_.api_key.empty()) {
        request.headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    }

    for (;;) {
        TransportResponse response;
        {
            InflightSlot slot(inflight_);
            response = transport_->send(request);
        }
        if (response.status >= 200 && response.status < 300) return response;
        if (response.status == 429) {
            if (rate_limit_retries >= config_.rate_limit_retries) {
                throw Error(ErrorCode::RateLimited, "endpoint kept returning 429",
                            {response.body});
            }
            sleeper_(config_.backoff * (1 << rate_limit_retries));
            ++rate_limit_retries;
            continue;
        }
        if (response.status == 401 || response.status == 403) {
            throw Error(ErrorCode::AuthFailure,
                        "endpoint rejected credentials (HTTP " + std::to_string(response.status) + ")",
                        {response.body});
        }
        if (response.status == 408 || response.status == 504) {
            throw Error(ErrorCode::Timeout, "endpoint timed out (HTTP " + std::to_string(response.status) + ")");
        }
        throw Error(ErrorCode::OracleFailure, "endpoint returned HTTP " + std::to_string(response.status),
                    {response.body});
    }
}

RemoteCallResult RemoteOracle::remote_call(const std::string& prompt, ResponseSchema schema,
                                           const std::function<void(const json&)>& validate) {
    RemoteCallResult result;
    json messages = json::array({{{"role", "system"}, {"content", std::string(prompts::get(prompts::kSystem))}},
                                 {{"role", "user"}, {"content", prompt}}});

    for (int attempt = 0;; ++attempt) {
        json body{{"model", config_.model}, {"temperature", 0}, {"messages", messages}};
        if (schema != ResponseSchema::Text) body["response_format"] = {{"type", "json_object"}};

        TransportResponse response = send_with_backoff(body, result.rate_limit_retries);
        std::string content;
        std::string problem;
        try {
            content = response::message_content(response.body);
            if (schema == ResponseSchema::Text) {
                if (content.find_first_not_of(" \t\r\n") == std::string::npos) {
                    throw Error(ErrorCode::MalformedResponse, "empty explanation text");
                }
                result.document = json{{"text", content}};
            } else {
                result.document = response::parse_object(content);
                if (validate) validate(result.document);
            }
            result.raw_payloads.push_back(content);
            return result;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MalformedResponse) throw;
            problem = e.what();
        }

        result.raw_payloads.push_back(content.empty() ? response.body : content);
        if (attempt >= config_.repair_retries) {
            throw Error(ErrorCode::MalformedResponse,
                        "no valid response after " + std::to_string(attempt + 1) + " attempts: " + problem,
                        result.raw_payloads);
        }
        log_warning("malformed oracle response, retrying: " + problem);
        messages.push_back({{"role", "assistant"}, {"content", content}});
        messages.push_back({{"role", "user"}, {"content", prompts::repair(problem)}});
        ++result.repair_retries;
    }
}

QuestionAnalysis RemoteOracle::analyze_question(std::string_view question, EducationLevel level) {
    QuestionAnalysis analysis;
    remote_call(prompts::analysis(question, level), ResponseSchema::Analysis,
                [&](const json& doc) { analysis = response::to_analysis(doc); });
    return analysis;
}

ExtractionResult RemoteOracle::extract_candidates(const Concept& subject, const OracleRequestContext& ctx) {
    auto key = std::make_tuple(normalized_key(ctx.question), subject.id.key(), ctx.education_level);
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    ExtractionResult extraction;
    remote_call(prompts::extraction(subject, ctx), ResponseSchema::Extraction,
                [&](const json& doc) { extraction = response::to_extraction(doc, subject.id); });
    std::lock_guard lock(cache_mutex_);
    return cache_.try_emplace(key, std::move(extraction)).first->second;
}

std::string RemoteOracle::generate_explanation(const ExplanationRequest& request) {
    return remote_call(prompts::explanation(request), ResponseSchema::Text).document.at("text");
}

HealthReport RemoteOracle::health() {
    TransportRequest probe;
    probe.method = "GET";
    probe.path = "/models";
    probe.timeout = std::min(config_.timeout, std::chrono::milliseconds(5000));
    if (!config_.api_key.empty()) probe.headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    try {
        TransportResponse response = transport_->send(probe);
        return {true, "HTTP " + std::to_string(response.status)};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

std::size_t RemoteOracle::cache_size() const {
    std::lock_guard lock(cache_mutex_);
    return cache_.size();
}

}  // namespace rpkt
