#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace rpkt {

struct TransportRequest {
    std::string method = "POST";
    std::string path;  // relative to the transport's base URL, e.g. "/chat/completions"
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
    std::chrono::milliseconds timeout{30000};
};

struct TransportResponse {
    int status = 0;
    std::string body;
};

// One HTTP exchange with the chat-completion endpoint. Implementations throw
// Error(Timeout) when the deadline passes and Error(OracleFailure) when no
// response arrives at all; HTTP error statuses are returned, not thrown.
class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportResponse send(const TransportRequest& request) = 0;
};

// cpp-httplib backed transport for http:// and https:// base URLs such as
// "https://api.openai.com/v1".
class HttpTransport : public Transport {
public:
    explicit HttpTransport(std::string base_url);
    TransportResponse send(const TransportRequest& request) override;

    const std::string& base_url() const noexcept { return base_url_; }

private:
    std::string base_url_;
    std::string origin_;
    std::string path_prefix_;
};

}  // namespace rpkt
