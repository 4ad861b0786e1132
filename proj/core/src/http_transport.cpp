#include "rpkt/transport.hpp"

#include "rpkt/error.hpp"

#include <httplib.h>

namespace rpkt {

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {
    auto scheme_end = base_url_.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "base URL needs a scheme: " + base_url_);
    }
    auto path_start = base_url_.find('/', scheme_end + 3);
    origin_ = base_url_.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : base_url_.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

TransportResponse HttpTransport::send(const TransportRequest& request) {
    httplib::Client client(origin_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);
    const std::string path = path_prefix_ + request.path;

    httplib::Result result = request.method == "GET"
                                 ? client.Get(path, headers)
                                 : client.Post(path, headers, request.body, "application/json");
    if (!result) {
        auto err = result.error();
        if (err == httplib::Error::Read || err == httplib::Error::Write ||
            err == httplib::Error::ConnectionTimeout) {
            throw Error(ErrorCode::Timeout, "request to " + origin_ + path + " timed out");
        }
        throw Error(ErrorCode::OracleFailure,
                    "request to " + origin_ + path + " failed: " + httplib::to_string(err));
    }
    return TransportResponse{result->status, result->body};
}

}  // namespace rpkt
