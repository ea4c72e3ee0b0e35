#include "judgebench/http_provider.hpp"

#include "fmt/format.h"
#include "httplib.h"

#include <cstdlib>

namespace judgebench {

using nlohmann::json;

std::string body_excerpt(const std::string &body, std::size_t limit) {
    if (body.size() <= limit) {
        return body;
    }
    return body.substr(0, limit) + "...";
}

HttpProvider::HttpProvider(ProviderConfig config) : config_{std::move(config)} {
    const std::string &url = config_.base_url;
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument{fmt::format("base URL '{}' must include a scheme", url)};
    }
    const std::size_t path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    if (path_start != std::string::npos) {
        path_prefix_ = url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') {
            path_prefix_.pop_back();
        }
    }
}

CompletionResponse HttpProvider::send(const CompletionRequest &request) {
    httplib::Client client{origin_};
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (const char *token = std::getenv(config_.credential_env.c_str()); token != nullptr && *token != '\0') {
        headers.emplace("Authorization", std::string{"Bearer "} + token);
    }

    const auto started = std::chrono::steady_clock::now();
    const auto result = client.Post(path_prefix_ + "/v1/chat/completions", headers, request_body(request).dump(), "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

    if (!result) {
        throw TransientError{fmt::format("request to {} failed: {}", origin_, httplib::to_string(result.error()))};
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
        throw TransientError{fmt::format("status {}: {}", status, body_excerpt(result->body))};
    }
    if (status < 200 || status >= 300) {
        throw ProviderError{status, body_excerpt(result->body)};
    }

    CompletionResponse response;
    try {
        const json body = json::parse(result->body);
        const json &content = body.at("choices").at(0).at("message").at("content");
        response.text = content.is_null() ? std::string{} : content.get<std::string>();
        if (body.contains("usage")) {
            response.provider_meta["usage"] = body["usage"];
        }
    } catch (const json::exception &e) {
        throw ProviderError{status, fmt::format("malformed completion body ({}): {}", e.what(), body_excerpt(result->body))};
    }
    response.provider_meta["latency_ms"] = latency.count();
    response.provider_meta["status"] = status;
    return response;
}

}  // namespace judgebench
