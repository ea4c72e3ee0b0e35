#include "judgebench/embed_client.hpp"

#include "judgebench/http_provider.hpp"

#include "fmt/format.h"
#include "httplib.h"

#include <algorithm>

namespace judgebench {

namespace {

struct SplitUrl {
    std::string origin;
    std::string prefix;
};

SplitUrl split_url(const std::string &url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument{fmt::format("scorer URL '{}' must include a scheme", url)};
    }
    const std::size_t path_start = url.find('/', scheme_end + 3);
    SplitUrl out{url.substr(0, path_start), {}};
    if (path_start != std::string::npos) {
        out.prefix = url.substr(path_start);
        while (!out.prefix.empty() && out.prefix.back() == '/') {
            out.prefix.pop_back();
        }
    }
    return out;
}

bool requested(std::span<const std::string> metrics, std::string_view name) {
    return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

double number_at(const nlohmann::json &body, const char *key, std::string_view metric) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_number()) {
        throw EmbedError{fmt::format("scorer response lacks a numeric '{}' for {}", key, metric)};
    }
    return it->get<double>();
}

}  // namespace

EmbedScores scaled_for_report(const EmbedScores &raw) {
    EmbedScores out = raw;
    if (out.bertscore) {
        out.bertscore->precision *= 100.0;
        out.bertscore->recall *= 100.0;
        out.bertscore->f1 *= 100.0;
    }
    if (out.bleurt) {
        *out.bleurt *= 100.0;
    }
    if (out.bartscore) {
        *out.bartscore *= 10.0;
    }
    return out;
}

nlohmann::json score_request_body(std::string_view candidate, std::span<const std::string> references, std::span<const std::string> metrics) {
    if (references.empty()) {
        throw std::invalid_argument{"score request needs at least one reference"};
    }
    if (metrics.empty()) {
        throw std::invalid_argument{"score request needs at least one metric"};
    }
    for (const std::string &m : metrics) {
        if (std::find(embed_metrics.begin(), embed_metrics.end(), m) == embed_metrics.end()) {
            throw std::invalid_argument{fmt::format("unknown embedding metric '{}'", m)};
        }
    }
    return {{"candidate", std::string{candidate}},
            {"references", std::vector<std::string>(references.begin(), references.end())},
            {"metrics", std::vector<std::string>(metrics.begin(), metrics.end())}};
}

EmbedScores parse_score_response(const nlohmann::json &body, std::span<const std::string> metrics) {
    if (!body.is_object()) {
        throw EmbedError{"scorer response is not a JSON object"};
    }
    EmbedScores scores;
    if (requested(metrics, "bertscore")) {
        const auto it = body.find("bertscore");
        if (it == body.end() || !it->is_object()) {
            throw EmbedError{"scorer response lacks bertscore"};
        }
        scores.bertscore = EmbedScores::BertScore{number_at(*it, "precision", "bertscore"), number_at(*it, "recall", "bertscore"),
                                                  number_at(*it, "f1", "bertscore")};
    }
    if (requested(metrics, "bleurt")) {
        scores.bleurt = number_at(body, "bleurt", "bleurt");
    }
    if (requested(metrics, "bartscore")) {
        scores.bartscore = number_at(body, "bartscore", "bartscore");
    }
    return scores;
}

EmbedClient::EmbedClient(std::string base_url, std::chrono::seconds timeout) : base_url_{std::move(base_url)}, timeout_{timeout} {
    (void)split_url(base_url_);
}

ScorerHealth EmbedClient::health() const {
    const SplitUrl url = split_url(base_url_);
    httplib::Client client{url.origin};
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    ScorerHealth health;
    const auto result = client.Get(url.prefix + "/healthz");
    if (!result || result->status / 100 != 2) {
        return health;
    }
    if (result->has_header("X-Scorer-Version")) {
        health.version = result->get_header_value("X-Scorer-Version");
    }
    try {
        const auto body = nlohmann::json::parse(result->body);
        health.ready = body.value("ready", false);
        if (const auto it = body.find("metrics"); it != body.end() && it->is_array()) {
            for (const auto &m : *it) {
                if (m.is_string()) {
                    health.metrics.push_back(m.get<std::string>());
                }
            }
        }
    } catch (const nlohmann::json::exception &) {
        health.ready = false;
    }
    return health;
}

EmbedScores EmbedClient::score(std::string_view candidate, std::span<const std::string> references, std::span<const std::string> metrics) const {
    const nlohmann::json request = score_request_body(candidate, references, metrics);
    const SplitUrl url = split_url(base_url_);
    httplib::Client client{url.origin};
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    const auto result = client.Post(url.prefix + "/score", request.dump(), "application/json");
    if (!result) {
        throw EmbedError{fmt::format("scorer at {} unreachable: {}", url.origin, httplib::to_string(result.error()))};
    }
    if (result->status / 100 != 2) {
        throw EmbedError{fmt::format("scorer returned status {}: {}", result->status, body_excerpt(result->body))};
    }
    try {
        return parse_score_response(nlohmann::json::parse(result->body), metrics);
    } catch (const nlohmann::json::parse_error &e) {
        throw EmbedError{fmt::format("scorer returned malformed JSON: {}", e.what())};
    }
}

}  // namespace judgebench
