#include "judgebench/gateway.hpp"

#include "fmt/format.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <thread>

namespace judgebench {

using nlohmann::json;

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

std::optional<Role> parse_role(std::string_view text) {
    if (text == "system") return Role::system;
    if (text == "user") return Role::user;
    if (text == "assistant") return Role::assistant;
    return std::nullopt;
}

void validate_request(const CompletionRequest &request) {
    if (request.messages.empty()) {
        throw std::invalid_argument{"completion request has no messages"};
    }
    if (request.messages.back().role != Role::user) {
        throw std::invalid_argument{"last message of a completion request must come from the user"};
    }
    for (const ChatMessage &m : request.messages) {
        if (m.content.empty()) {
            throw std::invalid_argument{"chat message content must be non-empty"};
        }
    }
    if (!(request.temperature >= 0.0)) {
        throw std::invalid_argument{"temperature must be non-negative"};
    }
    if (request.max_tokens && *request.max_tokens <= 0) {
        throw std::invalid_argument{"max_tokens must be positive when set"};
    }
}

json request_body(const CompletionRequest &request) {
    json messages = json::array();
    for (const ChatMessage &m : request.messages) {
        messages.push_back({{"role", std::string{to_string(m.role)}}, {"content", m.content}});
    }
    json body{{"model", request.model}, {"messages", std::move(messages)}, {"temperature", request.temperature}, {"seed", request.seed}};
    if (request.max_tokens) {
        body["max_tokens"] = *request.max_tokens;
    }
    return body;
}

std::string cache_key(const CompletionRequest &request) {
    json canonical = request_body(request);
    if (!request.max_tokens) {
        canonical["max_tokens"] = nullptr;
    }
    const std::string payload = canonical.dump();

    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(payload.data(), payload.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error{"SHA-256 digest failed"};
    }
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

TransportError::TransportError(const std::string &message, int attempts) :
    std::runtime_error{fmt::format("transport error after {} attempt(s): {}", attempts, message)},
    attempts_{attempts} {}

ProviderError::ProviderError(int status, std::string body_excerpt) :
    std::runtime_error{fmt::format("provider returned status {}: {}", status, body_excerpt)},
    status_{status},
    body_excerpt_{std::move(body_excerpt)} {}

RateLimiter::RateLimiter(double requests_per_minute, double burst) :
    rate_per_second_{requests_per_minute / 60.0},
    capacity_{std::max(burst, 1.0)},
    tokens_{capacity_},
    last_{clock::now()} {}

void RateLimiter::acquire() {
    if (rate_per_second_ <= 0.0) {
        return;
    }
    std::unique_lock lock{mutex_};
    while (true) {
        const auto now = clock::now();
        tokens_ = std::min(capacity_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_per_second_);
        last_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_per_second_);
        lock.unlock();
        std::this_thread::sleep_for(wait);
        lock.lock();
    }
}

Gateway::Gateway(std::shared_ptr<Provider> provider, GatewayOptions options) :
    provider_{std::move(provider)},
    options_{std::move(options)},
    in_flight_{std::max(options_.max_in_flight, 1)},
    limiter_{options_.requests_per_minute} {
    if (!provider_) {
        throw std::invalid_argument{"gateway requires a provider"};
    }
    if (options_.max_in_flight < 1) {
        throw std::invalid_argument{"max in-flight requests must be at least 1"};
    }
    if (options_.max_retries < 0) {
        throw std::invalid_argument{"max retries must be non-negative"};
    }
    if (options_.cache_dir) {
        std::filesystem::create_directories(*options_.cache_dir);
    }
}

void Gateway::set_recorder(Recorder recorder) { recorder_ = std::move(recorder); }

CompletionResponse Gateway::complete(const CompletionRequest &request) {
    validate_request(request);
    const std::string key = cache_key(request);

    CompletionResponse response;
    if (!options_.memory_cache) {
        response = fetch(request, key);
    } else {
        std::promise<CompletionResponse> promise;
        std::shared_future<CompletionResponse> shared;
        bool owner = false;
        {
            std::lock_guard lock{cache_mutex_};
            if (const auto it = pending_.find(key); it != pending_.end()) {
                shared = it->second;
            } else {
                shared = promise.get_future().share();
                pending_.emplace(key, shared);
                owner = true;
            }
        }
        if (owner) {
            try {
                response = fetch(request, key);
                promise.set_value(response);
            } catch (...) {
                {
                    std::lock_guard lock{cache_mutex_};
                    pending_.erase(key);
                }
                promise.set_exception(std::current_exception());
                throw;
            }
        } else {
            response = shared.get();
            ++cache_hits_;
        }
    }
    if (recorder_) {
        recorder_(request, response);
    }
    return response;
}

CompletionResponse Gateway::fetch(const CompletionRequest &request, const std::string &key) {
    if (auto cached = read_disk_cache(key)) {
        ++cache_hits_;
        return *std::move(cached);
    }
    CompletionResponse response = send_with_retries(request);
    write_disk_cache(key, request, response);
    return response;
}

CompletionResponse Gateway::send_with_retries(const CompletionRequest &request) {
    auto backoff = options_.initial_backoff;
    for (int attempt = 1;; ++attempt) {
        try {
            limiter_.acquire();
            in_flight_.acquire();
            ++upstream_calls_;
            try {
                CompletionResponse response = provider_->send(request);
                in_flight_.release();
                return response;
            } catch (...) {
                in_flight_.release();
                throw;
            }
        } catch (const TransientError &e) {
            if (attempt > options_.max_retries) {
                throw TransportError{e.what(), attempt};
            }
        }
        std::this_thread::sleep_for(backoff);
        backoff = std::min(backoff * 2, options_.max_backoff);
    }
}

std::optional<CompletionResponse> Gateway::read_disk_cache(const std::string &key) const {
    if (!options_.cache_dir) {
        return std::nullopt;
    }
    std::ifstream in{*options_.cache_dir / (key + ".json")};
    if (!in) {
        return std::nullopt;
    }
    try {
        const json record = json::parse(in);
        CompletionResponse response;
        response.text = record.at("response").at("text").get<std::string>();
        response.provider_meta = record.at("response").value("provider_meta", json::object());
        return response;
    } catch (const json::exception &) {
        // unreadable entries are treated as misses and overwritten
        return std::nullopt;
    }
}

void Gateway::write_disk_cache(const std::string &key, const CompletionRequest &request, const CompletionResponse &response) const {
    if (!options_.cache_dir) {
        return;
    }
    const json record{{"key", key},
                      {"request", request_body(request)},
                      {"response", {{"text", response.text}, {"provider_meta", response.provider_meta}}}};
    const auto target = *options_.cache_dir / (key + ".json");
    std::ostringstream tmp_name;
    tmp_name << key << ".tmp." << std::this_thread::get_id();
    const auto tmp = *options_.cache_dir / tmp_name.str();
    {
        std::ofstream out{tmp, std::ios::trunc};
        if (!out) {
            throw std::runtime_error{fmt::format("cannot write cache file '{}'", tmp.string())};
        }
        out << record.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace judgebench
