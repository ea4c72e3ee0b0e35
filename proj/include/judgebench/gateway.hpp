#ifndef JUDGEBENCH_GATEWAY_HPP_
#define JUDGEBENCH_GATEWAY_HPP_

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

enum class Role { system, user, assistant };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text);

struct ChatMessage {
    Role role{Role::user};
    std::string content;

    friend bool operator==(const ChatMessage &, const ChatMessage &) = default;
};

struct CompletionRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature{1.0};
    std::int64_t seed{0};
    std::optional<int> max_tokens;
    /// Name of the prompting stage issuing the request. Used only for routing
    /// scripted rules; it is not sent upstream and not part of the cache key.
    std::string stage;

    friend bool operator==(const CompletionRequest &, const CompletionRequest &) = default;
};

struct CompletionResponse {
    std::string text;
    nlohmann::json provider_meta = nlohmann::json::object();
};

/// Throws std::invalid_argument when the request violates its invariants
/// (empty message list, last message not from the user, empty content,
/// negative temperature, non-positive max_tokens).
void validate_request(const CompletionRequest &request);

/// The wire body sent to an OpenAI-compatible chat-completions endpoint.
[[nodiscard]] nlohmann::json request_body(const CompletionRequest &request);

/// Hex SHA-256 over (model, messages, temperature, seed, max_tokens). 64 chars.
[[nodiscard]] std::string cache_key(const CompletionRequest &request);

/// Temporary upstream failure (connection error, 5xx, 429); the gateway retries these.
class TransientError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised once every retry attempt has failed with a transient error.
class TransportError : public std::runtime_error {
  public:
    TransportError(const std::string &message, int attempts);
    [[nodiscard]] int attempts() const noexcept { return attempts_; }

  private:
    int attempts_;
};

/// Non-retryable non-success status from the provider.
class ProviderError : public std::runtime_error {
  public:
    ProviderError(int status, std::string body_excerpt);
    [[nodiscard]] int status() const noexcept { return status_; }
    [[nodiscard]] const std::string &body_excerpt() const noexcept { return body_excerpt_; }

  private:
    int status_;
    std::string body_excerpt_;
};

/// A chat-completion backend. Implementations must be safe for concurrent `send`.
class Provider {
  public:
    virtual ~Provider() = default;
    virtual CompletionResponse send(const CompletionRequest &request) = 0;
};

/// Token bucket over requests per minute. A rate of 0 disables limiting.
class RateLimiter {
  public:
    explicit RateLimiter(double requests_per_minute, double burst = 1.0);
    void acquire();

  private:
    using clock = std::chrono::steady_clock;
    double rate_per_second_;
    double capacity_;
    double tokens_;
    clock::time_point last_;
    std::mutex mutex_;
};

struct GatewayOptions {
    int max_retries{2};
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds max_backoff{8000};
    int max_in_flight{4};
    double requests_per_minute{0.0};
    /// In-process memoization of identical requests.
    bool memory_cache{true};
    /// Content-addressed on-disk cache; one file per cache key.
    std::optional<std::filesystem::path> cache_dir;
};

/// Uniform entry point for completions: validation, caching, retries with
/// exponential backoff, an in-flight bound and rate limiting in front of a
/// `Provider`. Safe for concurrent use.
class Gateway {
  public:
    using Recorder = std::function<void(const CompletionRequest &, const CompletionResponse &)>;

    Gateway(std::shared_ptr<Provider> provider, GatewayOptions options = {});

    CompletionResponse complete(const CompletionRequest &request);

    /// Called with every completed request/response pair, cached or not.
    void set_recorder(Recorder recorder);

    [[nodiscard]] std::size_t upstream_calls() const noexcept { return upstream_calls_.load(); }
    [[nodiscard]] std::size_t cache_hits() const noexcept { return cache_hits_.load(); }
    [[nodiscard]] const GatewayOptions &options() const noexcept { return options_; }

  private:
    CompletionResponse fetch(const CompletionRequest &request, const std::string &key);
    CompletionResponse send_with_retries(const CompletionRequest &request);
    std::optional<CompletionResponse> read_disk_cache(const std::string &key) const;
    void write_disk_cache(const std::string &key, const CompletionRequest &request, const CompletionResponse &response) const;

    std::shared_ptr<Provider> provider_;
    GatewayOptions options_;
    std::counting_semaphore<> in_flight_;
    RateLimiter limiter_;
    Recorder recorder_;

    std::mutex cache_mutex_;
    std::map<std::string, std::shared_future<CompletionResponse>> pending_;

    std::atomic<std::size_t> upstream_calls_{0};
    std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace judgebench

#endif  // JUDGEBENCH_GATEWAY_HPP_
