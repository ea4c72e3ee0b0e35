#ifndef JUDGEBENCH_HTTP_PROVIDER_HPP_
#define JUDGEBENCH_HTTP_PROVIDER_HPP_

#include "judgebench/gateway.hpp"

#include <chrono>
#include <string>

namespace judgebench {

inline constexpr const char *default_credential_env = "JUDGEBENCH_API_KEY";

struct ProviderConfig {
    /// scheme://host[:port][/prefix]; requests go to {base_url}/v1/chat/completions.
    std::string base_url{"http://127.0.0.1:8000"};
    /// Name of the environment variable holding the bearer token. The token
    /// itself is never stored in the config or logged.
    std::string credential_env{default_credential_env};
    std::chrono::seconds timeout{120};
};

/// OpenAI-compatible chat-completions client.
///
/// Connection failures, 429 and 5xx map to `TransientError` (retried by the
/// gateway); any other non-2xx status maps to `ProviderError`.
class HttpProvider final : public Provider {
  public:
    explicit HttpProvider(ProviderConfig config);

    CompletionResponse send(const CompletionRequest &request) override;

  private:
    ProviderConfig config_;
    std::string origin_;
    std::string path_prefix_;
};

/// Truncates `body` to at most `limit` bytes for error messages.
[[nodiscard]] std::string body_excerpt(const std::string &body, std::size_t limit = 200);

}  // namespace judgebench

#endif  // JUDGEBENCH_HTTP_PROVIDER_HPP_
