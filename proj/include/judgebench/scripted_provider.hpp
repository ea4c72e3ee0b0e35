#ifndef JUDGEBENCH_SCRIPTED_PROVIDER_HPP_
#define JUDGEBENCH_SCRIPTED_PROVIDER_HPP_

#include "judgebench/gateway.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace judgebench {

/// Raised in strict mode when no rule matches a request.
class ScriptError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Which part of the request a rule pattern is matched against.
enum class MatchScope {
    last_user,     ///< the final user message (default)
    conversation,  ///< any message in the request
};

struct ScriptRule {
    /// Plain substring, or anchored: a leading '^' requires a prefix match and
    /// a trailing '$' requires a suffix match. Matching is case-sensitive.
    std::string pattern;
    std::string response;
    std::optional<std::string> stage_hint;
    MatchScope scope{MatchScope::last_user};
};

/// Deterministic stand-in for a model endpoint. Rules are tried in
/// registration order and the first match answers. Registration is a setup
/// step; `send` is safe to call concurrently once it is done.
class ScriptedProvider final : public Provider {
  public:
    ScriptedProvider() = default;

    /// Throws std::invalid_argument for an empty pattern.
    void register_script(std::string pattern, std::string response, std::optional<std::string> stage_hint = std::nullopt,
                         MatchScope scope = MatchScope::last_user);

    /// Answer used when no rule matches and strict mode is off.
    void set_default_response(std::string response);
    void set_strict(bool strict) noexcept { strict_ = strict; }

    CompletionResponse send(const CompletionRequest &request) override;

    [[nodiscard]] std::size_t calls() const noexcept { return calls_.load(); }
    [[nodiscard]] const std::vector<ScriptRule> &rules() const noexcept { return rules_; }

    /// Loads `{"strict": bool, "default": str, "rules": [{"pattern", "response", "stage", "scope"}]}`.
    static std::shared_ptr<ScriptedProvider> from_json(const nlohmann::json &script);
    static std::shared_ptr<ScriptedProvider> from_file(const std::filesystem::path &path);

  private:
    std::vector<ScriptRule> rules_;
    std::optional<std::string> default_response_;
    bool strict_{true};
    std::atomic<std::size_t> calls_{0};
};

[[nodiscard]] bool pattern_matches(std::string_view pattern, std::string_view text);

}  // namespace judgebench

#endif  // JUDGEBENCH_SCRIPTED_PROVIDER_HPP_
