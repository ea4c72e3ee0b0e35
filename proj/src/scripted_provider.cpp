#include "judgebench/scripted_provider.hpp"

#include "fmt/format.h"

#include <fstream>

namespace judgebench {

using nlohmann::json;

bool pattern_matches(std::string_view pattern, std::string_view text) {
    const bool anchored_start = !pattern.empty() && pattern.front() == '^';
    if (anchored_start) {
        pattern.remove_prefix(1);
    }
    const bool anchored_end = !pattern.empty() && pattern.back() == '$';
    if (anchored_end) {
        pattern.remove_suffix(1);
    }
    if (anchored_start && anchored_end) {
        return text == pattern;
    }
    if (anchored_start) {
        return text.starts_with(pattern);
    }
    if (anchored_end) {
        return text.ends_with(pattern);
    }
    return text.find(pattern) != std::string_view::npos;
}

void ScriptedProvider::register_script(std::string pattern, std::string response, std::optional<std::string> stage_hint, MatchScope scope) {
    if (pattern.empty()) {
        throw std::invalid_argument{"script pattern must be non-empty"};
    }
    rules_.push_back(ScriptRule{std::move(pattern), std::move(response), std::move(stage_hint), scope});
}

void ScriptedProvider::set_default_response(std::string response) {
    default_response_ = std::move(response);
    strict_ = false;
}

CompletionResponse ScriptedProvider::send(const CompletionRequest &request) {
    ++calls_;
    const std::string_view last = request.messages.empty() ? std::string_view{} : std::string_view{request.messages.back().content};
    for (const ScriptRule &rule : rules_) {
        if (rule.stage_hint && *rule.stage_hint != request.stage) {
            continue;
        }
        bool matched = false;
        if (rule.scope == MatchScope::last_user) {
            matched = pattern_matches(rule.pattern, last);
        } else {
            for (const ChatMessage &m : request.messages) {
                if (pattern_matches(rule.pattern, m.content)) {
                    matched = true;
                    break;
                }
            }
        }
        if (matched) {
            return CompletionResponse{rule.response, json{{"provider", "scripted"}}};
        }
    }
    if (!strict_ && default_response_) {
        return CompletionResponse{*default_response_, json{{"provider", "scripted"}, {"default", true}}};
    }
    const std::string excerpt = last.size() > 80 ? std::string{last.substr(0, 80)} + "..." : std::string{last};
    throw ScriptError{fmt::format("no scripted rule matches prompt \"{}\"", excerpt)};
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_json(const json &script) {
    auto provider = std::make_shared<ScriptedProvider>();
    for (const json &rule : script.value("rules", json::array())) {
        std::optional<std::string> stage;
        if (rule.contains("stage") && !rule["stage"].is_null()) {
            stage = rule["stage"].get<std::string>();
        }
        const std::string scope = rule.value("scope", "last_user");
        if (scope != "last_user" && scope != "conversation") {
            throw std::invalid_argument{fmt::format("unknown rule scope '{}'", scope)};
        }
        provider->register_script(rule.at("pattern").get<std::string>(), rule.at("response").get<std::string>(), std::move(stage),
                                 scope == "conversation" ? MatchScope::conversation : MatchScope::last_user);
    }
    if (script.contains("default") && !script["default"].is_null()) {
        provider->set_default_response(script["default"].get<std::string>());
    }
    if (script.contains("strict")) {
        provider->set_strict(script["strict"].get<bool>());
    }
    return provider;
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_file(const std::filesystem::path &path) {
    std::ifstream in{path};
    if (!in) {
        throw std::runtime_error{fmt::format("cannot open script file '{}'", path.string())};
    }
    return from_json(json::parse(in));
}

}  // namespace judgebench
