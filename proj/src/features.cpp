#include "judgebench/features.hpp"

#include "judgebench/strings.hpp"

#include "fmt/format.h"

#include <cctype>
#include <charconv>

namespace judgebench {

namespace {

std::string_view strip_line_decoration(std::string_view line) {
    line = trim(line);
    // bullets and list numbering: "- ", "* ", "1. ", "2) "
    while (!line.empty() && (line.front() == '-' || line.front() == '*' || line.front() == '#')) {
        line.remove_prefix(1);
    }
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) {
        ++digits;
    }
    if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
        line.remove_prefix(digits + 1);
    }
    return trim(line);
}

std::optional<int> first_integer(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && !std::isdigit(static_cast<unsigned char>(text[i]))) {
        ++i;
    }
    if (i == text.size()) {
        return std::nullopt;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
    }
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
    if (ec != std::errc{} || value < 0 || value > max_plausible_age) {
        return std::nullopt;
    }
    return static_cast<int>(value);
}

Gender normalize_gender(std::string_view value) {
    const std::string lower = to_lower(value);
    if (lower.find("female") != std::string::npos) {
        return Gender::female;
    }
    if (lower.find("male") != std::string::npos) {
        return Gender::male;
    }
    return Gender::unknown;
}

std::optional<std::string> non_empty(std::string_view value) {
    if (value.empty()) {
        return std::nullopt;
    }
    return std::string{value};
}

std::string render_with_anecdote(std::string_view prompt, const Anecdote &anecdote) { return anecdote.text + "\n\n" + std::string{prompt}; }

}  // namespace

FeatureAnnotations parse_feature_block(std::string_view text) {
    FeatureAnnotations features;
    bool seen_type = false, seen_narrator = false, seen_other = false, seen_gender = false, seen_age = false;
    for (const std::string &raw_line : split(text, '\n')) {
        const std::string_view line = strip_line_decoration(raw_line);
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            continue;
        }
        std::string key = to_lower(trim(line.substr(0, colon)));
        key.erase(std::remove(key.begin(), key.end(), '*'), key.end());
        key = std::string{trim(key)};
        std::string_view value = trim(line.substr(colon + 1));
        while (!value.empty() && value.front() == '*') {
            value.remove_prefix(1);
        }
        value = trim(value);

        if (key == "type" && !seen_type) {
            features.relationship_type = non_empty(value);
            seen_type = true;
        } else if (key == "narrator" && !seen_narrator) {
            features.narrator_role = non_empty(value);
            seen_narrator = true;
        } else if (key == "other party" && !seen_other) {
            features.other_party = non_empty(value);
            seen_other = true;
        } else if (key == "gender" && !seen_gender) {
            features.gender = normalize_gender(value);
            seen_gender = true;
        } else if (key == "age" && !seen_age) {
            features.age = first_integer(value);
            seen_age = true;
        }
    }
    return features;
}

FeatureAnnotations extract_features(const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings) {
    CompletionRequest request{settings.model,
                              {ChatMessage{Role::user, render_with_anecdote(prompts::demographics, anecdote)}},
                              settings.temperature,
                              settings.seed,
                              settings.max_tokens,
                              "demographics"};
    return parse_feature_block(gateway.complete(request).text);
}

GenderSwapResult parse_swap_reply(std::string_view reply, std::string source_id) {
    GenderSwapResult result;
    result.source_id = std::move(source_id);
    const std::string lower = to_lower(reply);
    if (lower.find(to_lower(not_applicable_marker)) != std::string::npos) {
        return result;
    }
    if (const std::size_t pos = lower.find(to_lower(swap_marker)); pos != std::string::npos) {
        const std::string_view story = trim(reply.substr(pos + swap_marker.size()));
        if (!story.empty()) {
            result.outcome = GenderSwapResult::Outcome::swapped;
            result.text = std::string{story};
            return result;
        }
        result.warning = "swap reply has an empty story after the marker";
        return result;
    }
    result.warning = "swap reply carries neither a swapped story nor the not-applicable marker";
    return result;
}

GenderSwapResult gender_swap(const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings) {
    CompletionRequest request{settings.model,
                              {ChatMessage{Role::user, replace_all(prompts::gender_swap, prompts::story_placeholder, anecdote.text)}},
                              settings.temperature,
                              settings.seed,
                              settings.max_tokens,
                              "genderswap"};
    return parse_swap_reply(gateway.complete(request).text, anecdote.id);
}

std::string swapped_id(std::string_view id) { return std::string{id} + std::string{swapped_suffix}; }

std::string original_id(std::string_view id) {
    if (id.ends_with(swapped_suffix)) {
        id.remove_suffix(swapped_suffix.size());
    }
    return std::string{id};
}

std::vector<CorpusEntry> swap_candidates(std::span<const CorpusEntry> entries) {
    std::vector<CorpusEntry> out;
    for (const CorpusEntry &e : entries) {
        if (e.features && e.features->gender != Gender::unknown) {
            out.push_back(e);
        }
    }
    return out;
}

CorpusEntry make_swapped_entry(const CorpusEntry &original, const GenderSwapResult &swap) {
    if (swap.outcome != GenderSwapResult::Outcome::swapped) {
        throw std::invalid_argument{fmt::format("anecdote '{}' has no swapped story", original.anecdote.id)};
    }
    CorpusEntry entry = original;
    entry.anecdote.id = swapped_id(original.anecdote.id);
    entry.anecdote.text = swap.text;
    entry.extras["swapped_from"] = original.anecdote.id;
    if (entry.features) {
        if (entry.features->gender == Gender::male) {
            entry.features->gender = Gender::female;
        } else if (entry.features->gender == Gender::female) {
            entry.features->gender = Gender::male;
        }
    }
    return entry;
}

}  // namespace judgebench
