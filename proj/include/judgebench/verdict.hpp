#ifndef JUDGEBENCH_VERDICT_HPP_
#define JUDGEBENCH_VERDICT_HPP_

#include "judgebench/judgment.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace judgebench {

/// Bumped whenever the phrase lexicon or the scanning rules change, so parsed
/// results can be traced to the parser that produced them.
inline constexpr std::string_view verdict_lexicon_version = "1";

struct LexiconPhrase {
    std::string_view text;  ///< lowercase, single-spaced
    Judgment label;
};

/// Phrase forms recognised in addition to the bare acronyms.
inline constexpr std::array<LexiconPhrase, 11> verdict_phrases{{
    {"you're the asshole", Judgment::yta},
    {"you are the asshole", Judgment::yta},
    {"narrator is at fault", Judgment::yta},
    {"i am the asshole", Judgment::yta},
    {"i'm the asshole", Judgment::yta},
    {"not the asshole", Judgment::nta},
    {"not at fault", Judgment::nta},
    {"not to blame", Judgment::nta},
    {"i am not the asshole", Judgment::nta},
    {"i'm not the asshole", Judgment::nta},
    {"narrator is not at fault", Judgment::nta},
}};

/// Number of word tokens before an acronym searched for a negation.
inline constexpr std::size_t negation_window = 3;

struct ParsedVerdict {
    Judgment judgment{Judgment::abstain};
    /// The response with surrounding whitespace removed.
    std::string rationale;
    /// Exact text span (from the response) that decided the label; empty for Abstain.
    std::optional<std::string> matched_evidence;

    friend bool operator==(const ParsedVerdict &, const ParsedVerdict &) = default;
};

/// Extracts the judgment from free-form model output.
///
/// Scans case-insensitively in reading order; the earliest piece of evidence
/// wins (an acronym's position is that of the acronym itself, even when a
/// negation precedes it). Evidence is either a word-bounded "YTA"/"NTA" acronym or a lexicon
/// phrase; at the same offset the acronym takes precedence. An acronym with
/// "not" among the preceding three words resolves
/// to the opposite label. No evidence yields Abstain.
[[nodiscard]] ParsedVerdict parse_verdict(std::string_view text);

struct LabelDistribution {
    std::array<std::size_t, 3> counts{};
    /// Percentages indexed by `index_of(Judgment)`; they sum to 100.
    std::array<double, 3> percent{};
    std::size_t total{0};

    [[nodiscard]] double operator[](Judgment j) const noexcept { return percent[index_of(j)]; }
};

/// Throws std::invalid_argument for an empty list.
[[nodiscard]] LabelDistribution label_distribution(std::span<const Judgment> verdicts);

}  // namespace judgebench

#endif  // JUDGEBENCH_VERDICT_HPP_
