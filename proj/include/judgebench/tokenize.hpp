#ifndef JUDGEBENCH_TOKENIZE_HPP_
#define JUDGEBENCH_TOKENIZE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

/// Deterministic word tokenizer shared by length analysis and text metrics.
///
/// Splits on whitespace, then peels leading and trailing ASCII punctuation
/// off each chunk one character per token, then splits contractions at the
/// apostrophe: "don't" -> "do" "n't", "it's" -> "it" "'s". Typographic
/// apostrophes (U+2018, U+2019) are treated as ASCII `'`.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// `tokenize` followed by ASCII lowercasing.
[[nodiscard]] std::vector<std::string> tokenize_lower(std::string_view text);

[[nodiscard]] std::size_t token_count(std::string_view text);

}  // namespace judgebench

#endif  // JUDGEBENCH_TOKENIZE_HPP_
