#ifndef JUDGEBENCH_TEXT_METRICS_HPP_
#define JUDGEBENCH_TEXT_METRICS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

/// N-gram rationale metrics. String overloads tokenize with `tokenize_lower`;
/// token overloads take pre-tokenized input. All scores are in [0, 100].
///
/// ROUGE and METEOR score each reference separately and keep the maximum.
/// BLEU clips n-gram counts against all references jointly.
namespace text {

using Tokens = std::vector<std::string>;

/// Added to zero matched n-gram counts so one missing order does not zero BLEU.
inline constexpr double bleu_epsilon = 1e-9;

[[nodiscard]] double rouge_n(std::span<const std::string> candidate, std::span<const Tokens> references, int n);
[[nodiscard]] double rouge_l(std::span<const std::string> candidate, std::span<const Tokens> references);

/// Cumulative BLEU over orders 1..n with uniform weights. The brevity penalty
/// uses the shortest reference, so adding references never lowers the
/// score. A candidate with fewer than n tokens scores 0.
[[nodiscard]] double bleu(std::span<const std::string> candidate, std::span<const Tokens> references, int n);

/// Exact-match METEOR: F_mean = 10PR/(R+9P), penalty 0.5 (chunks/matches)^3.
/// No stemming or synonym matching.
[[nodiscard]] double meteor(std::span<const std::string> candidate, std::span<const Tokens> references);

[[nodiscard]] std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace text

[[nodiscard]] double rouge_n(std::string_view candidate, std::span<const std::string> references, int n);
[[nodiscard]] double rouge_l(std::string_view candidate, std::span<const std::string> references);
[[nodiscard]] double bleu_n(std::string_view candidate, std::span<const std::string> references, int n);
[[nodiscard]] double meteor(std::string_view candidate, std::span<const std::string> references);

struct TextScores {
    double rouge1_f{0.0};
    double rouge2_f{0.0};
    double rougeL_f{0.0};
    double bleu1{0.0};
    double bleu2{0.0};
    double bleu3{0.0};
    double meteor{0.0};

    TextScores &operator+=(const TextScores &other) noexcept;
    TextScores &operator/=(double divisor) noexcept;
};

[[nodiscard]] TextScores score_rationale(std::string_view candidate, std::span<const std::string> references);

}  // namespace judgebench

#endif  // JUDGEBENCH_TEXT_METRICS_HPP_
