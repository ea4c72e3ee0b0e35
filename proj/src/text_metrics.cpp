#include "judgebench/text_metrics.hpp"

#include "judgebench/tokenize.hpp"

#include "fmt/format.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace judgebench {

namespace text {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(std::span<const std::string> tokens, int n) {
    NgramCounts counts;
    const auto order = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + order))];
    }
    return counts;
}

std::size_t total_count(const NgramCounts &counts) {
    std::size_t sum = 0;
    for (const auto &[gram, c] : counts) {
        sum += c;
    }
    return sum;
}

void require_references(std::span<const Tokens> references) {
    if (references.empty()) {
        throw std::invalid_argument{"text metrics need at least one reference"};
    }
}

void require_order(int n) {
    if (n < 1) {
        throw std::invalid_argument{fmt::format("n-gram order must be positive, got {}", n)};
    }
}

double f_measure(double precision, double recall) {
    return (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double rouge_n(std::span<const std::string> candidate, std::span<const Tokens> references, int n) {
    require_references(references);
    require_order(n);
    const NgramCounts cand = ngrams(candidate, n);
    const std::size_t cand_total = total_count(cand);
    if (cand_total == 0) {
        return 0.0;
    }
    double best = 0.0;
    for (const Tokens &reference : references) {
        const NgramCounts ref = ngrams(reference, n);
        const std::size_t ref_total = total_count(ref);
        if (ref_total == 0) {
            continue;
        }
        std::size_t overlap = 0;
        for (const auto &[gram, count] : cand) {
            if (const auto it = ref.find(gram); it != ref.end()) {
                overlap += std::min(count, it->second);
            }
        }
        const double p = static_cast<double>(overlap) / static_cast<double>(cand_total);
        const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
        best = std::max(best, 100.0 * f_measure(p, r));
    }
    return best;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(std::span<const std::string> candidate, std::span<const Tokens> references) {
    require_references(references);
    if (candidate.empty()) {
        return 0.0;
    }
    double best = 0.0;
    for (const Tokens &reference : references) {
        if (reference.empty()) {
            continue;
        }
        const auto lcs = static_cast<double>(lcs_length(candidate, reference));
        best = std::max(best, 100.0 * f_measure(lcs / static_cast<double>(candidate.size()), lcs / static_cast<double>(reference.size())));
    }
    return best;
}

double bleu(std::span<const std::string> candidate, std::span<const Tokens> references, int n) {
    require_references(references);
    require_order(n);
    if (candidate.size() < static_cast<std::size_t>(n)) {
        return 0.0;
    }
    double log_sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const NgramCounts cand = ngrams(candidate, k);
        NgramCounts max_ref;
        for (const Tokens &reference : references) {
            for (const auto &[gram, count] : ngrams(reference, k)) {
                auto &slot = max_ref[gram];
                slot = std::max(slot, count);
            }
        }
        std::size_t matched = 0;
        for (const auto &[gram, count] : cand) {
            if (const auto it = max_ref.find(gram); it != max_ref.end()) {
                matched += std::min(count, it->second);
            }
        }
        const auto total = static_cast<double>(total_count(cand));
        const double precision = matched == 0 ? bleu_epsilon / total : static_cast<double>(matched) / total;
        log_sum += std::log(precision) / static_cast<double>(n);
    }
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const Tokens &reference : references) {
        shortest = std::min(shortest, reference.size());
    }
    const auto c = static_cast<double>(candidate.size());
    const auto r = static_cast<double>(shortest);
    const double brevity = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return 100.0 * brevity * std::exp(log_sum);
}

namespace {

double meteor_single(std::span<const std::string> candidate, const Tokens &reference) {
    if (candidate.empty() || reference.empty()) {
        return 0.0;
    }
    // Greedy exact alignment: extend the current chunk when the next reference
    // position also matches, otherwise take the earliest unused occurrence.
    std::vector<bool> used(reference.size(), false);
    std::vector<std::ptrdiff_t> aligned(candidate.size(), -1);
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (i > 0 && aligned[i - 1] >= 0) {
            const auto next = static_cast<std::size_t>(aligned[i - 1] + 1);
            if (next < reference.size() && !used[next] && reference[next] == candidate[i]) {
                used[next] = true;
                aligned[i] = static_cast<std::ptrdiff_t>(next);
                continue;
            }
        }
        for (std::size_t j = 0; j < reference.size(); ++j) {
            if (!used[j] && reference[j] == candidate[i]) {
                used[j] = true;
                aligned[i] = static_cast<std::ptrdiff_t>(j);
                break;
            }
        }
    }
    std::size_t matches = 0;
    std::size_t chunks = 0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (aligned[i] < 0) {
            continue;
        }
        ++matches;
        if (i == 0 || aligned[i - 1] < 0 || aligned[i] != aligned[i - 1] + 1) {
            ++chunks;
        }
    }
    if (matches == 0) {
        return 0.0;
    }
    const double m = static_cast<double>(matches);
    const double p = m / static_cast<double>(candidate.size());
    const double r = m / static_cast<double>(reference.size());
    const double f_mean = 10.0 * p * r / (r + 9.0 * p);
    const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
    return 100.0 * f_mean * (1.0 - penalty);
}

}  // namespace

double meteor(std::span<const std::string> candidate, std::span<const Tokens> references) {
    require_references(references);
    double best = 0.0;
    for (const Tokens &reference : references) {
        best = std::max(best, meteor_single(candidate, reference));
    }
    return best;
}

}  // namespace text

namespace {

std::vector<text::Tokens> tokenize_all(std::span<const std::string> references) {
    std::vector<text::Tokens> out;
    out.reserve(references.size());
    for (const std::string &r : references) {
        out.push_back(tokenize_lower(r));
    }
    return out;
}

}  // namespace

double rouge_n(std::string_view candidate, std::span<const std::string> references, int n) {
    return text::rouge_n(tokenize_lower(candidate), tokenize_all(references), n);
}

double rouge_l(std::string_view candidate, std::span<const std::string> references) {
    return text::rouge_l(tokenize_lower(candidate), tokenize_all(references));
}

double bleu_n(std::string_view candidate, std::span<const std::string> references, int n) {
    return text::bleu(tokenize_lower(candidate), tokenize_all(references), n);
}

double meteor(std::string_view candidate, std::span<const std::string> references) {
    return text::meteor(tokenize_lower(candidate), tokenize_all(references));
}

TextScores &TextScores::operator+=(const TextScores &other) noexcept {
    rouge1_f += other.rouge1_f;
    rouge2_f += other.rouge2_f;
    rougeL_f += other.rougeL_f;
    bleu1 += other.bleu1;
    bleu2 += other.bleu2;
    bleu3 += other.bleu3;
    meteor += other.meteor;
    return *this;
}

TextScores &TextScores::operator/=(double divisor) noexcept {
    rouge1_f /= divisor;
    rouge2_f /= divisor;
    rougeL_f /= divisor;
    bleu1 /= divisor;
    bleu2 /= divisor;
    bleu3 /= divisor;
    meteor /= divisor;
    return *this;
}

TextScores score_rationale(std::string_view candidate, std::span<const std::string> references) {
    const text::Tokens cand = tokenize_lower(candidate);
    const std::vector<text::Tokens> refs = tokenize_all(references);
    TextScores s;
    s.rouge1_f = text::rouge_n(cand, refs, 1);
    s.rouge2_f = text::rouge_n(cand, refs, 2);
    s.rougeL_f = text::rouge_l(cand, refs);
    s.bleu1 = text::bleu(cand, refs, 1);
    s.bleu2 = text::bleu(cand, refs, 2);
    s.bleu3 = text::bleu(cand, refs, 3);
    s.meteor = text::meteor(cand, refs);
    return s;
}

}  // namespace judgebench
