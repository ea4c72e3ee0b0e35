#include "judgebench/grouping.hpp"

#include "judgebench/tokenize.hpp"

#include "fmt/format.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace judgebench {

std::string_view age_bin(int age) {
    if (age < 0) {
        throw std::invalid_argument{fmt::format("age must be non-negative, got {}", age)};
    }
    if (age < 20) {
        return age_bin_labels[0];
    }
    if (age <= 30) {
        return age_bin_labels[1];
    }
    return age_bin_labels[2];
}

std::string_view majority_bucket(double pct) {
    if (!(pct >= min_majority_pct && pct <= 100.0)) {
        throw std::invalid_argument{fmt::format("majority percentage must lie in [70, 100], got {}", pct)};
    }
    if (pct < 90.0) {
        return majority_bucket_labels[0];
    }
    if (pct < 100.0) {
        return majority_bucket_labels[1];
    }
    return majority_bucket_labels[2];
}

QuartileSplit length_quartiles(std::span<const CorpusEntry> entries) {
    if (entries.size() < 4) {
        throw std::invalid_argument{fmt::format("length quartiles need at least 4 entries, got {}", entries.size())};
    }
    std::vector<std::size_t> counts(entries.size());
    std::transform(entries.begin(), entries.end(), counts.begin(), [](const CorpusEntry &e) { return token_count(e.anecdote.text); });

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (counts[a] != counts[b]) {
            return counts[a] < counts[b];
        }
        return entries[a].anecdote.id < entries[b].anecdote.id;
    });

    QuartileSplit split;
    split.assignment.assign(entries.size(), 0);
    const std::size_t base = entries.size() / 4;
    const std::size_t remainder = entries.size() % 4;
    std::size_t rank = 0;
    for (int q = 0; q < 4; ++q) {
        const std::size_t size = base + (static_cast<std::size_t>(q) < remainder ? 1 : 0);
        split.sizes[q] = size;
        for (std::size_t k = 0; k < size; ++k, ++rank) {
            split.assignment[order[rank]] = q;
        }
        if (q < 3) {
            split.thresholds[q] = counts[order[rank - 1]];
        }
    }
    return split;
}

}  // namespace judgebench
