#ifndef JUDGEBENCH_GROUPING_HPP_
#define JUDGEBENCH_GROUPING_HPP_

#include "judgebench/corpus.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace judgebench {

inline constexpr std::array<std::string_view, 3> age_bin_labels{"<20", "20-30", ">30"};
inline constexpr std::array<std::string_view, 3> majority_bucket_labels{"70-90", "90-99", "100"};
inline constexpr std::array<std::string_view, 4> quartile_labels{"Q1", "Q2", "Q3", "Q4"};

/// Ages 20 and 30 both fall in "20-30". Throws std::invalid_argument for negative ages.
[[nodiscard]] std::string_view age_bin(int age);

/// Half-open buckets [70,90), [90,100), {100}. Throws std::invalid_argument outside [70,100].
[[nodiscard]] std::string_view majority_bucket(double pct);

struct QuartileSplit {
    /// Token count of the last (longest) entry in quartiles 1..3.
    std::array<std::size_t, 3> thresholds{};
    /// Quartile index 0..3 for each input entry, in input order.
    std::vector<int> assignment;
    std::array<std::size_t, 4> sizes{};
};

/// Orders entries by (token_count, id) and cuts them into four buckets whose
/// sizes differ by at most one (earlier buckets take the remainder).
/// Throws std::invalid_argument for fewer than four entries.
[[nodiscard]] QuartileSplit length_quartiles(std::span<const CorpusEntry> entries);

}  // namespace judgebench

#endif  // JUDGEBENCH_GROUPING_HPP_
