#ifndef JUDGEBENCH_STATS_HPP_
#define JUDGEBENCH_STATS_HPP_

#include <span>
#include <vector>

namespace judgebench {

struct SeedAggregate {
    double mean{0.0};
    double stddev{0.0};  ///< sample (n - 1) standard deviation
    std::vector<double> values;
};

/// Throws std::invalid_argument for fewer than two values.
[[nodiscard]] SeedAggregate aggregate_seeds(std::span<const double> values);

inline constexpr double significance_level = 0.05;

struct SignificanceResult {
    double t{0.0};
    double degrees_of_freedom{0.0};
    double p{1.0};  ///< two-sided, in (0, 1]
    bool significant{false};
};

/// Welch's unequal-variance t-test, two-sided.
///
/// Two zero-variance samples with equal means give t = 0, p = 1. With zero
/// variance and different means t is infinite and p is clamped to the
/// smallest positive double so it stays in (0, 1].
/// Throws std::invalid_argument if either sample has fewer than two values.
[[nodiscard]] SignificanceResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace judgebench

#endif  // JUDGEBENCH_STATS_HPP_
