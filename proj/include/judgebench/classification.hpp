#ifndef JUDGEBENCH_CLASSIFICATION_HPP_
#define JUDGEBENCH_CLASSIFICATION_HPP_

#include "judgebench/judgment.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace judgebench {

/// Gold (NTA, YTA) x predicted (NTA, YTA, Abstain) counts.
struct ConfusionCounts {
    std::array<std::array<std::size_t, 3>, 2> cells{};

    [[nodiscard]] std::size_t at(Judgment gold, Judgment pred) const { return cells[index_of(gold)][index_of(pred)]; }
    [[nodiscard]] std::size_t total() const noexcept;
    ConfusionCounts &operator+=(const ConfusionCounts &other) noexcept;

    friend bool operator==(const ConfusionCounts &, const ConfusionCounts &) = default;
};

struct ClassMetrics {
    double precision{0.0};  ///< percent
    double recall{0.0};     ///< percent
    double f1{0.0};         ///< percent
    std::size_t support{0};
    std::size_t true_positives{0};
    std::size_t false_positives{0};
    std::size_t false_negatives{0};
};

/// Binary-task report in percentages at full precision; round only when presenting.
struct ClassificationReport {
    ClassMetrics nta;
    ClassMetrics yta;
    double macro_precision{0.0};
    double macro_recall{0.0};
    double macro_f1{0.0};
    double abstention_rate{0.0};  ///< percent of predictions
    ConfusionCounts confusion;

    [[nodiscard]] const ClassMetrics &for_class(Judgment j) const { return j == Judgment::yta ? yta : nta; }
};

/// Throws std::invalid_argument on length mismatch, empty input, or an Abstain gold label.
[[nodiscard]] ConfusionCounts confusion(std::span<const Judgment> preds, std::span<const Judgment> golds);

/// Abstain is treated as a third, never-gold class: it is a false negative
/// for the gold class and a false positive for nobody. Zero denominators give 0.
/// Throws std::invalid_argument for an empty matrix.
[[nodiscard]] ClassificationReport report_from_confusion(const ConfusionCounts &counts);

[[nodiscard]] ClassificationReport classification_report(std::span<const Judgment> preds, std::span<const Judgment> golds);

}  // namespace judgebench

#endif  // JUDGEBENCH_CLASSIFICATION_HPP_
