#include "judgebench/classification.hpp"

#include "fmt/format.h"

#include <stdexcept>

namespace judgebench {

std::size_t ConfusionCounts::total() const noexcept {
    std::size_t sum = 0;
    for (const auto &row : cells) {
        for (std::size_t c : row) {
            sum += c;
        }
    }
    return sum;
}

ConfusionCounts &ConfusionCounts::operator+=(const ConfusionCounts &other) noexcept {
    for (std::size_t g = 0; g < cells.size(); ++g) {
        for (std::size_t p = 0; p < cells[g].size(); ++p) {
            cells[g][p] += other.cells[g][p];
        }
    }
    return *this;
}

ConfusionCounts confusion(std::span<const Judgment> preds, std::span<const Judgment> golds) {
    if (preds.size() != golds.size()) {
        throw std::invalid_argument{fmt::format("{} predictions but {} gold labels", preds.size(), golds.size())};
    }
    if (golds.empty()) {
        throw std::invalid_argument{"classification report needs at least one example"};
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < golds.size(); ++i) {
        if (golds[i] == Judgment::abstain) {
            throw std::invalid_argument{fmt::format("gold label {} is Abstain", i)};
        }
        ++counts.cells[index_of(golds[i])][index_of(preds[i])];
    }
    return counts;
}

namespace {

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den); }

ClassMetrics class_metrics(const ConfusionCounts &counts, Judgment cls) {
    const Judgment other = cls == Judgment::nta ? Judgment::yta : Judgment::nta;
    ClassMetrics m;
    m.true_positives = counts.at(cls, cls);
    m.false_positives = counts.at(other, cls);
    m.false_negatives = counts.at(cls, other) + counts.at(cls, Judgment::abstain);
    m.support = m.true_positives + m.false_negatives;
    m.precision = ratio(m.true_positives, m.true_positives + m.false_positives);
    m.recall = ratio(m.true_positives, m.support);
    m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

}  // namespace

ClassificationReport report_from_confusion(const ConfusionCounts &counts) {
    const std::size_t total = counts.total();
    if (total == 0) {
        throw std::invalid_argument{"classification report needs at least one example"};
    }
    ClassificationReport r;
    r.confusion = counts;
    r.nta = class_metrics(counts, Judgment::nta);
    r.yta = class_metrics(counts, Judgment::yta);
    r.macro_precision = (r.nta.precision + r.yta.precision) / 2.0;
    r.macro_recall = (r.nta.recall + r.yta.recall) / 2.0;
    r.macro_f1 = (r.nta.f1 + r.yta.f1) / 2.0;
    r.abstention_rate = ratio(counts.at(Judgment::nta, Judgment::abstain) + counts.at(Judgment::yta, Judgment::abstain), total);
    return r;
}

ClassificationReport classification_report(std::span<const Judgment> preds, std::span<const Judgment> golds) {
    return report_from_confusion(confusion(preds, golds));
}

}  // namespace judgebench
