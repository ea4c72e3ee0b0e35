#ifndef JUDGEBENCH_REPORT_HPP_
#define JUDGEBENCH_REPORT_HPP_

#include "judgebench/analysis.hpp"
#include "judgebench/embed_client.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

inline constexpr std::string_view harness_version = "0.1.0";

/// Fixed two-decimal rendering, halves rounded away from zero.
[[nodiscard]] std::string fixed2(double value);

/// Label as printed in tables: NTA, YTA, nan.
[[nodiscard]] std::string_view table_label(Judgment j) noexcept;

struct Table {
    std::string name;   ///< file stem of the CSV
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_markdown() const;
};

[[nodiscard]] Table headline_table(std::span<const HeadlineReport> reports);

struct DistributionRow {
    std::string source;
    LabelDistribution distribution;
};
[[nodiscard]] Table label_distribution_table(std::span<const DistributionRow> rows);

[[nodiscard]] Table ablation_table(std::span<const AblationRow> rows);

/// Named after the grouping key (gender, age, length, majority, roles, relationship).
[[nodiscard]] Table grouped_table(const GroupedReport &report);

/// Male/female rows over the swap population; written as the gender table.
[[nodiscard]] Table gender_study_table(const GenderStudy &study);

[[nodiscard]] Table transition_table(const TransitionMatrix &matrix);

struct RationaleRow {
    std::string source;
    TextScores ngram;
    std::optional<EmbedScores> embedding;  ///< raw service values; scaled when rendered
};
[[nodiscard]] Table rationale_table(std::span<const RationaleRow> rows);

class ReportError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ReportMeta {
    nlohmann::json configuration = nlohmann::json::object();
    /// Written only to the run_info.json sidecar so the tables stay byte-stable.
    std::string generated_at;
};

/// Writes one CSV per table, summary.md, and run_info.json into `dir`.
/// Throws ReportError if the directory or a file cannot be written.
void write_report(const std::filesystem::path &dir, std::span<const Table> tables, const ReportMeta &meta);

/// Conventions recorded in every summary.
[[nodiscard]] const std::vector<std::string> &conventions();

}  // namespace judgebench

#endif  // JUDGEBENCH_REPORT_HPP_
