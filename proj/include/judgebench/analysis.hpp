#ifndef JUDGEBENCH_ANALYSIS_HPP_
#define JUDGEBENCH_ANALYSIS_HPP_

#include "judgebench/classification.hpp"
#include "judgebench/corpus.hpp"
#include "judgebench/gateway.hpp"
#include "judgebench/plan.hpp"
#include "judgebench/stats.hpp"
#include "judgebench/text_metrics.hpp"
#include "judgebench/verdict.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

inline const std::vector<std::int64_t> default_seeds{1, 2, 3, 4, 5};

struct RunConfig {
    std::string plan{"socialgaze"};
    std::string model;
    std::vector<std::int64_t> seeds = default_seeds;
    double temperature{1.0};
    std::optional<int> max_tokens;
    std::filesystem::path corpus;
    std::filesystem::path output_dir{"out"};
    /// Concurrent (anecdote, seed) executions.
    int workers{4};
};

/// Throws std::invalid_argument for empty or repeated seeds, an empty model,
/// or fewer than one worker.
void validate_run_config(const RunConfig &config);

struct ResultRecord {
    std::string id;
    std::int64_t seed{0};
    Judgment judgment{Judgment::abstain};
    std::string rationale;
    std::optional<std::string> matched_evidence;
    /// Transcript location, relative to the seed directory.
    std::string transcript;
    bool complete{false};
    std::optional<std::string> error;

    friend bool operator==(const ResultRecord &, const ResultRecord &) = default;
};

[[nodiscard]] nlohmann::json to_json(const ResultRecord &record);
[[nodiscard]] ResultRecord result_from_json(const nlohmann::json &record);

/// Verdicts of one plan/model over a corpus, one vector per seed in corpus
/// order. An incomplete record counts as an abstention in every metric.
struct RunResult {
    std::string plan;
    std::string model;
    std::vector<std::int64_t> seeds;
    std::map<std::int64_t, std::vector<ResultRecord>> by_seed;
    /// Pairs executed by the call that produced this result (0 when loaded).
    std::size_t executed{0};

    [[nodiscard]] const std::vector<ResultRecord> &records(std::int64_t seed) const;
    [[nodiscard]] std::vector<Judgment> predictions(std::int64_t seed) const;
    [[nodiscard]] std::size_t incomplete() const;
};

/// `runs/<plan>/<model>/seed-<k>`; '/' and other path-hostile characters in
/// the model name become '_'.
[[nodiscard]] std::filesystem::path seed_directory(const std::filesystem::path &output_dir, std::string_view plan, std::string_view model,
                                                   std::int64_t seed);
[[nodiscard]] std::string path_safe(std::string_view name);

/// Executes `plan` over every (entry, seed) pair that lacks a complete
/// persisted record, appending results and transcripts, and returns the
/// latest record per pair in corpus order. Per-anecdote failures are recorded
/// and do not stop the run.
[[nodiscard]] RunResult run_experiment(const RunConfig &config, const Plan &plan, std::span<const CorpusEntry> entries, Gateway &gateway);

/// Reads persisted results for `entries`. Throws std::runtime_error if a seed
/// directory is missing or lacks a record for some entry.
[[nodiscard]] RunResult load_run(const std::filesystem::path &output_dir, std::string_view plan, std::string_view model,
                                 std::span<const std::int64_t> seeds, std::span<const CorpusEntry> entries);

/// Seeds with a results file under runs/<plan>/<model>/, ascending.
[[nodiscard]] std::vector<std::int64_t> discover_seeds(const std::filesystem::path &output_dir, std::string_view plan, std::string_view model);

[[nodiscard]] std::vector<Judgment> gold_labels(std::span<const CorpusEntry> entries);

struct HeadlineReport {
    std::string plan;
    std::string model;
    std::vector<std::int64_t> seeds;
    std::vector<ClassificationReport> per_seed;
    SeedAggregate precision;
    SeedAggregate recall;
    SeedAggregate macro_f1;
    SeedAggregate abstention;
    std::optional<std::string> baseline_plan;
    std::optional<SignificanceResult> vs_baseline;
};

/// Per-seed reports aggregated over seeds; with a baseline, a Welch t-test
/// of this run's per-seed macro-F1 against the baseline's. Throws
/// std::invalid_argument for fewer than two seeds or a seed-count mismatch.
[[nodiscard]] HeadlineReport headline_report(const RunResult &run, std::span<const Judgment> golds, const RunResult *baseline = nullptr);

/// Seed whose macro-F1 is the median (lower median for an even count; ties by seed).
[[nodiscard]] std::int64_t median_seed(const RunResult &run, std::span<const Judgment> golds);

enum class GroupingKey { gender, age_bin, length_quartile, majority_bucket, narrator_role, relationship_type };

std::string_view to_string(GroupingKey key) noexcept;
/// Accepts the CLI spellings: gender, age, length, majority, roles, relationship.
std::optional<GroupingKey> parse_grouping_key(std::string_view text);

struct Group {
    std::string label;
    std::size_t size{0};
    std::optional<ClassificationReport> report;       ///< absent for an empty group
    std::optional<LabelDistribution> predicted;       ///< absent for an empty group
    std::optional<LabelDistribution> consensus;       ///< absent for an empty group
};

struct GroupedReport {
    GroupingKey key{GroupingKey::gender};
    std::vector<Group> groups;
    std::size_t population{0};  ///< entries assigned to some group
    std::size_t excluded{0};    ///< entries lacking the feature
};

/// Partitions predictions post hoc by a corpus feature. Fixed-bin keys emit
/// every bin in ascending order, empty ones included; gender emits male then
/// female and excludes unknown; roles and relationships are ordered by
/// descending size, then name.
[[nodiscard]] GroupedReport grouped_report(std::span<const Judgment> preds, std::span<const CorpusEntry> entries, GroupingKey key);

/// Original-run label (row) x swapped-run label (column) counts.
struct TransitionMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};

    [[nodiscard]] std::size_t at(Judgment from, Judgment to) const { return counts[index_of(from)][index_of(to)]; }
    [[nodiscard]] std::size_t row_total(Judgment from) const;
    [[nodiscard]] std::size_t column_total(Judgment to) const;
    /// Share of `from` predictions that became `to`, in percent; 0 for an empty row.
    [[nodiscard]] double percent(Judgment from, Judgment to) const;
};

class IdMismatchError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Pairs records by id, mapping `#swapped` ids back to their originals.
/// Throws IdMismatchError naming ids present on only one side.
[[nodiscard]] TransitionMatrix transition_matrix(std::span<const ResultRecord> original, std::span<const ResultRecord> swapped);

/// Male/female comparison over the swap population: each anecdote appears
/// once with a male narrator and once with a female narrator.
struct GenderStudy {
    std::size_t population{0};
    Group male;
    Group female;
    LabelDistribution consensus;
    TransitionMatrix transitions;
};

/// `original_entries` and `swapped_entries` align with their prediction
/// vectors. Only originals with a known gender and a swapped counterpart
/// take part.
[[nodiscard]] GenderStudy gender_study(std::span<const CorpusEntry> original_entries, std::span<const ResultRecord> original_records,
                                       std::span<const CorpusEntry> swapped_entries, std::span<const ResultRecord> swapped_records);

struct AblationRow {
    std::string plan;
    SeedAggregate macro_f1;
};

/// Runs every plan over the same corpus and seeds; one row per plan in input order.
[[nodiscard]] std::vector<AblationRow> ablation_grid(std::span<const Plan> plans, const RunConfig &config, std::span<const CorpusEntry> entries,
                                                     Gateway &gateway);

/// Mean n-gram scores of completed rationales against each entry's references.
[[nodiscard]] TextScores rationale_scores(std::span<const ResultRecord> records, std::span<const CorpusEntry> entries);

}  // namespace judgebench

#endif  // JUDGEBENCH_ANALYSIS_HPP_
