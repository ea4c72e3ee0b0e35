#ifndef JUDGEBENCH_CORPUS_HPP_
#define JUDGEBENCH_CORPUS_HPP_

#include "judgebench/judgment.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

/// The five labels used by the source community.
enum class RawLabel { nta, yta, esh, nah, info };

std::optional<RawLabel> parse_raw_label(std::string_view text);

/// Collapses the community's five labels onto the binary task.
/// ESH counts as YTA, NAH as NTA; INFO is excluded (`std::nullopt`).
std::optional<Judgment> map_raw_label(RawLabel raw) noexcept;

enum class Gender { male, female, unknown };

constexpr std::string_view to_string(Gender g) noexcept {
    switch (g) {
        case Gender::male: return "male";
        case Gender::female: return "female";
        case Gender::unknown: return "unknown";
    }
    return "unknown";
}

struct FeatureAnnotations {
    std::optional<std::string> relationship_type;
    std::optional<std::string> narrator_role;
    std::optional<std::string> other_party;
    Gender gender{Gender::unknown};
    std::optional<int> age;
    /// Unknown keys of the persisted `features` object, kept for round-trip.
    nlohmann::json extras = nlohmann::json::object();

    friend bool operator==(const FeatureAnnotations &, const FeatureAnnotations &) = default;
};

inline constexpr int max_plausible_age = 130;

struct Anecdote {
    std::string id;
    std::string text;
    std::optional<std::string> title;

    friend bool operator==(const Anecdote &, const Anecdote &) = default;
};

struct ConsensusRecord {
    Judgment label{Judgment::nta};
    double majority_pct{100.0};
    std::vector<std::string> reference_rationales;

    friend bool operator==(const ConsensusRecord &, const ConsensusRecord &) = default;
};

inline constexpr double min_majority_pct = 70.0;
inline constexpr std::size_t max_reference_rationales = 3;

struct CorpusEntry {
    Anecdote anecdote;
    ConsensusRecord consensus;
    std::optional<FeatureAnnotations> features;
    /// Unknown top-level fields, preserved on re-serialization.
    nlohmann::json extras = nlohmann::json::object();

    friend bool operator==(const CorpusEntry &, const CorpusEntry &) = default;
};

/// Raised for any schema or invariant violation while reading a corpus.
/// `line()` is 1-based, or 0 when the error is not tied to one line.
class CorpusError : public std::runtime_error {
  public:
    CorpusError(std::size_t line, const std::string &message);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

[[nodiscard]] CorpusEntry entry_from_json(const nlohmann::json &record);
[[nodiscard]] nlohmann::json to_json(const CorpusEntry &entry);
[[nodiscard]] nlohmann::json to_json(const FeatureAnnotations &features);
[[nodiscard]] FeatureAnnotations features_from_json(const nlohmann::json &object);

/// Reads line-delimited JSON records. Blank lines are skipped. Validates
/// every entry and rejects duplicate ids.
[[nodiscard]] std::vector<CorpusEntry> read_corpus(std::istream &in);
[[nodiscard]] std::vector<CorpusEntry> load_corpus(const std::filesystem::path &path);

void write_corpus(std::ostream &out, std::span<const CorpusEntry> entries);
void save_corpus(const std::filesystem::path &path, std::span<const CorpusEntry> entries);

/// Result of converting a raw community export into corpus entries.
struct IngestStats {
    std::size_t read{0};
    std::size_t kept{0};
    std::size_t excluded_info{0};
    std::size_t below_majority{0};
    std::size_t missing_rationales{0};
};

/// Converts raw export records (five-label `label`, any `majority_pct`)
/// into corpus entries: applies `map_raw_label`, drops records under the
/// 70% majority filter and records with no rationale, keeps at most three
/// rationales.
[[nodiscard]] std::vector<CorpusEntry> ingest_raw(std::istream &in, IngestStats &stats);

}  // namespace judgebench

#endif  // JUDGEBENCH_CORPUS_HPP_
