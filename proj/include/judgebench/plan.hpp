#ifndef JUDGEBENCH_PLAN_HPP_
#define JUDGEBENCH_PLAN_HPP_

#include "judgebench/corpus.hpp"
#include "judgebench/gateway.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

enum class StageName { summ, narr, opp, verdict, vanilla };

std::string_view to_string(StageName name) noexcept;
std::optional<StageName> parse_stage_name(std::string_view text);

constexpr bool is_terminal(StageName name) noexcept { return name == StageName::verdict || name == StageName::vanilla; }

enum class PersonMode { third_person, first_person };

namespace prompts {

inline constexpr std::string_view summarize = "Quickly summarize the narrative.";
inline constexpr std::string_view narrator_actions = "Highlight the narrator's actions or decisions that are relevant to the situation.";
inline constexpr std::string_view opposing_actions =
    "Highlight the actions, decisions, or responses of other people involved that are relevant to the situation.";
inline constexpr std::string_view verdict =
    "Given these actions and contexts, make a decision. State explicitly, whether the narrator alone is at fault (YTA), "
    "everyone's at fault (YTA), the narrator is not at fault (NTA), or no one is at fault (NTA). Start with your decision, "
    "followed by a concise supporting rationale.";
inline constexpr std::string_view vanilla =
    "Given this narrative, make a decision. State explicitly, whether the narrator alone is at fault (YTA), everyone's at "
    "fault (YTA), the narrator's not at fault (NTA), or no one's at fault (NTA). Start with your decision, followed by a "
    "concise supporting rationale.";

/// Default wording for a stage.
std::string_view for_stage(StageName name) noexcept;

}  // namespace prompts

inline constexpr std::string_view anecdote_placeholder = "{anecdote}";

/// Rewrites third-person prompt wording to address the narrator as "I"/"my"
/// using a fixed, ordered replacement table.
[[nodiscard]] std::string first_person(std::string_view prompt);

struct Stage {
    StageName name{StageName::verdict};
    std::string prompt_template;
    PersonMode person_mode{PersonMode::third_person};

    friend bool operator==(const Stage &, const Stage &) = default;
};

[[nodiscard]] Stage make_stage(StageName name, PersonMode mode = PersonMode::third_person);

struct Plan {
    std::string name;
    std::vector<Stage> stages;

    friend bool operator==(const Plan &, const Plan &) = default;
};

class PlanError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Empty when the plan is valid; otherwise one message per violation.
[[nodiscard]] std::vector<std::string> validate_plan(const Plan &plan);

/// The seven plans of the ablation grid, in report order:
/// vanilla, summ+verdict, narr+verdict, opp+verdict, narr+opp+verdict,
/// summ+opp+narr+verdict, socialgaze.
[[nodiscard]] const std::vector<Plan> &plan_catalog();

/// Full deliberation plan with every stage addressing the narrator directly.
[[nodiscard]] Plan first_person_plan();

/// Looks up a catalog plan or "firstperson" by name.
[[nodiscard]] std::optional<Plan> find_plan(std::string_view name);

/// Reads a custom plan: `{"name", "stages": [...], "prompts": {stage: text}, "person_mode"}`.
/// Throws PlanError when the result is invalid.
[[nodiscard]] Plan plan_from_json(const nlohmann::json &config);
[[nodiscard]] Plan load_plan_file(const std::filesystem::path &path);

/// Messages for one stage request. With an empty history this is the first
/// stage: the anecdote is substituted for `{anecdote}` or, absent a
/// placeholder, prepended followed by a blank line. Later stages append only
/// their prompt to the full history. Throws PlanError for a placeholder in a
/// later stage.
[[nodiscard]] std::vector<ChatMessage> render_stage(const Stage &stage, const Anecdote &anecdote, std::span<const ChatMessage> history);

struct StageRecord {
    std::string stage;
    std::string prompt;
    std::string response;
    std::string started_at;
    std::string finished_at;
};

struct Transcript {
    std::string anecdote_id;
    std::string plan;
    std::string model;
    std::int64_t seed{0};
    std::vector<StageRecord> records;
    bool complete{false};
    std::optional<std::string> failure;

    /// Response of the terminal stage, if the run got that far.
    [[nodiscard]] std::optional<std::string> final_response() const;
};

[[nodiscard]] nlohmann::json to_json(const Transcript &transcript, bool include_timestamps = true);
[[nodiscard]] Transcript transcript_from_json(const nlohmann::json &record);

struct RunSettings {
    std::string model;
    double temperature{1.0};
    std::int64_t seed{0};
    std::optional<int> max_tokens;
};

/// Executes the stages in order, each request carrying the whole prior
/// conversation. A gateway failure at stage k yields an incomplete transcript
/// holding the k-1 finished records and the failure message.
[[nodiscard]] Transcript run_plan(const Plan &plan, const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings);

/// Append-only line-delimited transcript log; safe for concurrent writers.
class TranscriptStore {
  public:
    explicit TranscriptStore(std::filesystem::path path);
    void append(const Transcript &transcript);
    [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }

  private:
    std::filesystem::path path_;
    std::mutex mutex_;
};

}  // namespace judgebench

#endif  // JUDGEBENCH_PLAN_HPP_
