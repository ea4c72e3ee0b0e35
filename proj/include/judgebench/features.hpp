#ifndef JUDGEBENCH_FEATURES_HPP_
#define JUDGEBENCH_FEATURES_HPP_

#include "judgebench/corpus.hpp"
#include "judgebench/gateway.hpp"
#include "judgebench/plan.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

namespace prompts {

inline constexpr std::string_view demographics =
    "Given this narrative, Extract the relationship between the narrator and the opposing entity and the following "
    "demographic information. Here's an example:\n"
    "Type: Parent-Child\n"
    "Narrator: Child\n"
    "Other Party: Parents\n"
    "Gender: Unsure\n"
    "Age: 18";

inline constexpr std::string_view story_placeholder = "[STORY]";

inline constexpr std::string_view gender_swap =
    "Given a post detailing a situation or story, follow these steps:\n"
    "1. Determine if the story presents a conflict within a heterosexual relationship, such as between a girlfriend and "
    "boyfriend, wife and husband, etc.\n"
    "2. Do the following:\n"
    "a. Identify the narrator and their partner within the story.\n"
    "b. Swap the genders of the narrator and their partner while ensuring the rest of the story remains as consistent as "
    "possible.\n"
    "c. Output the result as:\n"
    "\"\n"
    "New Story: [The modified story here with swapped genders]\n"
    "OR\n"
    "Not a heterosexual story\n"
    "\"\n"
    "Consider the following example story:\n"
    "\"[STORY]\"\n"
    "Perform the described steps on this story and provide the appropriate output.";

}  // namespace prompts

inline constexpr std::string_view swapped_suffix = "#swapped";
inline constexpr std::string_view swap_marker = "New Story:";
inline constexpr std::string_view not_applicable_marker = "Not a heterosexual story";

/// Parses a "Key: value" reply. Keys (Type, Narrator, Other Party, Gender,
/// Age) match case-insensitively in any order. Gender containing "female" is
/// female, otherwise containing "male" is male, otherwise unknown. Age is the
/// first integer on its line, dropped when outside [0, 130]. Never throws.
[[nodiscard]] FeatureAnnotations parse_feature_block(std::string_view text);

/// Sends the demographics prompt for one anecdote and parses the reply.
/// Gateway errors propagate.
[[nodiscard]] FeatureAnnotations extract_features(const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings);

struct GenderSwapResult {
    enum class Outcome { swapped, not_applicable };

    Outcome outcome{Outcome::not_applicable};
    std::string text;  ///< the swapped story; empty unless `swapped`
    std::string source_id;
    /// Set when the reply carried neither marker.
    std::optional<std::string> warning;
};

[[nodiscard]] GenderSwapResult parse_swap_reply(std::string_view reply, std::string source_id);

[[nodiscard]] GenderSwapResult gender_swap(const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings);

[[nodiscard]] std::string swapped_id(std::string_view id);
/// Strips a trailing `#swapped`; other ids are returned unchanged.
[[nodiscard]] std::string original_id(std::string_view id);

/// Entries whose extracted narrator gender is male or female.
[[nodiscard]] std::vector<CorpusEntry> swap_candidates(std::span<const CorpusEntry> entries);

/// Counterfactual entry: `#swapped` id, swapped text, flipped gender, and the
/// original consensus (label, majority, rationales) unchanged.
[[nodiscard]] CorpusEntry make_swapped_entry(const CorpusEntry &original, const GenderSwapResult &swap);

}  // namespace judgebench

#endif  // JUDGEBENCH_FEATURES_HPP_
