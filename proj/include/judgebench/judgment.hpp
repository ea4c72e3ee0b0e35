#ifndef JUDGEBENCH_JUDGMENT_HPP_
#define JUDGEBENCH_JUDGMENT_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace judgebench {

/// Social-acceptability verdict. Gold labels are only ever `nta` or `yta`;
/// `abstain` marks a prediction from which no label could be extracted.
enum class Judgment { nta, yta, abstain };

inline constexpr std::array<Judgment, 3> all_judgments{Judgment::nta, Judgment::yta, Judgment::abstain};

constexpr std::string_view to_string(Judgment j) noexcept {
    switch (j) {
        case Judgment::nta: return "NTA";
        case Judgment::yta: return "YTA";
        case Judgment::abstain: return "Abstain";
    }
    return "Abstain";
}

/// Accepts "NTA", "YTA", "Abstain" (and "nan" as an alias for Abstain).
std::optional<Judgment> parse_judgment(std::string_view text);

constexpr std::size_t index_of(Judgment j) noexcept { return static_cast<std::size_t>(j); }

}  // namespace judgebench

#endif  // JUDGEBENCH_JUDGMENT_HPP_
