#ifndef JUDGEBENCH_EMBED_CLIENT_HPP_
#define JUDGEBENCH_EMBED_CLIENT_HPP_

#include "json.hpp"

#include <array>
#include <chrono>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace judgebench {

inline constexpr std::array<std::string_view, 3> embed_metrics{"bertscore", "bleurt", "bartscore"};

/// Raw values as returned by the scorer service.
struct EmbedScores {
    struct BertScore {
        double precision{0.0};
        double recall{0.0};
        double f1{0.0};
    };
    std::optional<BertScore> bertscore;
    std::optional<double> bleurt;
    std::optional<double> bartscore;
};

/// Presentation scale: BERTScore and BLEURT x100, BARTScore x10.
[[nodiscard]] EmbedScores scaled_for_report(const EmbedScores &raw);

[[nodiscard]] nlohmann::json score_request_body(std::string_view candidate, std::span<const std::string> references,
                                                std::span<const std::string> metrics);
/// Throws EmbedError when a requested metric is missing or malformed.
[[nodiscard]] EmbedScores parse_score_response(const nlohmann::json &body, std::span<const std::string> metrics);

class EmbedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScorerHealth {
    bool ready{false};
    std::vector<std::string> metrics;
    std::optional<std::string> version;
};

/// Client for the embedding scorer: POST /score, GET /healthz.
class EmbedClient {
  public:
    explicit EmbedClient(std::string base_url, std::chrono::seconds timeout = std::chrono::seconds{120});

    /// Unreachable services report not ready rather than throwing.
    [[nodiscard]] ScorerHealth health() const;

    /// Throws EmbedError on transport failure, a non-2xx reply, or a malformed body.
    [[nodiscard]] EmbedScores score(std::string_view candidate, std::span<const std::string> references,
                                    std::span<const std::string> metrics) const;

    [[nodiscard]] const std::string &base_url() const noexcept { return base_url_; }

  private:
    std::string base_url_;
    std::chrono::seconds timeout_;
};

}  // namespace judgebench

#endif  // JUDGEBENCH_EMBED_CLIENT_HPP_
