#ifndef JUDGEBENCH_TESTS_HELPERS_HPP_
#define JUDGEBENCH_TESTS_HELPERS_HPP_

#include "judgebench/corpus.hpp"
#include "judgebench/judgment.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline judgebench::CorpusEntry make_entry(std::string id, judgebench::Judgment label, std::string text = "Some story.",
                                          double majority = 80.0) {
    judgebench::CorpusEntry e;
    e.anecdote.id = std::move(id);
    e.anecdote.text = std::move(text);
    e.consensus.label = label;
    e.consensus.majority_pct = majority;
    e.consensus.reference_rationales = {"A reference rationale."};
    return e;
}

/// Removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("judgebench-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }

  private:
    std::filesystem::path path_;
};

/// Golds with exactly `nta` NTA then `yta` YTA labels.
inline std::vector<judgebench::Judgment> skewed_golds(std::size_t nta, std::size_t yta) {
    std::vector<judgebench::Judgment> golds(nta, judgebench::Judgment::nta);
    golds.insert(golds.end(), yta, judgebench::Judgment::yta);
    return golds;
}

}  // namespace testing

#endif  // JUDGEBENCH_TESTS_HELPERS_HPP_
