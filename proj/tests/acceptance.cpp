// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// Usage: acceptance <judgebench-cli> <test-data-dir> <work-dir>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "judgebench/analysis.hpp"
#include "judgebench/classification.hpp"
#include "judgebench/plan.hpp"
#include "judgebench/scripted_provider.hpp"
#include "judgebench/stats.hpp"
#include "judgebench/text_metrics.hpp"
#include "judgebench/verdict.hpp"

#include "fmt/format.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace judgebench;
namespace fs = std::filesystem;

namespace {

constexpr auto N = Judgment::nta;
constexpr auto Y = Judgment::yta;

struct Outcome {
    bool pass{true};
    std::string detail;
};

/// Accumulates failure messages; the first few become the detail line.
class Checker {
  public:
    void expect(bool ok, const std::string &what) {
        if (!ok) {
            ++failures_;
            if (failures_ <= 3) {
                detail_ += (detail_.empty() ? "" : "; ") + what;
            }
        }
    }
    [[nodiscard]] Outcome outcome(std::string summary) const {
        if (failures_ == 0) {
            return {true, std::move(summary)};
        }
        return {false, fmt::format("{} failure(s): {}", failures_, detail_)};
    }

  private:
    int failures_{0};
    std::string detail_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<Judgment> published_split() {
    std::vector<Judgment> golds(8406, N);
    golds.insert(golds.end(), 1594, Y);
    return golds;
}

Outcome majority_baseline() {
    const auto start = std::chrono::steady_clock::now();
    const auto golds = published_split();
    const std::vector<Judgment> preds(golds.size(), N);
    const ClassificationReport r = classification_report(preds, golds);
    const double elapsed = seconds_since(start);
    Checker c;
    c.expect(std::abs(r.macro_precision - 42.03) <= 0.01, fmt::format("precision {:.4f}", r.macro_precision));
    c.expect(std::abs(r.macro_recall - 50.00) <= 0.01, fmt::format("recall {:.4f}", r.macro_recall));
    c.expect(std::abs(r.macro_f1 - 45.67) <= 0.01, fmt::format("F1 {:.4f}", r.macro_f1));
    c.expect(elapsed < 1.0, fmt::format("took {:.3f} s", elapsed));
    return c.outcome(fmt::format("P {:.2f} R {:.2f} F1 {:.2f} in {:.3f} s", r.macro_precision, r.macro_recall, r.macro_f1, elapsed));
}

Outcome random_baseline() {
    const auto start = std::chrono::steady_clock::now();
    const auto golds = published_split();
    std::vector<double> f1;
    for (std::uint32_t seed = 1; seed <= 5; ++seed) {
        std::mt19937 rng{seed};
        std::bernoulli_distribution coin{0.5};
        std::vector<Judgment> preds(golds.size());
        for (auto &p : preds) {
            p = coin(rng) ? Y : N;
        }
        f1.push_back(classification_report(preds, golds).macro_f1);
    }
    const SeedAggregate agg = aggregate_seeds(f1);
    const double elapsed = seconds_since(start);
    Checker c;
    c.expect(agg.mean >= 42.0 && agg.mean <= 45.5, fmt::format("mean F1 {:.2f}", agg.mean));
    c.expect(elapsed < 5.0, fmt::format("took {:.3f} s", elapsed));
    return c.outcome(fmt::format("mean F1 {:.2f} ({:.2f}) over 5 seeds in {:.3f} s", agg.mean, agg.stddev, elapsed));
}

Outcome verdict_fixtures() {
    Checker c;
    for (const auto *set : {&testing::published_verdicts, &testing::synthetic_verdicts}) {
        for (const auto &f : *set) {
            const Judgment got = parse_verdict(f.text).judgment;
            c.expect(got == f.expected, fmt::format("'{}' -> {}", std::string{f.text}.substr(0, 40), to_string(got)));
        }
    }
    c.expect(testing::published_verdicts.size() >= 6, "fewer than 6 published cases");
    c.expect(testing::synthetic_verdicts.size() >= 30, "fewer than 30 synthetic cases");
    return c.outcome(fmt::format("{} published and {} synthetic cases agree", testing::published_verdicts.size(),
                                 testing::synthetic_verdicts.size()));
}

Outcome metric_oracle() {
    namespace oracle = testing::oracle;
    Checker c;
    std::mt19937 rng{20240611};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const oracle::Tokens cand = oracle::random_tokens(rng);
        std::vector<oracle::Tokens> refs{oracle::random_tokens(rng)};
        if (trial % 2 == 0) {
            refs.push_back(oracle::random_tokens(rng));
        }
        const std::vector<std::pair<double, double>> pairs{
            {text::rouge_n(cand, refs, 1), oracle::rouge_n(cand, refs, 1)},
            {text::rouge_n(cand, refs, 2), oracle::rouge_n(cand, refs, 2)},
            {text::rouge_l(cand, refs), oracle::rouge_l(cand, refs)},
            {text::bleu(cand, refs, 1), oracle::bleu(cand, refs, 1)},
            {text::bleu(cand, refs, 2), oracle::bleu(cand, refs, 2)},
            {text::bleu(cand, refs, 3), oracle::bleu(cand, refs, 3)},
        };
        for (const auto &[got, want] : pairs) {
            worst = std::max(worst, std::abs(got - want));
            c.expect(std::abs(got - want) <= 1e-9, fmt::format("trial {}: {} vs {}", trial, got, want));
        }
    }
    const std::vector<std::string> cat_ref{"the cat ran"};
    const std::vector<std::string> disjoint_ref{"d e f"};
    const std::vector<std::string> identity_ref{"one two three four five six seven eight nine ten"};
    const double cat = meteor("the cat sat", cat_ref);
    const double none = meteor("a b c", disjoint_ref);
    const double identity = meteor(identity_ref[0], identity_ref);
    c.expect(std::abs(cat - 200.0 / 3.0 * (1.0 - 0.5 * 0.125)) <= 1e-6, fmt::format("METEOR cat example {}", cat));
    c.expect(std::abs(none) <= 1e-6, fmt::format("METEOR disjoint {}", none));
    c.expect(std::abs(identity - oracle::meteor_identity(10)) <= 1e-6, fmt::format("METEOR identity {}", identity));
    return c.outcome(fmt::format("100 random cases, max deviation {:.1e}; METEOR closed forms {:.4f}, {:.4f}, {:.4f}", worst, cat, none,
                                 identity));
}

/// Counts requests per stage while delegating to a scripted provider.
class CountingProvider : public Provider {
  public:
    CompletionResponse send(const CompletionRequest &request) override {
        message_counts.push_back(request.messages.size());
        return {"NTA. The narrator acted reasonably.", nlohmann::json::object()};
    }
    std::vector<std::size_t> message_counts;
};

std::string shell_quote(const std::string &s) {
    std::string out = "'";
    for (const char ch : s) {
        out += ch == '\'' ? std::string{"'\\''"} : std::string(1, ch);
    }
    return out + "'";
}

int run_cli(const std::string &cli, const std::string &args, const fs::path &log) {
    const std::string command = shell_quote(cli) + " " + args + " >>" + shell_quote(log.string()) + " 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t csv_rows(const fs::path &path) {
    std::ifstream in{path};
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lines;
    }
    return lines == 0 ? 0 : lines - 1;
}

Outcome pipeline_structure(const std::string &cli, const fs::path &data, const fs::path &work) {
    Checker c;
    auto provider = std::make_shared<CountingProvider>();
    GatewayOptions options;
    options.memory_cache = false;
    Gateway gateway{provider, options};
    const Plan plan = *find_plan("socialgaze");
    const Transcript t = run_plan(plan, Anecdote{"p1", "A story.", std::nullopt}, gateway, RunSettings{"m", 1.0, 1, std::nullopt});
    c.expect(t.complete && t.records.size() == 4, fmt::format("{} stage records", t.records.size()));
    c.expect(provider->message_counts == std::vector<std::size_t>{1, 3, 5, 7}, "message counts differ from 1/3/5/7");

    const std::vector<std::string> expected{"vanilla",          "summ-verdict",          "narr-verdict", "opp-verdict",
                                            "narr-opp-verdict", "summ-opp-narr-verdict", "socialgaze"};
    std::vector<std::string> names;
    for (const Plan &p : plan_catalog()) {
        names.push_back(p.name);
    }
    c.expect(names == expected, "catalog differs from the seven ablation plans");

    const fs::path dir = work / "ablate";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string args = fmt::format("ablate --provider scripted --script {} --model toy --seeds 1,2 --corpus {} --out {}",
                                         shell_quote((data / "toy_script.json").string()),
                                         shell_quote((data / "toy_corpus.jsonl").string()), shell_quote((dir / "out").string()));
    const int code = run_cli(cli, args, dir / "log.txt");
    c.expect(code == 0, fmt::format("ablate exited {}", code));
    const std::size_t rows = csv_rows(dir / "out" / "reports" / "ablations.csv");
    c.expect(rows == 7, fmt::format("ablate wrote {} rows", rows));
    return c.outcome(fmt::format("message counts 1/3/5/7, {} catalog plans, ablate wrote {} rows", names.size(), rows));
}

Outcome statistics() {
    Checker c;
    double worst_t = 0.0, worst_p = 0.0;
    for (const auto &w : testing::welch_cases) {
        const SignificanceResult r = welch_t_test(w.a, w.b);
        const double dt = std::abs(r.t - w.t) / std::max(1.0, std::abs(w.t));
        const double dp = std::abs(r.p - w.p);
        worst_t = std::max(worst_t, dt);
        worst_p = std::max(worst_p, dp);
        c.expect(dt <= 1e-6 && dp <= 1e-6, fmt::format("t {} p {} vs {} {}", r.t, r.p, w.t, w.p));
    }
    const SeedAggregate a = aggregate_seeds(std::vector<double>{1, 2, 3});
    const SeedAggregate b = aggregate_seeds(std::vector<double>{5, 5, 5, 5, 5});
    c.expect(a.mean == 2.0 && a.stddev == 1.0, "[1,2,3] aggregate");
    c.expect(b.mean == 5.0 && b.stddev == 0.0, "constant aggregate");
    return c.outcome(fmt::format("{} Welch pairs, max deviation t {:.1e} p {:.1e}; textbook aggregates exact", testing::welch_cases.size(),
                                 worst_t, worst_p));
}

std::map<std::string, std::string> report_tables(const fs::path &dir) {
    std::map<std::string, std::string> out;
    for (const auto &entry : fs::directory_iterator{dir}) {
        if (entry.path().filename() == "run_info.json") {
            continue;
        }
        std::ifstream in{entry.path(), std::ios::binary};
        std::ostringstream ss;
        ss << in.rdbuf();
        out[entry.path().filename().string()] = ss.str();
    }
    return out;
}

Outcome end_to_end(const std::string &cli, const fs::path &data, const fs::path &work) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::map<std::string, std::string>> outputs;
    for (int pass = 0; pass < 2; ++pass) {
        const fs::path dir = work / fmt::format("e2e-{}", pass);
        fs::remove_all(dir);
        fs::create_directories(dir);
        const fs::path log = dir / "log.txt";
        const std::string common =
            fmt::format("--provider scripted --script {} --model toy --seeds 1,2 --corpus {} --out {}",
                        shell_quote((data / "toy_script.json").string()), shell_quote((data / "toy_corpus.jsonl").string()),
                        shell_quote((dir / "out").string()));
        const std::string swapped = shell_quote((data / "toy_swapped.jsonl").string());
        std::vector<std::string> steps{
            "run " + common,
            "run " + common + " --plan vanilla",
            "run " + common + " --corpus " + swapped,
        };
        for (const char *key : {"gender", "age", "length", "majority", "roles", "relationship"}) {
            steps.push_back(fmt::format("analyze --by {} {} --swapped-corpus {}", key, common, swapped));
        }
        steps.push_back("report " + common + " --swapped-corpus " + swapped);
        for (const std::string &step : steps) {
            const int code = run_cli(cli, step, log);
            c.expect(code == 0, fmt::format("pass {} '{}' exited {}", pass, step.substr(0, step.find(' ')), code));
        }
        outputs.push_back(report_tables(dir / "out" / "reports"));
    }
    const double elapsed = seconds_since(start);
    c.expect(!outputs[0].empty(), "no report tables written");
    c.expect(outputs[0].contains("summary.md") && outputs[0].contains("headline.csv"), "summary or headline missing");
    c.expect(outputs[0] == outputs[1], "report tables differ between executions");
    c.expect(elapsed < 30.0, fmt::format("took {:.2f} s", elapsed));
    return c.outcome(fmt::format("{} report files byte-identical across two executions in {:.2f} s", outputs[0].size(), elapsed));
}

std::vector<CorpusEntry> split_corpus(std::size_t nta, std::size_t yta) {
    std::vector<CorpusEntry> out;
    for (std::size_t i = 0; i < nta + yta; ++i) {
        CorpusEntry e;
        const bool is_yta = i >= nta;
        e.anecdote.id = fmt::format("s{:05}", i);
        e.anecdote.text = fmt::format("Story {} ({}).", i, is_yta ? "marker-yta" : "marker-nta");
        e.consensus.label = is_yta ? Y : N;
        e.consensus.majority_pct = 90.0;
        e.consensus.reference_rationales = {"A reason."};
        out.push_back(std::move(e));
    }
    return out;
}

Outcome scripted_substitutes(const fs::path &work) {
    Checker c;
    // 4203/797 is the published 84.06/15.94 split
    const auto entries = split_corpus(4203, 797);
    const auto golds = gold_labels(entries);
    RunConfig config;
    config.plan = "vanilla";
    config.seeds = {1, 2};
    config.workers = 8;
    const Plan plan = *find_plan("vanilla");

    auto always = std::make_shared<ScriptedProvider>();
    always->set_strict(false);
    always->set_default_response("NTA. The narrator is fine.");
    Gateway g1{always};
    config.model = "always-nta";
    config.output_dir = work / "substitutes";
    fs::remove_all(config.output_dir);
    const HeadlineReport majority = headline_report(run_experiment(config, plan, entries, g1), golds);
    c.expect(std::abs(majority.precision.mean - 42.03) <= 0.01, fmt::format("always-NTA precision {:.4f}", majority.precision.mean));
    c.expect(std::abs(majority.recall.mean - 50.00) <= 0.01, fmt::format("always-NTA recall {:.4f}", majority.recall.mean));
    c.expect(std::abs(majority.macro_f1.mean - 45.67) <= 0.01, fmt::format("always-NTA F1 {:.4f}", majority.macro_f1.mean));

    auto perfect = std::make_shared<ScriptedProvider>();
    perfect->set_strict(false);
    perfect->register_script("marker-yta", "YTA. The narrator was wrong.", std::nullopt, MatchScope::conversation);
    perfect->set_default_response("NTA. The narrator is fine.");
    Gateway g2{perfect};
    config.model = "perfect";
    const HeadlineReport oracle = headline_report(run_experiment(config, plan, entries, g2), golds);
    c.expect(oracle.macro_f1.mean == 100.0, fmt::format("perfect oracle F1 {:.4f}", oracle.macro_f1.mean));
    return c.outcome(fmt::format("always-NTA P {:.2f} R {:.2f} F1 {:.2f}; perfect oracle F1 {:.2f}", majority.precision.mean,
                                 majority.recall.mean, majority.macro_f1.mean, oracle.macro_f1.mean));
}

Outcome gender_swap_accounting() {
    Checker c;
    // hand counts: NTA->NTA 3, NTA->YTA 2, NTA->nan 1, YTA->NTA 1, YTA->YTA 2, nan->YTA 1
    const std::vector<std::pair<Judgment, Judgment>> pairs{{N, N}, {N, N}, {N, N}, {N, Y}, {N, Y}, {N, Judgment::abstain},
                                                           {Y, N}, {Y, Y}, {Y, Y}, {Judgment::abstain, Y}};
    std::vector<ResultRecord> original, swapped;
    std::vector<Judgment> orig_labels, swap_labels;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ResultRecord o;
        o.id = fmt::format("g{}", i);
        o.judgment = pairs[i].first;
        o.complete = true;
        ResultRecord s = o;
        s.id += "#swapped";
        s.judgment = pairs[i].second;
        original.push_back(o);
        swapped.push_back(s);
        orig_labels.push_back(o.judgment);
        swap_labels.push_back(s.judgment);
    }
    // swapped side in reverse order: pairing must go by id
    std::reverse(swapped.begin(), swapped.end());
    const TransitionMatrix m = transition_matrix(original, swapped);
    const std::array<std::array<std::size_t, 3>, 3> hand{{{3, 2, 1}, {1, 2, 0}, {0, 1, 0}}};
    c.expect(m.counts == hand, "matrix differs from hand counts");
    const LabelDistribution od = label_distribution(orig_labels);
    const LabelDistribution sd = label_distribution(swap_labels);
    for (const Judgment j : all_judgments) {
        c.expect(m.row_total(j) == od.counts[index_of(j)], fmt::format("row total {}", to_string(j)));
        c.expect(m.column_total(j) == sd.counts[index_of(j)], fmt::format("column total {}", to_string(j)));
    }
    bool mismatch_caught = false;
    try {
        (void)transition_matrix(original, std::span<const ResultRecord>{swapped}.subspan(1));
    } catch (const IdMismatchError &) {
        mismatch_caught = true;
    }
    c.expect(mismatch_caught, "id mismatch not reported");
    return c.outcome("10 pairs match hand counts; marginals reconcile with both label distributions");
}

}  // namespace

int main(int argc, char **argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance <judgebench-cli> <test-data-dir> <work-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path data = argv[2];
    const fs::path work = argv[3];
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"majority-baseline", majority_baseline},
        {"random-baseline", random_baseline},
        {"verdict-fixtures", verdict_fixtures},
        {"metric-oracle", metric_oracle},
        {"pipeline-structure", [&] { return pipeline_structure(cli, data, work); }},
        {"statistics", statistics},
        {"end-to-end-determinism", [&] { return end_to_end(cli, data, work); }},
        {"scripted-substitutes", [&] { return scripted_substitutes(work); }},
        {"gender-swap-accounting", gender_swap_accounting},
    };

    int failed = 0;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
