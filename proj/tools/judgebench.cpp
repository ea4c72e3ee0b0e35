// judgebench: command-line front end for judgment-alignment experiments.

#include "judgebench/analysis.hpp"
#include "judgebench/corpus.hpp"
#include "judgebench/embed_client.hpp"
#include "judgebench/features.hpp"
#include "judgebench/gateway.hpp"
#include "judgebench/http_provider.hpp"
#include "judgebench/plan.hpp"
#include "judgebench/report.hpp"
#include "judgebench/scripted_provider.hpp"

#include "CLI11.hpp"
#include "fmt/format.h"
#include "fmt/ranges.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace judgebench;

namespace {

enum ExitCode : int { ok = 0, usage = 1, failure = 2, partial = 3 };

struct Settings {
    // provider
    std::string provider{"http"};
    std::string script;
    std::string base_url{"http://127.0.0.1:8000"};
    std::string credential_env{std::string{default_credential_env}};
    std::string cache_dir;
    int max_in_flight{4};
    int max_retries{2};
    double rpm{0.0};
    // experiment
    std::string model;
    std::vector<std::int64_t> seeds = default_seeds;
    double temperature{1.0};
    int max_tokens{0};
    std::string corpus;
    std::string out{"out"};
    std::string plan{"socialgaze"};
    std::string plan_file;
    bool dry_run{false};
    std::string config_file;
};

struct CommandArgs {
    std::string input;
    std::string output;
    std::string by;
    std::string swapped_corpus;
    std::string baseline{"vanilla"};
    std::string candidate{"socialgaze"};
    std::string embeddings_url;
};

void print_header(std::string_view command, const Settings &s) {
    std::cerr << fmt::format("judgebench {} | {}\n", harness_version, command);
    std::cerr << "  precedence: flags > config file > environment > defaults\n";
    std::cerr << fmt::format("  config file: {}\n", s.config_file.empty() ? "(none)" : s.config_file);
    std::cerr << fmt::format("  plan: {}{}\n", s.plan, s.plan_file.empty() ? "" : fmt::format(" (from {})", s.plan_file));
    std::cerr << fmt::format("  model: {} | seeds: {} | temperature: {} | max tokens: {}\n", s.model.empty() ? "(unset)" : s.model,
                             fmt::join(s.seeds, ","), s.temperature, s.max_tokens > 0 ? std::to_string(s.max_tokens) : "(provider default)");
    std::cerr << fmt::format("  corpus: {} | out: {}\n", s.corpus.empty() ? "(unset)" : s.corpus, s.out);
    std::cerr << fmt::format("  provider: {}{} | credential env: {}\n", s.provider,
                             s.provider == "scripted" ? fmt::format(" ({})", s.script) : fmt::format(" ({})", s.base_url), s.credential_env);
    std::cerr << fmt::format("  cache dir: {} | max in flight: {} | max retries: {} | rpm: {}\n",
                             s.cache_dir.empty() ? "(memory only)" : s.cache_dir, s.max_in_flight, s.max_retries, s.rpm);
    if (s.dry_run) {
        std::cerr << "  dry run: validation only, nothing is written or sent\n";
    }
}

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

void require(bool condition, std::string_view message) {
    if (!condition) {
        throw UsageError{std::string{message}};
    }
}

std::shared_ptr<Provider> make_provider(const Settings &s) {
    if (s.provider == "scripted") {
        require(!s.script.empty(), "--provider scripted needs --script");
        return ScriptedProvider::from_file(s.script);
    }
    ProviderConfig config;
    config.base_url = s.base_url;
    config.credential_env = s.credential_env;
    return std::make_shared<HttpProvider>(config);
}

std::unique_ptr<Gateway> make_gateway(const Settings &s) {
    GatewayOptions options;
    options.max_in_flight = s.max_in_flight;
    options.max_retries = s.max_retries;
    options.requests_per_minute = s.rpm;
    if (!s.cache_dir.empty()) {
        options.cache_dir = s.cache_dir;
    }
    return std::make_unique<Gateway>(make_provider(s), options);
}

void validate_settings(const Settings &s) {
    require(s.provider == "http" || s.provider == "scripted", "--provider must be http or scripted");
    if (s.provider == "scripted") {
        require(!s.script.empty(), "--provider scripted needs --script");
        require(fs::exists(s.script), fmt::format("script '{}' does not exist", s.script));
    }
    require(s.max_in_flight >= 1, "--max-in-flight must be at least 1");
    require(s.max_retries >= 0, "--max-retries must not be negative");
    require(s.rpm >= 0.0, "--rpm must not be negative");
    require(s.temperature >= 0.0, "--temperature must not be negative");
    require(s.max_tokens >= 0, "--max-tokens must not be negative");
}

Plan resolve_plan(const Settings &s) {
    if (!s.plan_file.empty()) {
        return load_plan_file(s.plan_file);
    }
    const auto plan = find_plan(s.plan);
    require(plan.has_value(), fmt::format("unknown plan '{}'", s.plan));
    return *plan;
}

RunConfig run_config(const Settings &s, const std::string &plan) {
    RunConfig c;
    c.plan = plan;
    c.model = s.model;
    c.seeds = s.seeds;
    c.temperature = s.temperature;
    if (s.max_tokens > 0) {
        c.max_tokens = s.max_tokens;
    }
    c.corpus = s.corpus;
    c.output_dir = s.out;
    c.workers = s.max_in_flight;
    return c;
}

std::vector<CorpusEntry> require_corpus(const std::string &path, std::string_view flag = "--corpus") {
    require(!path.empty(), fmt::format("{} is required", flag));
    return load_corpus(path);
}

nlohmann::json config_json(const Settings &s) {
    return {{"model", s.model},     {"seeds", s.seeds}, {"temperature", s.temperature},
            {"max_tokens", s.max_tokens > 0 ? nlohmann::json(s.max_tokens) : nlohmann::json(nullptr)},
            {"plan", s.plan},       {"corpus", fs::path{s.corpus}.filename().string()}};
}

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < std::max(workers, 1); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock{error_mutex};
                        if (!error) {
                            error = std::current_exception();
                        }
                        next = n;
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

/// Plans with persisted runs for the model: catalog order first, then others by name.
std::vector<std::string> discover_plans(const Settings &s) {
    std::vector<std::string> found;
    const fs::path runs = fs::path{s.out} / "runs";
    std::error_code ec;
    std::vector<std::string> names;
    for (const auto &dir : fs::directory_iterator{runs, ec}) {
        if (dir.is_directory()) {
            names.push_back(dir.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());
    auto has_runs = [&](const std::string &plan) { return !discover_seeds(s.out, plan, s.model).empty(); };
    for (const Plan &p : plan_catalog()) {
        if (std::find(names.begin(), names.end(), path_safe(p.name)) != names.end() && has_runs(p.name)) {
            found.push_back(p.name);
        }
    }
    for (const std::string &n : names) {
        if (std::find(found.begin(), found.end(), n) == found.end() && has_runs(n)) {
            found.push_back(n);
        }
    }
    return found;
}

RunResult load_plan_run(const Settings &s, const std::string &plan, std::span<const CorpusEntry> entries) {
    const std::vector<std::int64_t> seeds = discover_seeds(s.out, plan, s.model);
    if (seeds.empty()) {
        throw std::runtime_error{fmt::format("no results for plan '{}' and model '{}' under '{}'", plan, s.model, s.out)};
    }
    return load_run(s.out, plan, s.model, seeds, entries);
}

std::vector<ResultRecord> swapped_records(const Settings &s, const std::string &plan, std::int64_t seed,
                                          std::span<const CorpusEntry> swapped) {
    const std::int64_t seeds[] = {seed};
    return load_run(s.out, plan, s.model, seeds, swapped).records(seed);
}

/// Gender table (and transitions when a swapped corpus is given) for one plan's median seed.
std::vector<Table> gender_tables(const Settings &s, const CommandArgs &a, const RunResult &run, std::span<const CorpusEntry> entries,
                                 std::int64_t seed) {
    if (a.swapped_corpus.empty()) {
        return {grouped_table(grouped_report(run.predictions(seed), entries, GroupingKey::gender))};
    }
    const std::vector<CorpusEntry> swapped = load_corpus(a.swapped_corpus);
    const std::vector<ResultRecord> swapped_results = swapped_records(s, run.plan, seed, swapped);
    const GenderStudy study = gender_study(entries, run.records(seed), swapped, swapped_results);
    return {gender_study_table(study), transition_table(study.transitions)};
}

Table write_single(const Settings &s, const Table &table) {
    const fs::path dir = fs::path{s.out} / "reports";
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out{dir / (table.name + ".csv"), std::ios::binary | std::ios::trunc};
    if (!out) {
        throw ReportError{fmt::format("cannot write '{}'", (dir / (table.name + ".csv")).string())};
    }
    out << table.to_csv();
    return table;
}

// ---- commands ------------------------------------------------------------

int cmd_ingest(const Settings &s, const CommandArgs &a) {
    require(!a.input.empty(), "--input is required");
    require(!a.output.empty() || s.dry_run, "--output is required");
    std::ifstream in{a.input};
    if (!in) {
        throw std::runtime_error{fmt::format("cannot open '{}'", a.input)};
    }
    IngestStats stats;
    const std::vector<CorpusEntry> entries = ingest_raw(in, stats);
    std::cout << fmt::format("read {}, kept {}, excluded INFO {}, below 70% majority {}, without rationales {}\n", stats.read, stats.kept,
                             stats.excluded_info, stats.below_majority, stats.missing_rationales);
    if (!s.dry_run) {
        save_corpus(a.output, entries);
    }
    return ok;
}

int cmd_run(const Settings &s) {
    require(!s.model.empty(), "--model is required");
    const Plan plan = resolve_plan(s);
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    RunConfig config = run_config(s, plan.name);
    validate_run_config(config);
    print_header("run", s);
    if (s.dry_run) {
        std::cout << fmt::format("would run plan '{}' on {} anecdotes x {} seeds\n", plan.name, entries.size(), s.seeds.size());
        return ok;
    }
    auto gateway = make_gateway(s);
    const RunResult result = run_experiment(config, plan, entries, *gateway);
    const std::size_t total = entries.size() * s.seeds.size();
    std::cout << fmt::format("plan {}: {} pairs, {} executed, {} incomplete, {} upstream calls, {} cache hits\n", plan.name, total,
                             result.executed, result.incomplete(), gateway->upstream_calls(), gateway->cache_hits());
    return result.incomplete() > 0 ? partial : ok;
}

int cmd_ablate(const Settings &s) {
    require(!s.model.empty(), "--model is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    validate_run_config(run_config(s, "ablate"));
    require(s.seeds.size() >= 2, "ablate needs at least two seeds");
    print_header("ablate", s);
    const std::vector<Plan> &plans = plan_catalog();
    if (s.dry_run) {
        for (const Plan &p : plans) {
            std::cout << fmt::format("would run plan '{}' on {} anecdotes x {} seeds\n", p.name, entries.size(), s.seeds.size());
        }
        return ok;
    }
    auto gateway = make_gateway(s);
    const std::vector<AblationRow> rows = ablation_grid(plans, run_config(s, ""), entries, *gateway);
    const Table table = write_single(s, ablation_table(rows));
    std::cout << table.to_markdown();
    std::size_t incomplete = 0;
    for (const Plan &p : plans) {
        incomplete += load_run(s.out, p.name, s.model, s.seeds, entries).incomplete();
    }
    return incomplete > 0 ? partial : ok;
}

int cmd_features(const Settings &s, const CommandArgs &a) {
    require(!s.model.empty(), "--model is required");
    require(!a.output.empty() || s.dry_run, "--output is required");
    std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    print_header("features extract", s);
    if (s.dry_run) {
        std::cout << fmt::format("would extract features for {} anecdotes\n", entries.size());
        return ok;
    }
    auto gateway = make_gateway(s);
    const RunSettings settings{s.model, s.temperature, s.seeds.front(), s.max_tokens > 0 ? std::optional<int>{s.max_tokens} : std::nullopt};
    std::atomic<std::size_t> failed{0};
    parallel_for(entries.size(), s.max_in_flight, [&](std::size_t i) {
        try {
            entries[i].features = extract_features(entries[i].anecdote, *gateway, settings);
        } catch (const TransportError &e) {
            ++failed;
            std::cerr << fmt::format("{}: {}\n", entries[i].anecdote.id, e.what());
        }
    });
    save_corpus(a.output, entries);
    std::cout << fmt::format("annotated {} of {} anecdotes\n", entries.size() - failed, entries.size());
    return failed > 0 ? partial : ok;
}

int cmd_swap(const Settings &s, const CommandArgs &a) {
    require(!s.model.empty(), "--model is required");
    require(!a.output.empty() || s.dry_run, "--output is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    const std::vector<CorpusEntry> candidates = swap_candidates(entries);
    print_header("swap-gender", s);
    if (s.dry_run) {
        std::cout << fmt::format("would request swaps for {} of {} anecdotes\n", candidates.size(), entries.size());
        return ok;
    }
    auto gateway = make_gateway(s);
    const RunSettings settings{s.model, s.temperature, s.seeds.front(), s.max_tokens > 0 ? std::optional<int>{s.max_tokens} : std::nullopt};
    std::vector<std::optional<GenderSwapResult>> results(candidates.size());
    std::atomic<std::size_t> failed{0};
    parallel_for(candidates.size(), s.max_in_flight, [&](std::size_t i) {
        try {
            results[i] = gender_swap(candidates[i].anecdote, *gateway, settings);
        } catch (const TransportError &e) {
            ++failed;
            std::cerr << fmt::format("{}: {}\n", candidates[i].anecdote.id, e.what());
        }
    });
    std::vector<CorpusEntry> swapped;
    std::size_t not_applicable = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!results[i]) {
            continue;
        }
        if (results[i]->warning) {
            std::cerr << fmt::format("{}: {}\n", candidates[i].anecdote.id, *results[i]->warning);
        }
        if (results[i]->outcome == GenderSwapResult::Outcome::swapped) {
            swapped.push_back(make_swapped_entry(candidates[i], *results[i]));
        } else {
            ++not_applicable;
        }
    }
    save_corpus(a.output, swapped);
    std::cout << fmt::format("{} candidates: {} swapped, {} not applicable, {} failed\n", candidates.size(), swapped.size(), not_applicable,
                             failed.load());
    return failed > 0 ? partial : ok;
}

int cmd_analyze(const Settings &s, const CommandArgs &a) {
    const auto key = parse_grouping_key(a.by);
    require(key.has_value(), fmt::format("--by must be one of gender, age, length, majority, roles, relationship (got '{}')", a.by));
    require(!s.model.empty(), "--model is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    const std::string plan = s.plan_file.empty() ? s.plan : resolve_plan(s).name;
    const RunResult run = load_plan_run(s, plan, entries);
    const std::int64_t seed = median_seed(run, gold_labels(entries));
    std::vector<Table> tables;
    if (*key == GroupingKey::gender) {
        tables = gender_tables(s, a, run, entries, seed);
    } else {
        tables.push_back(grouped_table(grouped_report(run.predictions(seed), entries, *key)));
    }
    std::cout << fmt::format("plan {}, median macro-F1 seed {}\n\n", plan, seed);
    for (const Table &t : tables) {
        std::cout << (s.dry_run ? t : write_single(s, t)).to_markdown();
    }
    return ok;
}

int cmd_compare(const Settings &s, const CommandArgs &a) {
    require(!s.model.empty(), "--model is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    const std::vector<Judgment> golds = gold_labels(entries);
    const RunResult baseline = load_plan_run(s, a.baseline, entries);
    const RunResult candidate = load_plan_run(s, a.candidate, entries);
    const std::vector<HeadlineReport> reports{headline_report(baseline, golds), headline_report(candidate, golds, &baseline)};
    std::cout << headline_table(reports).to_markdown();
    return ok;
}

std::vector<DistributionRow> distribution_rows(std::span<const CorpusEntry> entries, std::span<const RunResult> runs,
                                               std::span<const Judgment> golds) {
    std::vector<DistributionRow> rows{{"consensus", label_distribution(golds)}};
    for (const RunResult &r : runs) {
        const std::int64_t seed = median_seed(r, golds);
        rows.push_back({fmt::format("{} (seed {})", r.plan, seed), label_distribution(r.predictions(seed))});
    }
    (void)entries;
    return rows;
}

std::vector<RationaleRow> rationale_rows(std::span<const CorpusEntry> entries, std::span<const RunResult> runs,
                                         std::span<const Judgment> golds, const EmbedClient *client) {
    std::vector<RationaleRow> rows;
    for (const RunResult &r : runs) {
        const std::int64_t seed = median_seed(r, golds);
        const auto &records = r.records(seed);
        RationaleRow row{r.plan, rationale_scores(records, entries), std::nullopt};
        if (client) {
            const std::vector<std::string> metrics(embed_metrics.begin(), embed_metrics.end());
            EmbedScores sum;
            sum.bertscore.emplace();
            sum.bleurt = 0.0;
            sum.bartscore = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (!records[i].complete || entries[i].consensus.reference_rationales.empty()) {
                    continue;
                }
                const EmbedScores e = client->score(records[i].rationale, entries[i].consensus.reference_rationales, metrics);
                sum.bertscore->precision += e.bertscore->precision;
                sum.bertscore->recall += e.bertscore->recall;
                sum.bertscore->f1 += e.bertscore->f1;
                *sum.bleurt += *e.bleurt;
                *sum.bartscore += *e.bartscore;
                ++n;
            }
            if (n > 0) {
                const double d = static_cast<double>(n);
                sum.bertscore->precision /= d;
                sum.bertscore->recall /= d;
                sum.bertscore->f1 /= d;
                *sum.bleurt /= d;
                *sum.bartscore /= d;
            }
            row.embedding = sum;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int cmd_report(const Settings &s, const CommandArgs &a) {
    require(!s.model.empty(), "--model is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    const std::vector<Judgment> golds = gold_labels(entries);
    const std::vector<std::string> plans = discover_plans(s);
    if (plans.empty()) {
        throw std::runtime_error{fmt::format("no runs for model '{}' under '{}'", s.model, s.out)};
    }

    std::vector<RunResult> runs;
    for (const std::string &p : plans) {
        RunResult r = load_plan_run(s, p, entries);
        if (r.seeds.size() < 2) {
            std::cerr << fmt::format("skipping plan '{}': {} seed(s), at least two needed\n", p, r.seeds.size());
            continue;
        }
        runs.push_back(std::move(r));
    }
    require(!runs.empty(), "no plan has at least two seeds");
    const RunResult *baseline = nullptr;
    for (const RunResult &r : runs) {
        if (r.plan == a.baseline) {
            baseline = &r;
        }
    }

    std::vector<HeadlineReport> headlines;
    for (const RunResult &r : runs) {
        const bool compare = baseline && &r != baseline && baseline->seeds.size() == r.seeds.size();
        headlines.push_back(headline_report(r, golds, compare ? baseline : nullptr));
    }

    std::vector<Table> tables;
    tables.push_back(headline_table(headlines));
    tables.push_back(label_distribution_table(distribution_rows(entries, runs, golds)));

    std::vector<AblationRow> ablations;
    for (const RunResult &r : runs) {
        if (std::any_of(plan_catalog().begin(), plan_catalog().end(), [&](const Plan &p) { return p.name == r.plan; })) {
            std::vector<double> f1;
            for (const HeadlineReport &h : headlines) {
                if (h.plan == r.plan) {
                    f1 = h.macro_f1.values;
                }
            }
            ablations.push_back({r.plan, aggregate_seeds(f1)});
        }
    }
    tables.push_back(ablation_table(ablations));

    const std::string primary = s.plan_file.empty() ? s.plan : resolve_plan(s).name;
    const auto primary_run = std::find_if(runs.begin(), runs.end(), [&](const RunResult &r) { return r.plan == primary; });
    const RunResult &focus = primary_run != runs.end() ? *primary_run : runs.front();
    const std::int64_t seed = median_seed(focus, golds);
    const std::vector<Judgment> preds = focus.predictions(seed);
    for (Table &t : gender_tables(s, a, focus, entries, seed)) {
        tables.push_back(std::move(t));
    }
    for (const GroupingKey key : {GroupingKey::age_bin, GroupingKey::length_quartile, GroupingKey::majority_bucket, GroupingKey::narrator_role,
                                  GroupingKey::relationship_type}) {
        tables.push_back(grouped_table(grouped_report(preds, entries, key)));
        tables.back().notes.push_back(fmt::format("Plan {}, seed {}.", focus.plan, seed));
    }
    tables.push_back(rationale_table(rationale_rows(entries, runs, golds, nullptr)));

    if (s.dry_run) {
        std::cout << fmt::format("would write {} tables to '{}'\n", tables.size(), (fs::path{s.out} / "reports").string());
        return ok;
    }
    ReportMeta meta;
    meta.configuration = config_json(s);
    meta.configuration["plans"] = plans;
    meta.configuration["focus_plan"] = focus.plan;
    meta.configuration["focus_seed"] = seed;
    meta.generated_at = now_utc();
    write_report(fs::path{s.out} / "reports", tables, meta);
    std::cout << fmt::format("wrote {} tables to '{}'\n", tables.size(), (fs::path{s.out} / "reports").string());
    return ok;
}

int cmd_score(const Settings &s, const CommandArgs &a) {
    require(!s.model.empty(), "--model is required");
    const std::vector<CorpusEntry> entries = require_corpus(s.corpus);
    const std::vector<Judgment> golds = gold_labels(entries);
    std::vector<RunResult> runs;
    for (const std::string &p : discover_plans(s)) {
        runs.push_back(load_plan_run(s, p, entries));
    }
    require(!runs.empty(), fmt::format("no runs for model '{}' under '{}'", s.model, s.out));
    std::optional<EmbedClient> client;
    if (!a.embeddings_url.empty()) {
        client.emplace(a.embeddings_url);
        const ScorerHealth health = client->health();
        if (!health.ready) {
            throw std::runtime_error{fmt::format("scorer at '{}' is not ready", a.embeddings_url)};
        }
    }
    if (s.dry_run) {
        std::cout << fmt::format("would score rationales of {} plan(s)\n", runs.size());
        return ok;
    }
    const Table table = rationale_table(rationale_rows(entries, runs, golds, client ? &*client : nullptr));
    std::cout << write_single(s, table).to_markdown();
    return ok;
}

void add_provider_options(CLI::App &app, Settings &s) {
    app.add_option("--provider", s.provider, "Completion backend: http or scripted")
        ->check(CLI::IsMember({"http", "scripted"}))
        ->envname("JUDGEBENCH_PROVIDER")
        ->capture_default_str();
    app.add_option("--script", s.script, "Script file for the scripted provider")->envname("JUDGEBENCH_SCRIPT");
    app.add_option("--base-url", s.base_url, "Chat-completion endpoint origin and prefix")
        ->envname("JUDGEBENCH_BASE_URL")
        ->capture_default_str();
    app.add_option("--credential-env", s.credential_env, "Environment variable holding the API key")->capture_default_str();
    app.add_option("--cache-dir", s.cache_dir, "Directory for the on-disk response cache")->envname("JUDGEBENCH_CACHE_DIR");
    app.add_option("--max-in-flight", s.max_in_flight, "Concurrent provider requests")->capture_default_str();
    app.add_option("--max-retries", s.max_retries, "Retries after a transient provider failure")->capture_default_str();
    app.add_option("--rpm", s.rpm, "Request rate limit per minute (0 = unlimited)")->capture_default_str();
}

void add_experiment_options(CLI::App &app, Settings &s) {
    app.add_option("--model", s.model, "Model identifier sent to the provider")->envname("JUDGEBENCH_MODEL");
    app.add_option("--seeds", s.seeds, "Comma-separated seeds")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->capture_default_str();
    app.add_option("--temperature", s.temperature, "Sampling temperature")->capture_default_str();
    app.add_option("--max-tokens", s.max_tokens, "Completion token limit (0 = provider default)")->capture_default_str();
    app.add_option("--corpus", s.corpus, "Corpus file (JSON lines)")->envname("JUDGEBENCH_CORPUS");
    app.add_option("--out", s.out, "Output directory for runs and reports")->envname("JUDGEBENCH_OUT")->capture_default_str();
    app.add_option("--plan", s.plan, "Catalog plan name")->capture_default_str();
    app.add_option("--plan-file", s.plan_file, "Custom plan definition (JSON)");
}

}  // namespace

int main(int argc, char **argv) {
    Settings s;
    CommandArgs a;
    CLI::App app{"Evaluate language-model social judgments against community consensus.", "judgebench"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", std::string{harness_version});
    app.set_help_all_flag("--help-all", "Print help for every command");
    app.set_config("--config", "", "Key-value configuration file")->check(CLI::ExistingFile);
    app.add_flag("--dry-run", s.dry_run, "Validate only; write nothing and send nothing");
    add_provider_options(app, s);
    add_experiment_options(app, s);
    app.require_subcommand(1);
    app.fallthrough();

    auto *ingest = app.add_subcommand("ingest", "Convert a raw export into a corpus file");
    ingest->add_option("--input", a.input, "Raw export (JSON lines)")->required();
    ingest->add_option("--output", a.output, "Corpus file to write");

    app.add_subcommand("run", "Run one plan over the corpus for every seed");
    app.add_subcommand("ablate", "Run every catalog plan and tabulate macro-F1");

    auto *features = app.add_subcommand("features", "Feature extraction");
    auto *extract = features->add_subcommand("extract", "Annotate narrator demographics and relationship");
    extract->add_option("--output", a.output, "Annotated corpus to write");
    features->require_subcommand(1);

    auto *swap = app.add_subcommand("swap-gender", "Write gender-swapped counterparts of annotated anecdotes");
    swap->add_option("--output", a.output, "Swapped corpus to write");

    auto *analyze = app.add_subcommand("analyze", "Grouped analysis of the median-seed run");
    analyze->add_option("--by", a.by, "gender, age, length, majority, roles or relationship")->required();
    analyze->add_option("--swapped-corpus", a.swapped_corpus, "Swapped corpus for the gender comparison");

    auto *compare = app.add_subcommand("compare", "Test a candidate plan against a baseline plan");
    compare->add_option("--baseline", a.baseline, "Baseline plan")->capture_default_str();
    compare->add_option("--candidate", a.candidate, "Candidate plan")->capture_default_str();

    auto *report = app.add_subcommand("report", "Write summary.md and every table under <out>/reports");
    report->add_option("--baseline", a.baseline, "Plan used for significance tests")->capture_default_str();
    report->add_option("--swapped-corpus", a.swapped_corpus, "Swapped corpus for the gender comparison");

    auto *score = app.add_subcommand("score-rationales", "Score rationales against community explanations");
    score->add_option("--embeddings-url", a.embeddings_url, "Embedding scorer service; adds embedding columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage;
    }

    if (const CLI::Option *config = app.get_config_ptr(); config && config->count() > 0) {
        s.config_file = config->as<std::string>();
    }

    try {
        validate_settings(s);
        if (ingest->parsed()) {
            return cmd_ingest(s, a);
        }
        if (app.got_subcommand("run")) {
            return cmd_run(s);
        }
        if (app.got_subcommand("ablate")) {
            return cmd_ablate(s);
        }
        if (extract->parsed()) {
            return cmd_features(s, a);
        }
        if (swap->parsed()) {
            return cmd_swap(s, a);
        }
        if (analyze->parsed()) {
            return cmd_analyze(s, a);
        }
        if (compare->parsed()) {
            return cmd_compare(s, a);
        }
        if (report->parsed()) {
            return cmd_report(s, a);
        }
        if (score->parsed()) {
            return cmd_score(s, a);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return usage;
}
