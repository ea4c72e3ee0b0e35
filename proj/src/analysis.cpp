#include "judgebench/analysis.hpp"

#include "judgebench/features.hpp"
#include "judgebench/grouping.hpp"
#include "judgebench/strings.hpp"

#include "fmt/format.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace judgebench {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view results_file = "results.jsonl";
constexpr std::string_view transcripts_file = "transcripts.jsonl";

/// Latest record per id; later lines replace earlier ones.
std::unordered_map<std::string, ResultRecord> read_results(const fs::path &path) {
    std::unordered_map<std::string, ResultRecord> latest;
    std::ifstream in{path};
    if (!in) {
        return latest;
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            ResultRecord record = result_from_json(nlohmann::json::parse(line));
            latest.insert_or_assign(record.id, std::move(record));
        } catch (const nlohmann::json::exception &e) {
            // a line cut short by an interrupted append
            if (in.peek() == std::char_traits<char>::eof()) {
                break;
            }
            throw std::runtime_error{fmt::format("{}: line {}: {}", path.string(), number, e.what())};
        }
    }
    return latest;
}

ResultRecord record_from_transcript(const Transcript &transcript) {
    ResultRecord record;
    record.id = transcript.anecdote_id;
    record.seed = transcript.seed;
    record.transcript = std::string{transcripts_file};
    record.complete = transcript.complete;
    record.error = transcript.failure;
    if (const auto response = transcript.final_response(); response && transcript.complete) {
        ParsedVerdict verdict = parse_verdict(*response);
        record.judgment = verdict.judgment;
        record.rationale = std::move(verdict.rationale);
        record.matched_evidence = std::move(verdict.matched_evidence);
    }
    return record;
}

std::vector<double> per_seed_f1(const RunResult &run, std::span<const Judgment> golds) {
    std::vector<double> out;
    for (const std::int64_t seed : run.seeds) {
        out.push_back(classification_report(run.predictions(seed), golds).macro_f1);
    }
    return out;
}

Group make_group(std::string label, std::span<const Judgment> preds, std::span<const Judgment> golds) {
    Group group;
    group.label = std::move(label);
    group.size = preds.size();
    if (!preds.empty()) {
        group.report = classification_report(preds, golds);
        group.predicted = label_distribution(preds);
        group.consensus = label_distribution(golds);
    }
    return group;
}

struct Bucketed {
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<Judgment>, std::vector<Judgment>>> members;
    std::size_t excluded{0};
};

void add_member(Bucketed &b, const std::string &label, Judgment pred, Judgment gold) {
    auto &[preds, golds] = b.members[label];
    preds.push_back(pred);
    golds.push_back(gold);
}

void order_by_size(Bucketed &b) {
    b.order.clear();
    for (const auto &[label, m] : b.members) {
        b.order.push_back(label);
    }
    std::stable_sort(b.order.begin(), b.order.end(), [&](const std::string &x, const std::string &y) {
        const std::size_t sx = b.members.at(x).first.size();
        const std::size_t sy = b.members.at(y).first.size();
        return sx != sy ? sx > sy : x < y;
    });
}

std::string join_ids(const std::vector<std::string> &ids) {
    constexpr std::size_t shown = 10;
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < shown; ++i) {
        out += (i ? ", " : "") + ids[i];
    }
    if (ids.size() > shown) {
        out += fmt::format(", ... ({} total)", ids.size());
    }
    return out;
}

}  // namespace

void validate_run_config(const RunConfig &config) {
    if (config.model.empty()) {
        throw std::invalid_argument{"run configuration has no model"};
    }
    if (config.seeds.empty()) {
        throw std::invalid_argument{"run configuration has no seeds"};
    }
    std::set<std::int64_t> unique(config.seeds.begin(), config.seeds.end());
    if (unique.size() != config.seeds.size()) {
        throw std::invalid_argument{"run configuration repeats a seed"};
    }
    if (config.workers < 1) {
        throw std::invalid_argument{"run configuration needs at least one worker"};
    }
}

nlohmann::json to_json(const ResultRecord &record) {
    nlohmann::json j{{"id", record.id},
                     {"seed", record.seed},
                     {"judgment", std::string{to_string(record.judgment)}},
                     {"rationale", record.rationale},
                     {"matched_evidence", nullptr},
                     {"transcript", record.transcript},
                     {"status", record.complete ? "complete" : "incomplete"}};
    if (record.matched_evidence) {
        j["matched_evidence"] = *record.matched_evidence;
    }
    if (record.error) {
        j["error"] = *record.error;
    }
    return j;
}

ResultRecord result_from_json(const nlohmann::json &j) {
    ResultRecord record;
    record.id = j.at("id").get<std::string>();
    record.seed = j.at("seed").get<std::int64_t>();
    const auto judgment = parse_judgment(j.at("judgment").get<std::string>());
    if (!judgment) {
        throw std::invalid_argument{fmt::format("result '{}' has an unknown judgment", record.id)};
    }
    record.judgment = *judgment;
    record.rationale = j.value("rationale", "");
    if (const auto it = j.find("matched_evidence"); it != j.end() && it->is_string()) {
        record.matched_evidence = it->get<std::string>();
    }
    record.transcript = j.value("transcript", "");
    record.complete = j.value("status", "") == "complete";
    if (const auto it = j.find("error"); it != j.end() && it->is_string()) {
        record.error = it->get<std::string>();
    }
    return record;
}

const std::vector<ResultRecord> &RunResult::records(std::int64_t seed) const {
    const auto it = by_seed.find(seed);
    if (it == by_seed.end()) {
        throw std::out_of_range{fmt::format("run has no seed {}", seed)};
    }
    return it->second;
}

std::vector<Judgment> RunResult::predictions(std::int64_t seed) const {
    std::vector<Judgment> out;
    for (const ResultRecord &r : records(seed)) {
        out.push_back(r.complete ? r.judgment : Judgment::abstain);
    }
    return out;
}

std::size_t RunResult::incomplete() const {
    std::size_t n = 0;
    for (const auto &[seed, records] : by_seed) {
        n += static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const ResultRecord &r) { return !r.complete; }));
    }
    return n;
}

std::string path_safe(std::string_view name) {
    std::string out;
    for (const char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || out == "." || out == "..") {
        out = "_" + out;
    }
    return out;
}

fs::path seed_directory(const fs::path &output_dir, std::string_view plan, std::string_view model, std::int64_t seed) {
    return output_dir / "runs" / path_safe(plan) / path_safe(model) / fmt::format("seed-{}", seed);
}

RunResult run_experiment(const RunConfig &config, const Plan &plan, std::span<const CorpusEntry> entries, Gateway &gateway) {
    validate_run_config(config);
    if (const auto violations = validate_plan(plan); !violations.empty()) {
        throw PlanError{fmt::format("plan '{}': {}", plan.name, violations.front())};
    }

    struct SeedState {
        std::unordered_map<std::string, ResultRecord> latest;
        fs::path results;
        std::unique_ptr<TranscriptStore> transcripts;
    };
    std::map<std::int64_t, SeedState> state;
    struct Job {
        std::int64_t seed;
        std::size_t entry;
    };
    std::vector<Job> jobs;

    for (const std::int64_t seed : config.seeds) {
        const fs::path dir = seed_directory(config.output_dir, plan.name, config.model, seed);
        fs::create_directories(dir);
        SeedState &s = state[seed];
        s.results = dir / results_file;
        s.latest = read_results(s.results);
        s.transcripts = std::make_unique<TranscriptStore>(dir / transcripts_file);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto it = s.latest.find(entries[i].anecdote.id);
            if (it == s.latest.end() || !it->second.complete) {
                jobs.push_back({seed, i});
            }
        }
    }

    std::mutex results_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) {
                return;
            }
            const Job job = jobs[k];
            SeedState &s = state.at(job.seed);
            try {
                const RunSettings settings{config.model, config.temperature, job.seed, config.max_tokens};
                const Transcript transcript = run_plan(plan, entries[job.entry].anecdote, gateway, settings);
                s.transcripts->append(transcript);
                ResultRecord record = record_from_transcript(transcript);
                std::lock_guard lock{results_mutex};
                std::ofstream out{s.results, std::ios::app};
                if (!out) {
                    throw std::runtime_error{fmt::format("cannot append to '{}'", s.results.string())};
                }
                out << to_json(record).dump() << '\n';
                s.latest.insert_or_assign(record.id, std::move(record));
            } catch (...) {
                std::lock_guard lock{results_mutex};
                if (!fatal) {
                    fatal = std::current_exception();
                }
                next.store(jobs.size());
                return;
            }
        }
    };
    {
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(jobs.size(), 1));
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < count; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (fatal) {
        std::rethrow_exception(fatal);
    }

    RunResult result;
    result.plan = plan.name;
    result.model = config.model;
    result.seeds = config.seeds;
    result.executed = jobs.size();
    for (const std::int64_t seed : config.seeds) {
        auto &records = result.by_seed[seed];
        for (const CorpusEntry &e : entries) {
            records.push_back(state.at(seed).latest.at(e.anecdote.id));
        }
    }
    return result;
}

RunResult load_run(const fs::path &output_dir, std::string_view plan, std::string_view model, std::span<const std::int64_t> seeds,
                   std::span<const CorpusEntry> entries) {
    RunResult result;
    result.plan = std::string{plan};
    result.model = std::string{model};
    result.seeds.assign(seeds.begin(), seeds.end());
    for (const std::int64_t seed : seeds) {
        const fs::path path = seed_directory(output_dir, plan, model, seed) / results_file;
        if (!fs::exists(path)) {
            throw std::runtime_error{fmt::format("no results at '{}'", path.string())};
        }
        auto latest = read_results(path);
        std::vector<std::string> missing;
        auto &records = result.by_seed[seed];
        for (const CorpusEntry &e : entries) {
            const auto it = latest.find(e.anecdote.id);
            if (it == latest.end()) {
                missing.push_back(e.anecdote.id);
                continue;
            }
            records.push_back(it->second);
        }
        if (!missing.empty()) {
            throw std::runtime_error{fmt::format("'{}' lacks results for: {}", path.string(), join_ids(missing))};
        }
    }
    return result;
}

std::vector<std::int64_t> discover_seeds(const fs::path &output_dir, std::string_view plan, std::string_view model) {
    std::vector<std::int64_t> seeds;
    const fs::path root = output_dir / "runs" / path_safe(plan) / path_safe(model);
    std::error_code ec;
    for (const auto &dir : fs::directory_iterator{root, ec}) {
        const std::string name = dir.path().filename().string();
        if (!name.starts_with("seed-") || !fs::exists(dir.path() / results_file)) {
            continue;
        }
        std::int64_t seed = 0;
        const char *first = name.data() + 5;
        const char *last = name.data() + name.size();
        if (const auto [ptr, err] = std::from_chars(first, last, seed); err == std::errc{} && ptr == last) {
            seeds.push_back(seed);
        }
    }
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

std::vector<Judgment> gold_labels(std::span<const CorpusEntry> entries) {
    std::vector<Judgment> out;
    out.reserve(entries.size());
    for (const CorpusEntry &e : entries) {
        out.push_back(e.consensus.label);
    }
    return out;
}

HeadlineReport headline_report(const RunResult &run, std::span<const Judgment> golds, const RunResult *baseline) {
    if (run.seeds.size() < 2) {
        throw std::invalid_argument{fmt::format("run '{}' has {} seed(s); at least two are needed", run.plan, run.seeds.size())};
    }
    HeadlineReport report;
    report.plan = run.plan;
    report.model = run.model;
    report.seeds = run.seeds;
    std::vector<double> p, r, f, a;
    for (const std::int64_t seed : run.seeds) {
        ClassificationReport cr = classification_report(run.predictions(seed), golds);
        p.push_back(cr.macro_precision);
        r.push_back(cr.macro_recall);
        f.push_back(cr.macro_f1);
        a.push_back(cr.abstention_rate);
        report.per_seed.push_back(std::move(cr));
    }
    report.precision = aggregate_seeds(p);
    report.recall = aggregate_seeds(r);
    report.macro_f1 = aggregate_seeds(f);
    report.abstention = aggregate_seeds(a);
    if (baseline) {
        if (baseline->seeds.size() != run.seeds.size()) {
            throw std::invalid_argument{fmt::format("seed count mismatch: '{}' has {}, baseline '{}' has {}", run.plan, run.seeds.size(),
                                                    baseline->plan, baseline->seeds.size())};
        }
        report.baseline_plan = baseline->plan;
        report.vs_baseline = welch_t_test(f, per_seed_f1(*baseline, golds));
    }
    return report;
}

std::int64_t median_seed(const RunResult &run, std::span<const Judgment> golds) {
    if (run.seeds.empty()) {
        throw std::invalid_argument{"run has no seeds"};
    }
    const std::vector<double> f1 = per_seed_f1(run, golds);
    std::vector<std::pair<double, std::int64_t>> ranked;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        ranked.emplace_back(f1[i], run.seeds[i]);
    }
    std::sort(ranked.begin(), ranked.end());
    return ranked[(ranked.size() - 1) / 2].second;
}

std::string_view to_string(GroupingKey key) noexcept {
    switch (key) {
    case GroupingKey::gender:
        return "gender";
    case GroupingKey::age_bin:
        return "age";
    case GroupingKey::length_quartile:
        return "length";
    case GroupingKey::majority_bucket:
        return "majority";
    case GroupingKey::narrator_role:
        return "roles";
    case GroupingKey::relationship_type:
        return "relationship";
    }
    return "gender";
}

std::optional<GroupingKey> parse_grouping_key(std::string_view text) {
    for (const GroupingKey key : {GroupingKey::gender, GroupingKey::age_bin, GroupingKey::length_quartile, GroupingKey::majority_bucket,
                                  GroupingKey::narrator_role, GroupingKey::relationship_type}) {
        if (to_string(key) == text) {
            return key;
        }
    }
    return std::nullopt;
}

GroupedReport grouped_report(std::span<const Judgment> preds, std::span<const CorpusEntry> entries, GroupingKey key) {
    if (preds.size() != entries.size()) {
        throw std::invalid_argument{fmt::format("{} predictions for {} entries", preds.size(), entries.size())};
    }
    Bucketed b;
    auto fixed = [&](auto labels) {
        for (const std::string_view l : labels) {
            b.order.emplace_back(l);
            b.members[std::string{l}];
        }
    };

    switch (key) {
    case GroupingKey::gender:
        b.order = {"male", "female"};
        b.members["male"];
        b.members["female"];
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto &f = entries[i].features;
            if (!f || f->gender == Gender::unknown) {
                ++b.excluded;
                continue;
            }
            add_member(b, f->gender == Gender::male ? "male" : "female", preds[i], entries[i].consensus.label);
        }
        break;
    case GroupingKey::age_bin:
        fixed(age_bin_labels);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto &f = entries[i].features;
            if (!f || !f->age) {
                ++b.excluded;
                continue;
            }
            add_member(b, std::string{age_bin(*f->age)}, preds[i], entries[i].consensus.label);
        }
        break;
    case GroupingKey::length_quartile: {
        fixed(quartile_labels);
        const QuartileSplit split = length_quartiles(entries);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            add_member(b, std::string{quartile_labels[static_cast<std::size_t>(split.assignment[i])]}, preds[i], entries[i].consensus.label);
        }
        break;
    }
    case GroupingKey::majority_bucket:
        fixed(majority_bucket_labels);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const double pct = entries[i].consensus.majority_pct;
            if (pct < 70.0 || pct > 100.0) {
                ++b.excluded;
                continue;
            }
            add_member(b, std::string{majority_bucket(pct)}, preds[i], entries[i].consensus.label);
        }
        break;
    case GroupingKey::narrator_role:
    case GroupingKey::relationship_type:
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto &f = entries[i].features;
            const std::optional<std::string> *value = nullptr;
            if (f) {
                value = key == GroupingKey::narrator_role ? &f->narrator_role : &f->relationship_type;
            }
            if (!value || !value->has_value()) {
                ++b.excluded;
                continue;
            }
            add_member(b, std::string{trim(to_lower(**value))}, preds[i], entries[i].consensus.label);
        }
        order_by_size(b);
        break;
    }

    GroupedReport report;
    report.key = key;
    report.excluded = b.excluded;
    report.population = entries.size() - b.excluded;
    for (const std::string &label : b.order) {
        const auto &[p, g] = b.members.at(label);
        report.groups.push_back(make_group(label, p, g));
    }
    return report;
}

std::size_t TransitionMatrix::row_total(Judgment from) const {
    const auto &row = counts[index_of(from)];
    return row[0] + row[1] + row[2];
}

std::size_t TransitionMatrix::column_total(Judgment to) const {
    std::size_t n = 0;
    for (const auto &row : counts) {
        n += row[index_of(to)];
    }
    return n;
}

double TransitionMatrix::percent(Judgment from, Judgment to) const {
    const std::size_t total = row_total(from);
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(at(from, to)) / static_cast<double>(total);
}

TransitionMatrix transition_matrix(std::span<const ResultRecord> original, std::span<const ResultRecord> swapped) {
    std::map<std::string, Judgment> orig;
    for (const ResultRecord &r : original) {
        orig[original_id(r.id)] = r.complete ? r.judgment : Judgment::abstain;
    }
    std::map<std::string, Judgment> swap;
    for (const ResultRecord &r : swapped) {
        swap[original_id(r.id)] = r.complete ? r.judgment : Judgment::abstain;
    }
    std::vector<std::string> only_original, only_swapped;
    for (const auto &[id, j] : orig) {
        if (!swap.contains(id)) {
            only_original.push_back(id);
        }
    }
    for (const auto &[id, j] : swap) {
        if (!orig.contains(id)) {
            only_swapped.push_back(id);
        }
    }
    if (!only_original.empty() || !only_swapped.empty()) {
        std::string msg = "original and swapped id sets differ";
        if (!only_original.empty()) {
            msg += "; only in original: " + join_ids(only_original);
        }
        if (!only_swapped.empty()) {
            msg += "; only in swapped: " + join_ids(only_swapped);
        }
        throw IdMismatchError{msg};
    }
    TransitionMatrix m;
    for (const auto &[id, j] : orig) {
        ++m.counts[index_of(j)][index_of(swap.at(id))];
    }
    return m;
}

GenderStudy gender_study(std::span<const CorpusEntry> original_entries, std::span<const ResultRecord> original_records,
                         std::span<const CorpusEntry> swapped_entries, std::span<const ResultRecord> swapped_records) {
    if (original_entries.size() != original_records.size() || swapped_entries.size() != swapped_records.size()) {
        throw std::invalid_argument{"entries and records differ in length"};
    }
    std::unordered_map<std::string, std::size_t> swapped_at;
    for (std::size_t i = 0; i < swapped_entries.size(); ++i) {
        swapped_at[original_id(swapped_entries[i].anecdote.id)] = i;
    }

    std::vector<Judgment> male_preds, female_preds, golds;
    std::vector<ResultRecord> paired_original, paired_swapped;
    for (std::size_t i = 0; i < original_entries.size(); ++i) {
        const CorpusEntry &e = original_entries[i];
        if (!e.features || e.features->gender == Gender::unknown) {
            continue;
        }
        const auto it = swapped_at.find(e.anecdote.id);
        if (it == swapped_at.end()) {
            continue;
        }
        const ResultRecord &o = original_records[i];
        const ResultRecord &s = swapped_records[it->second];
        const Judgment oj = o.complete ? o.judgment : Judgment::abstain;
        const Judgment sj = s.complete ? s.judgment : Judgment::abstain;
        const bool narrator_male = e.features->gender == Gender::male;
        male_preds.push_back(narrator_male ? oj : sj);
        female_preds.push_back(narrator_male ? sj : oj);
        golds.push_back(e.consensus.label);
        paired_original.push_back(o);
        paired_swapped.push_back(s);
    }
    if (golds.empty()) {
        throw std::invalid_argument{"no anecdote has both a known-gender original and a swapped counterpart"};
    }

    GenderStudy study;
    study.population = golds.size();
    study.male = make_group("male", male_preds, golds);
    study.female = make_group("female", female_preds, golds);
    study.consensus = label_distribution(golds);
    study.transitions = transition_matrix(paired_original, paired_swapped);
    return study;
}

std::vector<AblationRow> ablation_grid(std::span<const Plan> plans, const RunConfig &config, std::span<const CorpusEntry> entries,
                                       Gateway &gateway) {
    const std::vector<Judgment> golds = gold_labels(entries);
    std::vector<AblationRow> rows;
    for (const Plan &plan : plans) {
        RunConfig c = config;
        c.plan = plan.name;
        const RunResult run = run_experiment(c, plan, entries, gateway);
        rows.push_back({plan.name, aggregate_seeds(per_seed_f1(run, golds))});
    }
    return rows;
}

TextScores rationale_scores(std::span<const ResultRecord> records, std::span<const CorpusEntry> entries) {
    if (records.size() != entries.size()) {
        throw std::invalid_argument{fmt::format("{} records for {} entries", records.size(), entries.size())};
    }
    TextScores sum;
    std::size_t n = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].complete || entries[i].consensus.reference_rationales.empty()) {
            continue;
        }
        sum += score_rationale(records[i].rationale, entries[i].consensus.reference_rationales);
        ++n;
    }
    if (n > 0) {
        sum /= static_cast<double>(n);
    }
    return sum;
}

}  // namespace judgebench
