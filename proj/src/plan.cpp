#include "judgebench/plan.hpp"

#include "judgebench/strings.hpp"

#include "fmt/format.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <utility>

namespace judgebench {

using nlohmann::json;

std::string_view to_string(StageName name) noexcept {
    switch (name) {
        case StageName::summ: return "summ";
        case StageName::narr: return "narr";
        case StageName::opp: return "opp";
        case StageName::verdict: return "verdict";
        case StageName::vanilla: return "vanilla";
    }
    return "verdict";
}

std::optional<StageName> parse_stage_name(std::string_view text) {
    for (StageName name : {StageName::summ, StageName::narr, StageName::opp, StageName::verdict, StageName::vanilla}) {
        if (text == to_string(name)) {
            return name;
        }
    }
    return std::nullopt;
}

std::string_view prompts::for_stage(StageName name) noexcept {
    switch (name) {
        case StageName::summ: return summarize;
        case StageName::narr: return narrator_actions;
        case StageName::opp: return opposing_actions;
        case StageName::verdict: return verdict;
        case StageName::vanilla: return vanilla;
    }
    return verdict;
}

namespace {

// Applied in order; longer phrases first so later rows never see a partial rewrite.
constexpr std::array<std::pair<std::string_view, std::string_view>, 7> first_person_table{{
    {"the narrator alone is at fault", "I alone am at fault"},
    {"the narrator is not at fault", "I am not at fault"},
    {"the narrator's not at fault", "I'm not at fault"},
    {"make a decision.", "decide if I am the asshole."},
    {"the narrator's actions", "my actions"},
    {"the narrative", "my narrative"},
    {"this narrative", "my narrative"},
}};

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    const auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                       tm.tm_sec, millis);
}

Plan make_plan(std::string name, std::initializer_list<StageName> names, PersonMode mode = PersonMode::third_person) {
    Plan plan{std::move(name), {}};
    for (StageName n : names) {
        plan.stages.push_back(make_stage(n, mode));
    }
    return plan;
}

}  // namespace

std::string first_person(std::string_view prompt) {
    std::string out{prompt};
    for (const auto &[from, to] : first_person_table) {
        out = replace_all(out, from, to);
    }
    return out;
}

Stage make_stage(StageName name, PersonMode mode) { return Stage{name, std::string{prompts::for_stage(name)}, mode}; }

std::vector<std::string> validate_plan(const Plan &plan) {
    std::vector<std::string> violations;
    if (plan.name.empty()) {
        violations.emplace_back("plan name is empty");
    }
    if (plan.stages.empty()) {
        violations.emplace_back("plan has no stages");
        return violations;
    }
    const auto terminal_count = std::count_if(plan.stages.begin(), plan.stages.end(), [](const Stage &s) { return is_terminal(s.name); });
    if (terminal_count > 1) {
        violations.emplace_back("multiple terminal stages");
    }
    if (!is_terminal(plan.stages.back().name)) {
        violations.emplace_back("missing terminal stage");
    }
    std::set<StageName> seen;
    for (std::size_t i = 0; i < plan.stages.size(); ++i) {
        const Stage &stage = plan.stages[i];
        if (!seen.insert(stage.name).second) {
            violations.push_back(fmt::format("stage '{}' repeats", to_string(stage.name)));
        }
        if (trim(stage.prompt_template).empty()) {
            violations.push_back(fmt::format("stage '{}' has an empty prompt", to_string(stage.name)));
        }
        if (i > 0 && stage.prompt_template.find(anecdote_placeholder) != std::string::npos) {
            violations.push_back(fmt::format("anecdote placeholder in non-first stage '{}'", to_string(stage.name)));
        }
    }
    return violations;
}

const std::vector<Plan> &plan_catalog() {
    static const std::vector<Plan> catalog{
        make_plan("vanilla", {StageName::vanilla}),
        make_plan("summ-verdict", {StageName::summ, StageName::verdict}),
        make_plan("narr-verdict", {StageName::narr, StageName::verdict}),
        make_plan("opp-verdict", {StageName::opp, StageName::verdict}),
        make_plan("narr-opp-verdict", {StageName::narr, StageName::opp, StageName::verdict}),
        make_plan("summ-opp-narr-verdict", {StageName::summ, StageName::opp, StageName::narr, StageName::verdict}),
        make_plan("socialgaze", {StageName::summ, StageName::narr, StageName::opp, StageName::verdict}),
    };
    return catalog;
}

Plan first_person_plan() {
    return make_plan("firstperson", {StageName::summ, StageName::narr, StageName::opp, StageName::verdict}, PersonMode::first_person);
}

std::optional<Plan> find_plan(std::string_view name) {
    for (const Plan &plan : plan_catalog()) {
        if (plan.name == name) {
            return plan;
        }
    }
    if (name == "firstperson") {
        return first_person_plan();
    }
    return std::nullopt;
}

Plan plan_from_json(const json &config) {
    Plan plan;
    plan.name = config.at("name").get<std::string>();
    PersonMode mode = PersonMode::third_person;
    if (const std::string m = config.value("person_mode", "third_person"); m == "first_person") {
        mode = PersonMode::first_person;
    } else if (m != "third_person") {
        throw PlanError{fmt::format("unknown person_mode '{}'", m)};
    }
    const json overrides = config.value("prompts", json::object());
    for (const json &item : config.at("stages")) {
        const std::string stage_text = item.is_string() ? item.get<std::string>() : item.at("name").get<std::string>();
        const auto name = parse_stage_name(stage_text);
        if (!name) {
            throw PlanError{fmt::format("unknown stage '{}' in plan '{}'", stage_text, plan.name)};
        }
        Stage stage = make_stage(*name, mode);
        if (item.is_object() && item.contains("prompt")) {
            stage.prompt_template = item["prompt"].get<std::string>();
        } else if (overrides.contains(stage_text)) {
            stage.prompt_template = overrides[stage_text].get<std::string>();
        }
        plan.stages.push_back(std::move(stage));
    }
    if (const auto violations = validate_plan(plan); !violations.empty()) {
        std::string joined;
        for (const auto &v : violations) {
            joined += (joined.empty() ? "" : "; ") + v;
        }
        throw PlanError{fmt::format("invalid plan '{}': {}", plan.name, joined)};
    }
    return plan;
}

Plan load_plan_file(const std::filesystem::path &path) {
    std::ifstream in{path};
    if (!in) {
        throw PlanError{fmt::format("cannot open plan file '{}'", path.string())};
    }
    return plan_from_json(json::parse(in));
}

std::vector<ChatMessage> render_stage(const Stage &stage, const Anecdote &anecdote, std::span<const ChatMessage> history) {
    const bool first = history.empty();
    std::string prompt = stage.person_mode == PersonMode::first_person ? first_person(stage.prompt_template) : stage.prompt_template;
    const bool has_placeholder = prompt.find(anecdote_placeholder) != std::string::npos;
    if (!first && has_placeholder) {
        throw PlanError{fmt::format("anecdote placeholder in non-first stage '{}'", to_string(stage.name))};
    }

    std::vector<ChatMessage> messages{history.begin(), history.end()};
    if (first) {
        std::string content = has_placeholder ? replace_all(prompt, anecdote_placeholder, anecdote.text) : anecdote.text + "\n\n" + prompt;
        messages.push_back(ChatMessage{Role::user, std::move(content)});
    } else {
        messages.push_back(ChatMessage{Role::user, std::move(prompt)});
    }
    return messages;
}

std::optional<std::string> Transcript::final_response() const {
    if (!complete || records.empty()) {
        return std::nullopt;
    }
    return records.back().response;
}

json to_json(const Transcript &transcript, bool include_timestamps) {
    json records = json::array();
    for (const StageRecord &r : transcript.records) {
        json record{{"stage", r.stage}, {"prompt", r.prompt}, {"response", r.response}};
        if (include_timestamps) {
            record["started_at"] = r.started_at;
            record["finished_at"] = r.finished_at;
        }
        records.push_back(std::move(record));
    }
    return json{{"anecdote_id", transcript.anecdote_id},
                {"plan", transcript.plan},
                {"model", transcript.model},
                {"seed", transcript.seed},
                {"complete", transcript.complete},
                {"failure", transcript.failure ? json(*transcript.failure) : json(nullptr)},
                {"records", std::move(records)}};
}

Transcript transcript_from_json(const json &record) {
    Transcript t;
    t.anecdote_id = record.at("anecdote_id").get<std::string>();
    t.plan = record.at("plan").get<std::string>();
    t.model = record.value("model", "");
    t.seed = record.at("seed").get<std::int64_t>();
    t.complete = record.at("complete").get<bool>();
    if (record.contains("failure") && !record["failure"].is_null()) {
        t.failure = record["failure"].get<std::string>();
    }
    for (const json &r : record.at("records")) {
        t.records.push_back(StageRecord{r.at("stage").get<std::string>(), r.at("prompt").get<std::string>(), r.at("response").get<std::string>(),
                                        r.value("started_at", ""), r.value("finished_at", "")});
    }
    return t;
}

Transcript run_plan(const Plan &plan, const Anecdote &anecdote, Gateway &gateway, const RunSettings &settings) {
    if (const auto violations = validate_plan(plan); !violations.empty()) {
        throw PlanError{fmt::format("invalid plan '{}': {}", plan.name, violations.front())};
    }
    Transcript transcript{anecdote.id, plan.name, settings.model, settings.seed, {}, false, std::nullopt};
    std::vector<ChatMessage> history;
    for (const Stage &stage : plan.stages) {
        CompletionRequest request{settings.model, render_stage(stage, anecdote, history), settings.temperature, settings.seed,
                                  settings.max_tokens, std::string{to_string(stage.name)}};
        StageRecord record{std::string{to_string(stage.name)}, request.messages.back().content, {}, utc_now(), {}};
        try {
            record.response = gateway.complete(request).text;
        } catch (const std::exception &e) {
            transcript.failure = fmt::format("stage '{}': {}", record.stage, e.what());
            return transcript;
        }
        record.finished_at = utc_now();
        history = std::move(request.messages);
        // an empty reply is recorded verbatim; the history needs non-empty content
        history.push_back(ChatMessage{Role::assistant, record.response.empty() ? std::string{" "} : record.response});
        transcript.records.push_back(std::move(record));
    }
    transcript.complete = true;
    return transcript;
}

TranscriptStore::TranscriptStore(std::filesystem::path path) : path_{std::move(path)} {
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
}

void TranscriptStore::append(const Transcript &transcript) {
    const std::string line = to_json(transcript).dump() + "\n";
    std::lock_guard lock{mutex_};
    std::ofstream out{path_, std::ios::app};
    if (!out) {
        throw std::runtime_error{fmt::format("cannot append to transcript store '{}'", path_.string())};
    }
    out << line;
}

}  // namespace judgebench
