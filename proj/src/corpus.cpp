#include "judgebench/corpus.hpp"

#include "judgebench/strings.hpp"

#include "fmt/format.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace judgebench {

using nlohmann::json;

std::optional<Judgment> parse_judgment(std::string_view text) {
    const std::string lower = to_lower(trim(text));
    if (lower == "nta") {
        return Judgment::nta;
    }
    if (lower == "yta") {
        return Judgment::yta;
    }
    if (lower == "abstain" || lower == "nan") {
        return Judgment::abstain;
    }
    return std::nullopt;
}

std::optional<RawLabel> parse_raw_label(std::string_view text) {
    const std::string lower = to_lower(trim(text));
    if (lower == "nta") return RawLabel::nta;
    if (lower == "yta") return RawLabel::yta;
    if (lower == "esh") return RawLabel::esh;
    if (lower == "nah") return RawLabel::nah;
    if (lower == "info") return RawLabel::info;
    return std::nullopt;
}

std::optional<Judgment> map_raw_label(RawLabel raw) noexcept {
    switch (raw) {
        case RawLabel::nta:
        case RawLabel::nah:
            return Judgment::nta;
        case RawLabel::yta:
        case RawLabel::esh:
            return Judgment::yta;
        case RawLabel::info:
            return std::nullopt;
    }
    return std::nullopt;
}

CorpusError::CorpusError(std::size_t line, const std::string &message) :
    std::runtime_error{line == 0 ? message : fmt::format("line {}: {}", line, message)},
    line_{line} {}

namespace {

const std::unordered_set<std::string> entry_keys{"id", "text", "title", "label", "majority_pct", "rationales", "features"};
const std::unordered_set<std::string> feature_keys{"gender", "age", "role", "relationship", "other_party"};

std::optional<std::string> optional_string(const json &object, const char *key) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw CorpusError{0, fmt::format("field '{}' must be a string or null", key)};
    }
    return it->get<std::string>();
}

const json &required(const json &object, const char *key) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw CorpusError{0, fmt::format("missing required field '{}'", key)};
    }
    return *it;
}

}  // namespace

FeatureAnnotations features_from_json(const json &object) {
    if (!object.is_object()) {
        throw CorpusError{0, "field 'features' must be an object"};
    }
    FeatureAnnotations features;
    if (const auto gender = optional_string(object, "gender")) {
        if (*gender == "male") {
            features.gender = Gender::male;
        } else if (*gender == "female") {
            features.gender = Gender::female;
        } else if (*gender == "unknown") {
            features.gender = Gender::unknown;
        } else {
            throw CorpusError{0, fmt::format("features.gender must be male|female|unknown, got '{}'", *gender)};
        }
    }
    if (const auto it = object.find("age"); it != object.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            throw CorpusError{0, "features.age must be an integer or null"};
        }
        const auto age = it->get<long long>();
        if (age < 0 || age > max_plausible_age) {
            throw CorpusError{0, fmt::format("features.age {} outside [0, {}]", age, max_plausible_age)};
        }
        features.age = static_cast<int>(age);
    }
    features.narrator_role = optional_string(object, "role");
    features.relationship_type = optional_string(object, "relationship");
    features.other_party = optional_string(object, "other_party");
    for (const auto &[key, value] : object.items()) {
        if (!feature_keys.contains(key)) {
            features.extras[key] = value;
        }
    }
    return features;
}

json to_json(const FeatureAnnotations &features) {
    json object = features.extras.is_object() ? features.extras : json::object();
    object["gender"] = std::string{to_string(features.gender)};
    object["age"] = features.age ? json(*features.age) : json(nullptr);
    object["role"] = features.narrator_role ? json(*features.narrator_role) : json(nullptr);
    object["relationship"] = features.relationship_type ? json(*features.relationship_type) : json(nullptr);
    object["other_party"] = features.other_party ? json(*features.other_party) : json(nullptr);
    return object;
}

CorpusEntry entry_from_json(const json &record) {
    if (!record.is_object()) {
        throw CorpusError{0, "record is not a JSON object"};
    }
    CorpusEntry entry;

    const json &id = required(record, "id");
    if (!id.is_string() || id.get<std::string>().empty()) {
        throw CorpusError{0, "field 'id' must be a non-empty string"};
    }
    entry.anecdote.id = id.get<std::string>();

    const json &text = required(record, "text");
    if (!text.is_string() || trim(text.get<std::string>()).empty()) {
        throw CorpusError{0, "field 'text' must be a non-empty string"};
    }
    entry.anecdote.text = text.get<std::string>();
    entry.anecdote.title = optional_string(record, "title");

    const json &label = required(record, "label");
    const auto judgment = label.is_string() ? parse_judgment(label.get<std::string>()) : std::nullopt;
    if (!judgment || *judgment == Judgment::abstain) {
        throw CorpusError{0, "field 'label' must be \"NTA\" or \"YTA\""};
    }
    entry.consensus.label = *judgment;

    const json &pct = required(record, "majority_pct");
    if (!pct.is_number()) {
        throw CorpusError{0, "field 'majority_pct' must be a number"};
    }
    entry.consensus.majority_pct = pct.get<double>();
    if (!(entry.consensus.majority_pct >= min_majority_pct && entry.consensus.majority_pct <= 100.0)) {
        throw CorpusError{0, fmt::format("majority_pct {} outside [70, 100]", entry.consensus.majority_pct)};
    }

    const json &rationales = required(record, "rationales");
    if (!rationales.is_array() || rationales.empty() || rationales.size() > max_reference_rationales) {
        throw CorpusError{0, "field 'rationales' must be an array of 1 to 3 strings"};
    }
    for (const json &r : rationales) {
        if (!r.is_string()) {
            throw CorpusError{0, "field 'rationales' must contain only strings"};
        }
        entry.consensus.reference_rationales.push_back(r.get<std::string>());
    }

    if (const auto it = record.find("features"); it != record.end() && !it->is_null()) {
        entry.features = features_from_json(*it);
    }

    for (const auto &[key, value] : record.items()) {
        if (!entry_keys.contains(key)) {
            entry.extras[key] = value;
        }
    }
    return entry;
}

json to_json(const CorpusEntry &entry) {
    json record = entry.extras.is_object() ? entry.extras : json::object();
    record["id"] = entry.anecdote.id;
    record["text"] = entry.anecdote.text;
    if (entry.anecdote.title) {
        record["title"] = *entry.anecdote.title;
    }
    record["label"] = std::string{to_string(entry.consensus.label)};
    record["majority_pct"] = entry.consensus.majority_pct;
    record["rationales"] = entry.consensus.reference_rationales;
    if (entry.features) {
        record["features"] = to_json(*entry.features);
    }
    return record;
}

std::vector<CorpusEntry> read_corpus(std::istream &in) {
    std::vector<CorpusEntry> entries;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error &e) {
            throw CorpusError{line_no, fmt::format("malformed JSON: {}", e.what())};
        }
        try {
            entries.push_back(entry_from_json(record));
        } catch (const CorpusError &e) {
            throw CorpusError{line_no, e.what()};
        }
        if (!seen.insert(entries.back().anecdote.id).second) {
            throw CorpusError{line_no, fmt::format("duplicate id '{}'", entries.back().anecdote.id)};
        }
    }
    return entries;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path &path) {
    std::ifstream in{path};
    if (!in) {
        throw CorpusError{0, fmt::format("cannot open corpus file '{}'", path.string())};
    }
    return read_corpus(in);
}

void write_corpus(std::ostream &out, std::span<const CorpusEntry> entries) {
    for (const CorpusEntry &entry : entries) {
        out << to_json(entry).dump() << '\n';
    }
}

void save_corpus(const std::filesystem::path &path, std::span<const CorpusEntry> entries) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out{path, std::ios::trunc};
    if (!out) {
        throw CorpusError{0, fmt::format("cannot write corpus file '{}'", path.string())};
    }
    write_corpus(out, entries);
}

std::vector<CorpusEntry> ingest_raw(std::istream &in, IngestStats &stats) {
    std::vector<CorpusEntry> entries;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        ++stats.read;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error &e) {
            throw CorpusError{line_no, fmt::format("malformed JSON: {}", e.what())};
        }
        if (!record.is_object() || !record.contains("label") || !record["label"].is_string()) {
            throw CorpusError{line_no, "missing required field 'label'"};
        }
        const auto raw = parse_raw_label(record["label"].get<std::string>());
        if (!raw) {
            throw CorpusError{line_no, fmt::format("unknown raw label '{}'", record["label"].get<std::string>())};
        }
        const auto mapped = map_raw_label(*raw);
        if (!mapped) {
            ++stats.excluded_info;
            continue;
        }
        if (!record.contains("majority_pct") || !record["majority_pct"].is_number()) {
            throw CorpusError{line_no, "missing required field 'majority_pct'"};
        }
        if (record["majority_pct"].get<double>() < min_majority_pct) {
            ++stats.below_majority;
            continue;
        }
        auto rationales = record.value("rationales", json::array());
        if (!rationales.is_array() || rationales.empty()) {
            ++stats.missing_rationales;
            continue;
        }
        if (rationales.size() > max_reference_rationales) {
            rationales.erase(rationales.begin() + max_reference_rationales, rationales.end());
        }
        record["rationales"] = rationales;
        record["raw_label"] = record["label"];
        record["label"] = std::string{to_string(*mapped)};
        try {
            entries.push_back(entry_from_json(record));
        } catch (const CorpusError &e) {
            throw CorpusError{line_no, e.what()};
        }
        if (!seen.insert(entries.back().anecdote.id).second) {
            throw CorpusError{line_no, fmt::format("duplicate id '{}'", entries.back().anecdote.id)};
        }
        ++stats.kept;
    }
    return entries;
}

}  // namespace judgebench
