#include "judgebench/verdict.hpp"

#include "judgebench/strings.hpp"

#include <cctype>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace judgebench {

namespace {

/// Lowercased, whitespace-collapsed view of the response, with a map back to
/// byte offsets in the original text.
struct Normalized {
    std::string text;
    std::vector<std::size_t> origin;  // origin[i] = offset in source of text[i]; one extra entry for end
};

Normalized normalize(std::string_view source) {
    Normalized n;
    n.text.reserve(source.size());
    n.origin.reserve(source.size() + 1);
    bool pending_space = false;
    std::size_t space_origin = 0;
    for (std::size_t i = 0; i < source.size();) {
        const auto c = static_cast<unsigned char>(source[i]);
        if (std::isspace(c)) {
            if (!pending_space) {
                space_origin = i;
            }
            pending_space = true;
            ++i;
            continue;
        }
        if (pending_space) {
            if (!n.text.empty()) {
                n.text.push_back(' ');
                n.origin.push_back(space_origin);
            }
            pending_space = false;
        }
        // U+2018 / U+2019 -> '
        if (c == 0xE2 && i + 2 < source.size() && static_cast<unsigned char>(source[i + 1]) == 0x80 &&
            (static_cast<unsigned char>(source[i + 2]) == 0x98 || static_cast<unsigned char>(source[i + 2]) == 0x99)) {
            n.text.push_back('\'');
            n.origin.push_back(i);
            i += 3;
            continue;
        }
        // "ass-hole" -> "asshole"
        if (c == '-' && n.text.size() >= 3 && n.text.ends_with("ass") && i + 4 < source.size() &&
            to_lower(source.substr(i + 1, 4)) == "hole") {
            ++i;
            continue;
        }
        n.text.push_back(static_cast<char>(std::tolower(c)));
        n.origin.push_back(i);
        ++i;
    }
    n.origin.push_back(source.size());
    return n;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool bounded(std::string_view text, std::size_t pos, std::size_t len) {
    const bool left = pos == 0 || !is_word_char(text[pos - 1]);
    const bool right = pos + len >= text.size() || !is_word_char(text[pos + len]);
    return left && right;
}

struct Evidence {
    std::size_t order;  // reading-order position: the label token itself
    std::size_t begin;  // normalized offsets of the reported span
    std::size_t end;
    int kind;  // 0 = acronym, 1 = phrase
    Judgment label;
};

Judgment flip(Judgment j) { return j == Judgment::nta ? Judgment::yta : Judgment::nta; }

/// Start offset of a negation word among the `negation_window` words before `pos`.
std::optional<std::size_t> negation_before(std::string_view text, std::size_t pos) {
    std::size_t cursor = pos;
    for (std::size_t words = 0; words < negation_window; ++words) {
        // skip separators (spaces, punctuation other than apostrophes)
        while (cursor > 0 && !is_word_char(text[cursor - 1]) && text[cursor - 1] != '\'') {
            --cursor;
        }
        if (cursor == 0) {
            return std::nullopt;
        }
        const std::size_t word_end = cursor;
        while (cursor > 0 && (is_word_char(text[cursor - 1]) || text[cursor - 1] == '\'')) {
            --cursor;
        }
        const std::string_view word = text.substr(cursor, word_end - cursor);
        if (word == "not") {
            return cursor;
        }
    }
    return std::nullopt;
}

void find_acronyms(std::string_view text, std::vector<Evidence> &found) {
    for (const auto &[acronym, label] : {std::pair{std::string_view{"yta"}, Judgment::yta}, std::pair{std::string_view{"nta"}, Judgment::nta}}) {
        for (std::size_t pos = text.find(acronym); pos != std::string_view::npos; pos = text.find(acronym, pos + 1)) {
            if (!bounded(text, pos, acronym.size())) {
                continue;
            }
            if (const auto negation = negation_before(text, pos)) {
                found.push_back(Evidence{pos, *negation, pos + acronym.size(), 0, flip(label)});
            } else {
                found.push_back(Evidence{pos, pos, pos + acronym.size(), 0, label});
            }
        }
    }
}

void find_phrases(std::string_view text, std::vector<Evidence> &found) {
    for (const LexiconPhrase &phrase : verdict_phrases) {
        for (std::size_t pos = text.find(phrase.text); pos != std::string_view::npos; pos = text.find(phrase.text, pos + 1)) {
            if (bounded(text, pos, phrase.text.size())) {
                found.push_back(Evidence{pos, pos, pos + phrase.text.size(), 1, phrase.label});
            }
        }
    }
}

}  // namespace

ParsedVerdict parse_verdict(std::string_view text) {
    const std::string_view body = trim(text);
    ParsedVerdict parsed;
    parsed.rationale = std::string{body};

    const Normalized normalized = normalize(body);
    std::vector<Evidence> found;
    find_acronyms(normalized.text, found);
    find_phrases(normalized.text, found);
    if (found.empty()) {
        return parsed;
    }

    // earliest start wins; acronyms beat phrases at the same offset; longer span breaks remaining ties
    const Evidence *best = &found.front();
    for (const Evidence &e : found) {
        if (std::tuple{e.order, e.kind, -static_cast<long long>(e.end)} < std::tuple{best->order, best->kind, -static_cast<long long>(best->end)}) {
            best = &e;
        }
    }
    parsed.judgment = best->label;
    const std::size_t from = normalized.origin[best->begin];
    const std::size_t to = normalized.origin[best->end - 1] + 1;
    parsed.matched_evidence = std::string{body.substr(from, to - from)};
    return parsed;
}

LabelDistribution label_distribution(std::span<const Judgment> verdicts) {
    if (verdicts.empty()) {
        throw std::invalid_argument{"label distribution of an empty list is undefined"};
    }
    LabelDistribution d;
    d.total = verdicts.size();
    for (Judgment j : verdicts) {
        ++d.counts[index_of(j)];
    }
    for (std::size_t i = 0; i < d.counts.size(); ++i) {
        d.percent[i] = 100.0 * static_cast<double>(d.counts[i]) / static_cast<double>(d.total);
    }
    return d;
}

}  // namespace judgebench
