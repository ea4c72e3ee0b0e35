#include "judgebench/tokenize.hpp"

#include "judgebench/strings.hpp"

#include <cctype>

namespace judgebench {

namespace {

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string normalize_apostrophes(std::string_view text) {
    // U+2018 and U+2019 in UTF-8
    std::string out = replace_all(text, "\xE2\x80\x99", "'");
    return replace_all(out, "\xE2\x80\x98", "'");
}

void split_contraction(std::string_view core, std::vector<std::string> &tokens) {
    const std::size_t apostrophe = core.find('\'');
    if (apostrophe == std::string_view::npos || apostrophe == 0) {
        tokens.emplace_back(core);
        return;
    }
    if (core.size() > 3) {
        const std::string tail = to_lower(core.substr(core.size() - 3));
        if (tail == "n't") {
            tokens.emplace_back(core.substr(0, core.size() - 3));
            tokens.emplace_back(core.substr(core.size() - 3));
            return;
        }
    }
    tokens.emplace_back(core.substr(0, apostrophe));
    tokens.emplace_back(core.substr(apostrophe));
}

void split_chunk(std::string_view chunk, std::vector<std::string> &tokens) {
    std::size_t begin = 0;
    while (begin < chunk.size() && is_punct(chunk[begin])) {
        tokens.emplace_back(1, chunk[begin]);
        ++begin;
    }
    std::size_t end = chunk.size();
    while (end > begin && is_punct(chunk[end - 1])) {
        --end;
    }
    if (end > begin) {
        split_contraction(chunk.substr(begin, end - begin), tokens);
    }
    for (std::size_t i = end; i < chunk.size(); ++i) {
        tokens.emplace_back(1, chunk[i]);
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    const std::string normalized = normalize_apostrophes(text);
    const std::string_view view{normalized};
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < view.size()) {
        while (i < view.size() && is_space(view[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < view.size() && !is_space(view[j])) {
            ++j;
        }
        if (j > i) {
            split_chunk(view.substr(i, j - i), tokens);
        }
        i = j;
    }
    return tokens;
}

std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> tokens = tokenize(text);
    for (std::string &t : tokens) {
        t = to_lower(t);
    }
    return tokens;
}

std::size_t token_count(std::string_view text) { return tokenize(text).size(); }

}  // namespace judgebench
