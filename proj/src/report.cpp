#include "judgebench/report.hpp"

#include "fmt/format.h"

#include <cmath>
#include <fstream>

namespace judgebench {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> metric_header{"precision", "recall", "macro_f1", "abstention"};

std::string count(std::size_t n) { return std::to_string(n); }

std::string mean_std(const SeedAggregate &agg) { return fmt::format("{} ({})", fixed2(agg.mean), fixed2(agg.stddev)); }

std::string csv_field(const std::string &field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string md_cell(const std::string &cell) {
    std::string out;
    for (const char c : cell) {
        if (c == '|') {
            out += "\\|";
        } else if (c == '\n') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

std::vector<std::string> group_row(const Group &g) {
    std::vector<std::string> row{g.label, count(g.size)};
    if (!g.report) {
        row.resize(row.size() + 9);
        return row;
    }
    const ClassificationReport &r = *g.report;
    for (const double v : {r.macro_precision, r.macro_recall, r.macro_f1, r.abstention_rate}) {
        row.push_back(fixed2(v));
    }
    for (const Judgment j : all_judgments) {
        row.push_back(fixed2((*g.predicted)[j]));
    }
    row.push_back(fixed2((*g.consensus)[Judgment::nta]));
    row.push_back(fixed2((*g.consensus)[Judgment::yta]));
    return row;
}

std::vector<std::string> group_header(std::string first) {
    std::vector<std::string> h{std::move(first), "n"};
    h.insert(h.end(), metric_header.begin(), metric_header.end());
    for (const char *c : {"pred_NTA", "pred_YTA", "pred_nan", "consensus_NTA", "consensus_YTA"}) {
        h.emplace_back(c);
    }
    return h;
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) {
        throw ReportError{fmt::format("cannot write '{}'", path.string())};
    }
    out << content;
    out.flush();
    if (!out) {
        throw ReportError{fmt::format("failed while writing '{}'", path.string())};
    }
}

}  // namespace

std::string fixed2(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    // Absorb binary representation error so that 0.125 and 42.025 round up.
    const double scaled = value * 100.0;
    const double nudge = std::nextafter(std::abs(scaled), INFINITY) - std::abs(scaled);
    double rounded = std::round(scaled + std::copysign(8.0 * nudge, scaled)) / 100.0;
    if (rounded == 0.0) {
        rounded = 0.0;
    }
    return fmt::format("{:.2f}", rounded);
}

std::string_view table_label(Judgment j) noexcept {
    switch (j) {
    case Judgment::nta:
        return "NTA";
    case Judgment::yta:
        return "YTA";
    case Judgment::abstain:
        return "nan";
    }
    return "nan";
}

std::string Table::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + csv_field(cells[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto &row : rows) {
        line(row);
    }
    return out;
}

std::string Table::to_markdown() const {
    std::string out = fmt::format("## {}\n\n", title);
    auto line = [&](const std::vector<std::string> &cells) {
        out += '|';
        for (const std::string &c : cells) {
            out += ' ' + md_cell(c) + " |";
        }
        out += '\n';
    };
    line(header);
    out += '|';
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += " --- |";
    }
    out += '\n';
    for (const auto &row : rows) {
        line(row);
    }
    for (const std::string &note : notes) {
        out += '\n' + note + '\n';
    }
    return out + '\n';
}

Table headline_table(std::span<const HeadlineReport> reports) {
    Table t;
    t.name = "headline";
    t.title = "Judgment alignment";
    t.header = {"plan", "model", "seeds", "precision", "recall", "macro_f1", "abstention", "baseline", "t", "p", "significant"};
    for (const HeadlineReport &r : reports) {
        std::vector<std::string> row{r.plan, r.model, count(r.seeds.size()), mean_std(r.precision), mean_std(r.recall),
                                     mean_std(r.macro_f1), mean_std(r.abstention)};
        if (r.vs_baseline) {
            row.push_back(r.baseline_plan.value_or(""));
            row.push_back(fixed2(r.vs_baseline->t));
            row.push_back(fixed2(r.vs_baseline->p));
            row.push_back(r.vs_baseline->significant ? "yes" : "no");
        } else {
            row.resize(row.size() + 4);
        }
        t.rows.push_back(std::move(row));
    }
    t.notes.push_back("Values are mean (sample standard deviation) over seeds, in percent. "
                      "Significance is a two-sided Welch t-test on per-seed macro-F1 at p < 0.05.");
    return t;
}

Table label_distribution_table(std::span<const DistributionRow> rows) {
    Table t;
    t.name = "label_distribution";
    t.title = "Label distribution";
    t.header = {"source", "n", "NTA", "YTA", "nan"};
    for (const DistributionRow &r : rows) {
        std::vector<std::string> row{r.source, count(r.distribution.total)};
        for (const Judgment j : all_judgments) {
            row.push_back(fixed2(r.distribution[j]));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table ablation_table(std::span<const AblationRow> rows) {
    Table t;
    t.name = "ablations";
    t.title = "Stage ablations";
    t.header = {"plan", "macro_f1", "macro_f1_std"};
    for (const AblationRow &r : rows) {
        t.rows.push_back({r.plan, fixed2(r.macro_f1.mean), fixed2(r.macro_f1.stddev)});
    }
    return t;
}

Table grouped_table(const GroupedReport &report) {
    Table t;
    t.name = std::string{to_string(report.key)};
    t.title = fmt::format("Grouped by {}", to_string(report.key));
    t.header = group_header("group");
    for (const Group &g : report.groups) {
        t.rows.push_back(group_row(g));
    }
    t.notes.push_back(fmt::format("{} entries grouped, {} excluded for lacking the feature.", report.population, report.excluded));
    return t;
}

Table gender_study_table(const GenderStudy &study) {
    Table t;
    t.name = "gender";
    t.title = "Narrator gender (original and swapped stories)";
    t.header = group_header("narrator");
    t.rows.push_back(group_row(study.male));
    t.rows.push_back(group_row(study.female));
    t.rows.push_back({"consensus", count(study.population), "", "", "", "", fixed2(study.consensus[Judgment::nta]),
                      fixed2(study.consensus[Judgment::yta]), fixed2(study.consensus[Judgment::abstain]), "", ""});
    t.notes.push_back(fmt::format("{} anecdotes, each judged once with a male and once with a female narrator.", study.population));
    return t;
}

Table transition_table(const TransitionMatrix &matrix) {
    Table t;
    t.name = "transitions";
    t.title = "Verdict transitions after the gender swap";
    t.header = {"original", "to_NTA", "to_YTA", "to_nan", "total", "pct_NTA", "pct_YTA", "pct_nan"};
    std::size_t grand = 0;
    for (const Judgment from : all_judgments) {
        std::vector<std::string> row{std::string{table_label(from)}};
        for (const Judgment to : all_judgments) {
            row.push_back(count(matrix.at(from, to)));
        }
        row.push_back(count(matrix.row_total(from)));
        grand += matrix.row_total(from);
        for (const Judgment to : all_judgments) {
            row.push_back(fixed2(matrix.percent(from, to)));
        }
        t.rows.push_back(std::move(row));
    }
    std::vector<std::string> totals{"total"};
    for (const Judgment to : all_judgments) {
        totals.push_back(count(matrix.column_total(to)));
    }
    totals.push_back(count(grand));
    totals.resize(t.header.size());
    t.rows.push_back(std::move(totals));
    t.notes.push_back("Rows are verdicts on the original story, columns verdicts on its swapped version; percentages are per row.");
    return t;
}

Table rationale_table(std::span<const RationaleRow> rows) {
    Table t;
    t.name = "rationales";
    t.title = "Rationale similarity to community explanations";
    t.header = {"source", "R1", "R2", "RL", "B1", "B2", "B3", "M"};
    bool embeddings = false;
    for (const RationaleRow &r : rows) {
        embeddings = embeddings || r.embedding.has_value();
    }
    if (embeddings) {
        for (const char *c : {"BS-P", "BS-R", "BS-F1", "BLT", "BaS"}) {
            t.header.emplace_back(c);
        }
    }
    for (const RationaleRow &r : rows) {
        const TextScores &s = r.ngram;
        std::vector<std::string> row{r.source};
        for (const double v : {s.rouge1_f, s.rouge2_f, s.rougeL_f, s.bleu1, s.bleu2, s.bleu3, s.meteor}) {
            row.push_back(fixed2(v));
        }
        if (embeddings) {
            if (r.embedding) {
                const EmbedScores e = scaled_for_report(*r.embedding);
                auto opt = [](const std::optional<double> &v) { return v ? fixed2(*v) : std::string{}; };
                row.push_back(e.bertscore ? fixed2(e.bertscore->precision) : "");
                row.push_back(e.bertscore ? fixed2(e.bertscore->recall) : "");
                row.push_back(e.bertscore ? fixed2(e.bertscore->f1) : "");
                row.push_back(opt(e.bleurt));
                row.push_back(opt(e.bartscore));
            } else {
                row.resize(t.header.size());
            }
        }
        t.rows.push_back(std::move(row));
    }
    t.notes.push_back("N-gram scores are F-measures in percent, maximised over references; METEOR uses exact matches only.");
    if (embeddings) {
        t.notes.push_back("Embedding scores are scaled by 100 (BARTScore by 10).");
    }
    return t;
}

const std::vector<std::string> &conventions() {
    static const std::vector<std::string> list{
        "Tokens: whitespace split, leading and trailing punctuation split off, contractions split at the apostrophe.",
        "Age bins: <20, 20-30 (both ends inclusive), >30. Majority buckets: [70,90), [90,100), 100.",
        "Length quartiles: stable order by (token count, id); earlier quartiles take the remainder.",
        "Prompts carry no system message; each stage extends one conversation that holds the anecdote once.",
        "Failed anecdotes keep their partial transcripts and count as abstentions.",
        "Verdicts: the earliest YTA/NTA acronym or lexicon phrase wins; \"not\" within three words flips an acronym.",
        "Rationale: the whole final response.",
        "Abstentions are false negatives for the gold class and false positives for neither class.",
        "ROUGE and METEOR take the maximum over references; BLEU clips jointly across references, smooths zero counts "
        "with 1e-9, and averages sentence scores.",
        "Scores are kept at full precision and rounded half-up to two decimals only here.",
        "Grouped analyses use the verdicts of the median macro-F1 seed.",
    };
    return list;
}

void write_report(const fs::path &dir, std::span<const Table> tables, const ReportMeta &meta) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ReportError{fmt::format("cannot create report directory '{}'", dir.string())};
    }

    std::string summary = "# Judgment alignment report\n\n";
    summary += fmt::format("Harness version {}, verdict lexicon version {}.\n\n", harness_version, verdict_lexicon_version);
    summary += "## Configuration\n\n```json\n" + meta.configuration.dump(2) + "\n```\n\n";
    summary += "## Conventions\n\n";
    for (const std::string &c : conventions()) {
        summary += "- " + c + '\n';
    }
    summary += '\n';
    for (const Table &t : tables) {
        write_file(dir / (t.name + ".csv"), t.to_csv());
        summary += t.to_markdown();
    }
    write_file(dir / "summary.md", summary);

    nlohmann::json info{{"generated_at", meta.generated_at}, {"harness_version", harness_version}, {"tables", nlohmann::json::array()}};
    for (const Table &t : tables) {
        info["tables"].push_back(t.name + ".csv");
    }
    write_file(dir / "run_info.json", info.dump(2) + '\n');
}

}  // namespace judgebench
