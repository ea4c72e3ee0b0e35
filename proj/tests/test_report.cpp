#include "doctest.h"
#include "helpers.hpp"

#include "judgebench/report.hpp"

#include <fstream>
#include <limits>
#include <sstream>

using namespace judgebench;

namespace {

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in{path, std::ios::binary};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table small_table() {
    Table t;
    t.name = "demo";
    t.title = "Demo";
    t.header = {"a", "b"};
    t.rows = {{"x,y", "say \"hi\""}, {"pipe|cell", "2"}};
    t.notes = {"A note."};
    return t;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("two-decimal rounding is half-up") {
    CHECK(fixed2(0.125) == "0.13");
    CHECK(fixed2(42.025) == "42.03");
    CHECK(fixed2(45.665) == "45.67");
    CHECK(fixed2(1.005) == "1.01");
    CHECK(fixed2(2.675) == "2.68");
    CHECK(fixed2(-0.125) == "-0.13");
    CHECK(fixed2(0.124) == "0.12");
    CHECK(fixed2(100.0) == "100.00");
    CHECK(fixed2(-0.001) == "0.00");
    CHECK(fixed2(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(fixed2(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("table labels") {
    CHECK(table_label(Judgment::nta) == "NTA");
    CHECK(table_label(Judgment::abstain) == "nan");
}

TEST_CASE("csv quoting") {
    CHECK(small_table().to_csv() == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\npipe|cell,2\n");
}

TEST_CASE("markdown rendering") {
    const std::string md = small_table().to_markdown();
    CHECK(md.starts_with("## Demo\n\n| a | b |\n| --- | --- |\n"));
    CHECK(md.find("pipe\\|cell") != std::string::npos);
    CHECK(md.find("\nA note.\n") != std::string::npos);
}

TEST_CASE("headline table formats mean and deviation") {
    HeadlineReport h;
    h.plan = "socialgaze";
    h.model = "m";
    h.seeds = {1, 2};
    const std::vector<double> f1{60.0, 61.0};
    h.precision = aggregate_seeds(f1);
    h.recall = aggregate_seeds(f1);
    h.macro_f1 = aggregate_seeds(f1);
    h.abstention = aggregate_seeds(std::vector<double>{0.0, 0.0});
    h.baseline_plan = "vanilla";
    h.vs_baseline = SignificanceResult{2.5, 4.0, 0.0312, true};
    const std::vector<HeadlineReport> reports{h};
    const Table t = headline_table(reports);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == std::vector<std::string>{"socialgaze", "m", "2", "60.50 (0.71)", "60.50 (0.71)", "60.50 (0.71)", "0.00 (0.00)",
                                                "vanilla", "2.50", "0.03", "yes"});
}

TEST_CASE("grouped table leaves empty groups blank") {
    GroupedReport r;
    r.key = GroupingKey::majority_bucket;
    r.groups.push_back(Group{"70-90", 0, std::nullopt, std::nullopt, std::nullopt});
    const Table t = grouped_table(r);
    CHECK(t.name == "majority");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].size() == t.header.size());
    CHECK(t.rows[0][1] == "0");
    CHECK(t.rows[0][2].empty());
}

TEST_CASE("transition table totals") {
    TransitionMatrix m;
    m.counts[0] = {1, 1, 0};
    m.counts[1] = {1, 0, 0};
    const Table t = transition_table(m);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0] == std::vector<std::string>{"NTA", "1", "1", "0", "2", "50.00", "50.00", "0.00"});
    CHECK(t.rows[3][0] == "total");
    CHECK(t.rows[3][4] == "3");
}

TEST_CASE("rationale table adds embedding columns on demand") {
    std::vector<RationaleRow> rows{{"vanilla", TextScores{}, std::nullopt}};
    CHECK(rationale_table(rows).header.size() == 8);

    EmbedScores e;
    e.bertscore = EmbedScores::BertScore{0.9, 0.8, 0.85};
    e.bleurt = -0.2;
    e.bartscore = -3.0;
    rows.push_back({"socialgaze", TextScores{}, e});
    const Table t = rationale_table(rows);
    CHECK(t.header.size() == 13);
    CHECK(t.rows[0].size() == 13);
    CHECK(t.rows[1][8] == "90.00");
    CHECK(t.rows[1][11] == "-20.00");
    CHECK(t.rows[1][12] == "-30.00");
}

TEST_CASE("reports are written deterministically") {
    testing::TempDir dir;
    const std::vector<Table> tables{small_table()};
    ReportMeta meta;
    meta.configuration = {{"model", "m"}};
    meta.generated_at = "2026-01-01T00:00:00Z";
    write_report(dir.path() / "a", tables, meta);
    meta.generated_at = "2026-02-02T00:00:00Z";
    write_report(dir.path() / "b", tables, meta);
    for (const char *file : {"demo.csv", "summary.md"}) {
        CHECK(slurp(dir.path() / "a" / file) == slurp(dir.path() / "b" / file));
    }
    CHECK(slurp(dir.path() / "a" / "run_info.json") != slurp(dir.path() / "b" / "run_info.json"));
    const std::string summary = slurp(dir.path() / "a" / "summary.md");
    CHECK(summary.find(std::string{harness_version}) != std::string::npos);
    CHECK(summary.find(conventions().front()) != std::string::npos);
}

TEST_CASE("unwritable report directory") {
    testing::TempDir dir;
    {
        std::ofstream blocker{dir.path() / "file"};
    }
    const std::vector<Table> tables{small_table()};
    CHECK_THROWS_AS(write_report(dir.path() / "file" / "sub", tables, ReportMeta{}), ReportError);
}

}  // TEST_SUITE
