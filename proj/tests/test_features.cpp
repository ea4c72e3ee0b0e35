#include "doctest.h"
#include "helpers.hpp"

#include "judgebench/features.hpp"
#include "judgebench/scripted_provider.hpp"

using namespace judgebench;

TEST_SUITE("features") {

TEST_CASE("feature block in the example layout") {
    const FeatureAnnotations f = parse_feature_block("Type: Parent-Child\nNarrator: Child\nOther Party: Parents\nGender: Unsure\nAge: 18");
    CHECK(f.relationship_type == "Parent-Child");
    CHECK(f.narrator_role == "Child");
    CHECK(f.other_party == "Parents");
    CHECK(f.gender == Gender::unknown);
    CHECK(f.age == 18);
}

TEST_CASE("keys in any order with decoration") {
    const FeatureAnnotations f = parse_feature_block(
        "Sure! Here is what I found:\n"
        "1. **Age:** about 24 years old\n"
        "- gender: Female (stated in the title)\n"
        "* NARRATOR: Girlfriend\n"
        "Other party: Boyfriend\n"
        "type: Romantic\n");
    CHECK(f.relationship_type == "Romantic");
    CHECK(f.narrator_role == "Girlfriend");
    CHECK(f.other_party == "Boyfriend");
    CHECK(f.gender == Gender::female);
    CHECK(f.age == 24);
}

TEST_CASE("gender and age normalisation") {
    CHECK(parse_feature_block("Gender: Male").gender == Gender::male);
    CHECK(parse_feature_block("Gender: M").gender == Gender::unknown);
    CHECK(parse_feature_block("Gender: FEMALE").gender == Gender::female);
    CHECK_FALSE(parse_feature_block("Age: unknown").age.has_value());
    CHECK_FALSE(parse_feature_block("Age: 400").age.has_value());
    CHECK(parse_feature_block("Age: 0").age == 0);
    CHECK(parse_feature_block("Age: 130").age == 130);
    CHECK(parse_feature_block("Age: 17\nAge: 40").age == 17);
}

TEST_CASE("unparseable replies give empty annotations") {
    const FeatureAnnotations f = parse_feature_block("I cannot determine that.");
    CHECK(f == FeatureAnnotations{});
    CHECK(parse_feature_block("") == FeatureAnnotations{});
}

TEST_CASE("extraction sends the demographics prompt after the story") {
    auto provider = std::make_shared<ScriptedProvider>();
    provider->register_script("^My sister", "Type: Siblings\nNarrator: Brother\nOther Party: Sister\nGender: Male\nAge: 31");
    Gateway gateway{provider};
    const Anecdote a{"s1", "My sister took my car.", std::nullopt};
    const FeatureAnnotations f = extract_features(a, gateway, RunSettings{"m", 0.0, 1, std::nullopt});
    CHECK(f.narrator_role == "Brother");
    CHECK(f.gender == Gender::male);
    CHECK(f.age == 31);
}

TEST_CASE("swap replies") {
    const GenderSwapResult swapped = parse_swap_reply("New Story: I (28F) told my husband (30M) no.", "x1");
    CHECK(swapped.outcome == GenderSwapResult::Outcome::swapped);
    CHECK(swapped.text == "I (28F) told my husband (30M) no.");
    CHECK(swapped.source_id == "x1");
    CHECK_FALSE(swapped.warning.has_value());

    const GenderSwapResult na = parse_swap_reply("Not a heterosexual story", "x2");
    CHECK(na.outcome == GenderSwapResult::Outcome::not_applicable);
    CHECK_FALSE(na.warning.has_value());

    const GenderSwapResult odd = parse_swap_reply("I'd rather not.", "x3");
    CHECK(odd.outcome == GenderSwapResult::Outcome::not_applicable);
    CHECK(odd.warning.has_value());

    CHECK(parse_swap_reply("New Story:   ", "x4").warning.has_value());
}

TEST_CASE("swap prompt embeds the story") {
    auto provider = std::make_shared<ScriptedProvider>();
    provider->register_script("\"I (25M) forgot", "New Story: I (25F) forgot our anniversary.");
    Gateway gateway{provider};
    const GenderSwapResult r = gender_swap(Anecdote{"g1", "I (25M) forgot our anniversary.", std::nullopt}, gateway,
                                           RunSettings{"m", 0.0, 1, std::nullopt});
    CHECK(r.outcome == GenderSwapResult::Outcome::swapped);
    CHECK(r.text == "I (25F) forgot our anniversary.");
}

TEST_CASE("swapped entries keep the consensus and flip gender") {
    CorpusEntry original = testing::make_entry("abc", Judgment::yta, "I (25M) forgot.", 91.0);
    original.features = FeatureAnnotations{};
    original.features->gender = Gender::male;
    original.features->age = 25;

    GenderSwapResult swap;
    swap.outcome = GenderSwapResult::Outcome::swapped;
    swap.text = "I (25F) forgot.";
    const CorpusEntry s = make_swapped_entry(original, swap);
    CHECK(s.anecdote.id == "abc#swapped");
    CHECK(s.anecdote.text == "I (25F) forgot.");
    CHECK(s.consensus == original.consensus);
    CHECK(s.features->gender == Gender::female);
    CHECK(s.features->age == 25);
    CHECK(s.extras.at("swapped_from") == "abc");

    CHECK_THROWS_AS((void)make_swapped_entry(original, GenderSwapResult{}), std::invalid_argument);
}

TEST_CASE("ids and candidates") {
    CHECK(swapped_id("a") == "a#swapped");
    CHECK(original_id("a#swapped") == "a");
    CHECK(original_id("a") == "a");
    CHECK(original_id(swapped_id("q#1")) == "q#1");

    std::vector<CorpusEntry> entries{testing::make_entry("m", Judgment::nta), testing::make_entry("u", Judgment::nta),
                                     testing::make_entry("n", Judgment::nta)};
    entries[0].features = FeatureAnnotations{};
    entries[0].features->gender = Gender::male;
    entries[1].features = FeatureAnnotations{};
    const auto candidates = swap_candidates(entries);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].anecdote.id == "m");
}

}  // TEST_SUITE
