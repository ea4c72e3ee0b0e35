#ifndef JUDGEBENCH_TESTS_FIXTURES_HPP_
#define JUDGEBENCH_TESTS_FIXTURES_HPP_

#include "judgebench/judgment.hpp"

#include <vector>

namespace testing {

struct VerdictFixture {
    const char *text;
    judgebench::Judgment expected;
};

/// Model outputs reproduced from published example transcripts.
inline const std::vector<VerdictFixture> published_verdicts{
    {"YTA (You're the Asshole)\n\nRationale: While it's understandable that you were in a difficult situation with your kids and you "
     "were unwell, refusing to help an elderly man in need when he asked for assistance does not excuse your behavior.",
     judgebench::Judgment::yta},
    {"The narrator is not at fault (NTA). \n\nRationale: The narrator was in a challenging situation, experiencing a medical "
     "emergency and unable to assist the elderly man.",
     judgebench::Judgment::nta},
    {"1. The narrator is at fault (YTA).", judgebench::Judgment::yta},
    {"1. The narrator is not at fault (NTA).", judgebench::Judgment::nta},
    {"Based on the narrative, I would say that the narrator and the grandma are both at fault (YTA). The narrator's anxiety and "
     "the grandma's insensitive response both contributed to the situation.",
     judgebench::Judgment::yta},
    {"Based on the information provided, I believe the narrator is Not At Fault (NTA) for the situation. The narrator was simply "
     "sharing their experience and feelings with their grandmother.",
     judgebench::Judgment::nta},
    {"I would say that the narrator is not at fault (NTA). Thank you for sharing your decision. Could you explain why you think "
     "the parents are at fault (YTA)? That's a valid point.",
     judgebench::Judgment::nta},
    {"Based on the text, I would say that the narrator is not at fault (NTA). The narrator communicated their limits and "
     "expectations clearly, practiced active listening, and offered a compromise.",
     judgebench::Judgment::nta},
};

/// Hand-labelled negation and ordering cases.
inline const std::vector<VerdictFixture> synthetic_verdicts{
    {"NTA", judgebench::Judgment::nta},
    {"YTA", judgebench::Judgment::yta},
    {"yta, clearly", judgebench::Judgment::yta},
    {"Verdict: Nta.", judgebench::Judgment::nta},
    {"YTAX is not a label", judgebench::Judgment::abstain},
    {"INTAKE forms were due", judgebench::Judgment::abstain},
    {"It is hard to say without more context.", judgebench::Judgment::abstain},
    {"", judgebench::Judgment::abstain},
    {"I would not say YTA here.", judgebench::Judgment::nta},
    {"Definitely not YTA.", judgebench::Judgment::nta},
    {"not NTA", judgebench::Judgment::yta},
    {"Not really NTA, sorry.", judgebench::Judgment::yta},
    {"I do not think NTA applies.", judgebench::Judgment::yta},
    {"It is not clear to me, but YTA.", judgebench::Judgment::yta},
    {"Nothing suggests YTA", judgebench::Judgment::yta},
    {"NTA. Some would call it YTA.", judgebench::Judgment::nta},
    {"YTA. Some would call it NTA.", judgebench::Judgment::yta},
    {"You're the asshole here, though many say NTA.", judgebench::Judgment::yta},
    {"You are the asshole.", judgebench::Judgment::yta},
    {"You are not the asshole.", judgebench::Judgment::nta},
    {"I'm not to blame at all", judgebench::Judgment::nta},
    {"The narrator is not at fault; the sister is YTA.", judgebench::Judgment::nta},
    {"The narrator is at fault. NTA would be too kind.", judgebench::Judgment::yta},
    {"The Narrator  IS\nnot at fault.", judgebench::Judgment::nta},
    {"I am the asshole, sorry.", judgebench::Judgment::yta},
    {"I'm the asshole and I know it.", judgebench::Judgment::yta},
    {"I am not the asshole in this story.", judgebench::Judgment::nta},
    {"Decision: (NTA) because the brother overreacted.", judgebench::Judgment::nta},
    {"Decision: (YTA) because the narrator lied.", judgebench::Judgment::yta},
    {"**YTA** - you broke the promise.", judgebench::Judgment::yta},
    {"**NTA** - boundaries are fine.", judgebench::Judgment::nta},
    {"Everyone is at fault here, so YTA.", judgebench::Judgment::yta},
    {"No one is at fault, NTA.", judgebench::Judgment::nta},
    {"Not at fault. YTA is wrong here.", judgebench::Judgment::nta},
    {"nta/yta? nta.", judgebench::Judgment::nta},
};

struct WelchCase {
    std::vector<double> a;
    std::vector<double> b;
    double t;
    double p;
};

/// Two-sided Welch results frozen from an independent statistics package.
inline const std::vector<WelchCase> welch_cases{
    {{1, 2, 3, 4, 5}, {2, 3, 4, 5, 6}, -1.0, 0.34659350708733416},
    {{0, 0, 0, 0, 0}, {10, 10, 10, 10, 10.0001}, -500001.00000116538, 9.5999232000384736e-23},
    {{33.87, 36.16, 31.55, 36.04, 32.1}, {35.51, 23.39, 30.54, 36.21}, 0.81424454965983972, 0.46545731420626285},
    {{52.16, 54.03, 50.8, 53.94, 51.94, 58.86, 48.54, 58.31}, {55.58, 54.82, 56.38, 48.87, 48.86, 56.24}, 0.059035709633457292,
     0.95399775407302401},
    {{54.14, 62.77, 60.67, 57.41}, {71.14, 68.57, 67.56, 68.25, 67.1}, -4.8469687122046938, 0.0093102198812937114},
    {{53.58, 52.81, 59.97}, {77.1, 68.68, 73.53, 68.44, 65.49, 75.19}, -5.4504349000733727, 0.0034026558546659193},
    {{32.74, 34.12, 33.41, 33.53, 33.05, 34.13}, {56.31, 55.16, 51.39, 51.78, 46.81, 47.41, 45.68}, -10.779113711844763,
     2.8602759644774826e-05},
    {{53.48, 51.22, 47.62, 47.76, 48.73, 46.76, 52.85, 45.09}, {47.1, 50.33, 50.49, 53.47, 55.77, 51.26, 51.72, 50.54},
     -1.5452656965860501, 0.14523930409884225},
    {{57.44, 52.99, 51.22}, {65.11, 67.34, 63.06, 64.02, 69.05, 63.24, 62.77, 66.14}, -5.5590203727366658, 0.013862777353897173},
    {{47.24, 41.36, 46.18, 40.07, 42.5, 43.08, 36.86}, {46.28, 35.27, 34.71, 42.4, 43.86}, 0.72998324245640012, 0.49053883957335997},
    {{67.07, 69.12, 69.47, 65.78, 66.74, 69.61, 68.12, 69.38}, {51.96, 55.01, 54.1, 52.6, 53.87, 52.22, 58.91}, 13.483346724437082,
     1.3286459689541066e-07},
    {{36.42, 35.48, 38.17, 37.85, 31.22}, {59.81, 62.14, 55.7, 63.05}, -11.803908555848361, 2.2747464744136442e-05},
    {{35.14, 32.24, 31.42, 33.49}, {44.77, 49.4, 43.47, 48.54, 53.16, 46.69, 48.85, 55.04}, -9.7639787070610655, 2.1299982063791633e-06},
    {{32.26, 29.01, 30.28, 31.63, 32.31, 31.17}, {55.01, 58.34, 70.46, 59.53, 62.69}, -11.26804933027868, 0.00023079959279503982},
    {{50.82, 62.18, 46.64, 59.98}, {43.51, 37.87, 38.89, 41.33, 38.66, 37.63, 39.88}, 4.0296259579367968, 0.023178293796773684},
    {{48.05, 43.74, 40.76, 40.14}, {58.98, 55.63, 72.01, 67.51, 65.15, 60.08}, -6.5333206854490493, 0.00018450014895064632},
    {{62.75, 65.61, 60.91, 65.23, 63.67, 64.78, 64.89}, {48.35, 58.88, 58.28}, 2.5364676568169022, 0.11858906483124103},
    {{40.07, 42.99, 34.54, 41.71, 42.97, 35.63, 47.18}, {51.44, 49.06, 50.06, 52.62}, -5.4564411428044064, 0.00057286414351793004},
    {{65.09, 67.36, 66.64, 65.57, 65.27, 64.11, 67.18, 65.65}, {51.46, 52.01}, 29.350541365375221, 1.4663866533281499e-07},
    {{42.87, 38.81, 39.33}, {46.22, 44.52, 35.75, 43.11, 42.46, 38.68}, -0.71418198387671517, 0.49948833374219459},
};

}  // namespace testing

#endif  // JUDGEBENCH_TESTS_FIXTURES_HPP_
