#include <gtest/gtest.h>

#include "cubes/exercises.hpp"
#include "support/generators.hpp"

using namespace cubes;

namespace {

const Exercise& exercise(std::string_view id) {
    const Exercise* ex = find_exercise(builtin_exercises(), id);
    if (!ex) throw std::runtime_error("missing exercise " + std::string(id));
    return *ex;
}

bool has_pitfall(const GradeReport& r, std::string_view id) {
    return std::find(r.pitfall_ids.begin(), r.pitfall_ids.end(), id) != r.pitfall_ids.end();
}

}  // namespace

TEST(ExerciseBank, LoadsAndIdsAreUnique) {
    const auto& bank = builtin_exercises();
    EXPECT_GE(bank.size(), 18u);
    std::set<std::string> ids;
    for (const auto& ex : bank) EXPECT_TRUE(ids.insert(ex.id).second) << ex.id;
}

TEST(ExerciseBank, EveryModelSolutionGradesCorrect) {
    for (const auto& ex : builtin_exercises()) {
        auto r = grade(ex, ex.model_solution);
        EXPECT_EQ(r.verdict, Verdict::correct) << ex.id << ": " << r.summary;
        EXPECT_TRUE(r.triggered_pitfalls.empty()) << ex.id;
    }
}

TEST(ExerciseBank, PitfallIdsAreKnown) {
    for (const auto& ex : builtin_exercises()) {
        for (const auto& p : ex.pitfalls) EXPECT_NE(find_pitfall_rule(p), nullptr) << ex.id << " " << p;
    }
}

TEST(Grade, FilterThatDropsColumnsIsIncorrect) {
    auto r = grade(exercise("filter-1"), "data |> filter(red == 3 | green > 4) |> select(red, green)");
    EXPECT_EQ(r.verdict, Verdict::incorrect);
    EXPECT_TRUE(has_pitfall(r, "filter-drops-columns"));
    ASSERT_FALSE(r.triggered_pitfalls.empty());
    EXPECT_NE(r.triggered_pitfalls[0].find("never removes columns"), std::string::npos);
}

TEST(Grade, AndInsteadOfOrIsIncorrect) {
    auto r = grade(exercise("filter-1"), "data |> filter(red == 3 & green > 4)");
    EXPECT_EQ(r.verdict, Verdict::incorrect);
    EXPECT_TRUE(has_pitfall(r, "and-or-swap"));
    ASSERT_EQ(r.triggered_pitfalls.size(), 1u);
    EXPECT_NE(r.triggered_pitfalls[0].find("BOTH"), std::string::npos);
}

TEST(Grade, SingleEqualsIsParseErrorWithHint) {
    auto r = grade(exercise("filter-1"), "data |> filter(red = 3 | green > 4)");
    EXPECT_EQ(r.verdict, Verdict::parse_error);
    ASSERT_TRUE(r.error);
    EXPECT_EQ(r.error->kind(), ErrorKind::equals_for_comparison);
    EXPECT_TRUE(has_pitfall(r, "equals-vs-double-equals"));
}

TEST(Grade, RowOrderIgnoredWhereAllowed) {
    auto r = grade(exercise("filter-1"), "data |> filter(green > 4 | red == 3) |> arrange(desc(red))");
    EXPECT_EQ(r.verdict, Verdict::correct) << r.summary;
}

TEST(Grade, RowOrderMattersForArrange) {
    auto r = grade(exercise("arrange-2"), "data |> arrange(red)");
    EXPECT_EQ(r.verdict, Verdict::incorrect);
    EXPECT_TRUE(has_pitfall(r, "desc-misplacement"));
    auto ok = grade(exercise("arrange-2"), "data |> arrange(-red)");
    EXPECT_NE(ok.verdict, Verdict::parse_error);
}

TEST(Grade, CellDiffsReported) {
    auto r = grade(exercise("mutate-1"), "data |> mutate(blue = ifelse(red > 3, 5, 4))");
    EXPECT_EQ(r.verdict, Verdict::incorrect);
    EXPECT_FALSE(r.cell_diffs.empty());
}

TEST(Grade, EvaluationErrorIsIncorrectNotThrown) {
    auto r = grade(exercise("select-1"), "data |> select(rd)");
    EXPECT_EQ(r.verdict, Verdict::incorrect);
    ASSERT_TRUE(r.error);
    EXPECT_EQ(r.error->kind(), ErrorKind::unknown_column);
}

TEST(Grade, ScalarAnswers) {
    EXPECT_EQ(grade(exercise("warmup-dims"), "3, 6").verdict, Verdict::correct);
    EXPECT_EQ(grade(exercise("warmup-dims"), "6, 3").verdict, Verdict::incorrect);
    EXPECT_EQ(grade(exercise("warmup-values"), "6 5 4 3").verdict, Verdict::correct);
    EXPECT_EQ(grade(exercise("warmup-values"), "3 4 5").verdict, Verdict::incorrect);
    EXPECT_EQ(grade(exercise("warmup-names"), "purple blue green yellow orange red").verdict, Verdict::correct);
    EXPECT_EQ(grade(exercise("warmup-observations"), "3.0").verdict, Verdict::correct);
}

TEST(Grade, NeverThrowsOnArbitraryInput) {
    gen::Rng rng(5);
    const std::string alphabet = "data|>filter(red==3&green>4)select-,mutate=ifelse c 1.5 NA%in%\n\"#";
    const auto& bank = builtin_exercises();
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        std::size_t n = gen::below(rng, 40);
        for (std::size_t k = 0; k < n; ++k) s += alphabet[gen::below(rng, alphabet.size())];
        if (gen::chance(rng, 0.5)) s = "data |> " + s;
        const auto& ex = bank[gen::below(rng, bank.size())];
        EXPECT_NO_THROW(grade(ex, s));
    }
}

TEST(ExerciseJson, RoundTrip) {
    for (const auto& ex : builtin_exercises()) {
        auto back = exercise_from_json(exercise_to_json(ex));
        EXPECT_EQ(back.id, ex.id);
        EXPECT_EQ(back.prompt, ex.prompt);
        EXPECT_EQ(back.start_frame, ex.start_frame);
        EXPECT_EQ(back.model_solution, ex.model_solution);
        EXPECT_EQ(back.pitfalls, ex.pitfalls);
        EXPECT_EQ(back.expected.mode, ex.expected.mode);
        EXPECT_EQ(back.expected.frame, ex.expected.frame);
        EXPECT_EQ(back.expected.answers, ex.expected.answers);
    }
}

TEST(ExerciseJson, RejectsBadBanks) {
    EXPECT_THROW(parse_exercise_bank("{"), WrangleError);
    EXPECT_THROW(parse_exercise_bank(R"([{"id": "x"}])"), WrangleError);
}

TEST(GradeJson, Shape) {
    auto j = grade_report_to_json(grade(exercise("filter-1"), "data |> filter(red == 3 & green > 4)"));
    EXPECT_EQ(j.at("verdict"), "incorrect");
    EXPECT_EQ(j.at("pitfall_ids"), wire::json::array({"and-or-swap"}));
}
