#include <gtest/gtest.h>

#include "cubes/engine.hpp"
#include "cubes/parser.hpp"
#include "support/generators.hpp"
#include "support/reference_interpreter.hpp"

using namespace cubes;

namespace {

struct Tally {
    int agreed_ok = 0;
    int agreed_reject = 0;
};

// Runs one pipeline through both interpreters; returns a failure description or "".
std::string compare_one(const CubeFrame& start, const PipelineAst& p, Tally& tally) {
    std::optional<ref::Table> expected;
    std::string ref_reason;
    try {
        expected = ref::Interpreter().run(p, ref::from_frame(start));
    } catch (const ref::Rejected& e) {
        ref_reason = e.what();
    }
    std::optional<CubeFrame> got;
    std::string engine_reason;
    try {
        got = eval_pipeline(start, p).frame;
    } catch (const WrangleError& e) {
        engine_reason = e.message();
    }
    if (!expected && !got) {
        ++tally.agreed_reject;
        return "";
    }
    if (!expected) return "reference rejected (" + ref_reason + ") but engine produced a frame";
    if (!got) return "engine rejected (" + engine_reason + ") but reference produced a frame";
    auto m = ref::mismatch(*expected, *got);
    if (m.empty()) ++tally.agreed_ok;
    return m;
}

}  // namespace

TEST(Oracle, RandomPipelinesAgreeWithReference) {
    gen::Rng rng(20240611);
    Tally tally;
    int failures = 0;
    for (int i = 0; i < 12000 && failures < 5; ++i) {
        auto f = gen::frame(rng);
        auto p = gen::pipeline(rng, f);
        auto why = compare_one(f, p, tally);
        if (!why.empty()) {
            ++failures;
            ADD_FAILURE() << "case " << i << ": " << pretty_print(p) << "\n" << why;
        }
    }
    EXPECT_EQ(failures, 0);
    // Most cases should evaluate successfully; rejections must stay a minority.
    EXPECT_GT(tally.agreed_ok, 8000);
}

TEST(Oracle, PaperPipelinesAgree) {
    Tally tally;
    for (const char* src : {
             "data |> filter(red == 3 | green > 4)",
             "data |> select(red, yellow, green)",
             "data |> select(-green)",
             "data |> mutate(blue = ifelse(red > 3, 4, 5))",
             "data |> mutate(orange = ifelse(blue == 6, 4, 3), green = orange + 1)",
             "data |> arrange(desc(red))",
             "data |> group_by(purple) |> arrange(red)",
             "data |> summarize(max(red), max(blue), min(orange))",
             "data |> group_by(blue) |> summarize(min(red), max(green))",
             "data |> filter(blue > 3) |> select(red, yellow, blue) |> mutate(green = blue - 1)",
             "data |> filter(blue > 4) |> summarize(max(blue))",
         }) {
        EXPECT_EQ(compare_one(figure1(), parse_pipeline(src), tally), "") << src;
    }
    EXPECT_EQ(tally.agreed_ok, 11);
}
