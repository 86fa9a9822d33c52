#include <cmath>

#include <gtest/gtest.h>

#include "cubes/engine.hpp"
#include "cubes/parser.hpp"
#include "cubes/stats.hpp"
#include "support/generators.hpp"

using namespace cubes;

namespace {

std::vector<Cell> cells(std::initializer_list<double> xs) {
    std::vector<Cell> out;
    for (double x : xs) out.emplace_back(x);
    return out;
}

// Textbook formulas, written independently of the library.
double formula_sd(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double formula_quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    double h = (static_cast<double>(v.size()) - 1) * p + 1;  // 1-based position
    double lo = std::floor(h);
    double below = v[static_cast<std::size_t>(lo) - 1];
    double above = v[std::min(static_cast<std::size_t>(lo), v.size() - 1)];
    return below + (h - lo) * (above - below);
}

}  // namespace

TEST(Stats, SdOfThreeFourFiveIsExactlyOne) {
    auto v = cells({3, 4, 5});
    EXPECT_EQ(stats::sd(v).value(), 1.0);
}

TEST(Stats, QuantileQuarter) {
    auto v = cells({3, 4, 5});
    EXPECT_NEAR(stats::quantile(v, 0.25).value(), 3.5, 1e-12);
    EXPECT_EQ(stats::quantile(v, 0.0).value(), 3.0);
    EXPECT_EQ(stats::quantile(v, 0.5).value(), 4.0);
    EXPECT_EQ(stats::quantile(v, 1.0).value(), 5.0);
}

TEST(Stats, QuantileUnsortedInput) {
    auto v = cells({5, 3, 4});
    EXPECT_NEAR(stats::quantile(v, 0.75).value(), 4.5, 1e-12);
}

TEST(Stats, BasicAggregates) {
    auto v = cells({3, 4, 5, 6});
    EXPECT_EQ(stats::sum(v).value(), 18.0);
    EXPECT_EQ(stats::min(v).value(), 3.0);
    EXPECT_EQ(stats::max(v).value(), 6.0);
    EXPECT_EQ(stats::mean(v).value(), 4.5);
}

TEST(Stats, NaPropagates) {
    std::vector<Cell> v = {Cell(3.0), Cell::na(), Cell(5.0)};
    EXPECT_TRUE(stats::sum(v).is_na());
    EXPECT_TRUE(stats::min(v).is_na());
    EXPECT_TRUE(stats::max(v).is_na());
    EXPECT_TRUE(stats::mean(v).is_na());
    EXPECT_TRUE(stats::sd(v).is_na());
    EXPECT_TRUE(stats::quantile(v, 0.5).is_na());
}

TEST(Stats, EmptyAndSingleton) {
    std::vector<Cell> none;
    EXPECT_EQ(stats::sum(none).value(), 0.0);
    EXPECT_TRUE(stats::min(none).is_na());
    EXPECT_TRUE(stats::max(none).is_na());
    EXPECT_TRUE(stats::mean(none).is_na());
    EXPECT_TRUE(stats::sd(none).is_na());
    EXPECT_TRUE(stats::quantile(none, 0.5).is_na());
    auto one = cells({4});
    EXPECT_TRUE(stats::sd(one).is_na());
    EXPECT_EQ(stats::quantile(one, 0.3).value(), 4.0);
}

TEST(Stats, ProbsOutOfRange) {
    auto v = cells({1, 2});
    EXPECT_THROW(stats::quantile(v, -0.1), WrangleError);
    EXPECT_THROW(stats::quantile(v, 1.5), WrangleError);
    EXPECT_THROW(stats::quantile(v, std::nan("")), WrangleError);
}

TEST(Stats, ThroughSummarize) {
    auto f = eval_pipeline(figure1(), parse_pipeline("data |> summarize(s = sd(red), q = quantile(red, probs = 0.25), m = mean(red))")).frame;
    EXPECT_EQ(f.row(0), (std::vector<Cell>{Cell(1.0), Cell(3.5), Cell(4.0)}));
}

TEST(Stats, RandomVectorsMatchFormulas) {
    gen::Rng rng(7);
    std::uniform_real_distribution<double> value(-50, 50);
    std::uniform_real_distribution<double> prob(0, 1);
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 2 + gen::below(rng, 30);
        std::vector<double> raw;
        std::vector<Cell> v;
        for (std::size_t k = 0; k < n; ++k) {
            double x = gen::chance(rng, 0.5) ? std::round(value(rng)) : value(rng);
            raw.push_back(x);
            v.emplace_back(x);
        }
        double p = gen::chance(rng, 0.2) ? (gen::chance(rng, 0.5) ? 0.0 : 1.0) : prob(rng);
        EXPECT_NEAR(stats::sd(v).value(), formula_sd(raw), 1e-9 * std::max(1.0, formula_sd(raw)));
        double q = formula_quantile(raw, p);
        EXPECT_NEAR(stats::quantile(v, p).value(), q, 1e-9 * std::max(1.0, std::abs(q)));
    }
}
