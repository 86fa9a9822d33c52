// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// usage: acceptance CUBES_BIN FIGURE1_CSV
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cubes/engine.hpp"
#include "cubes/exercises.hpp"
#include "cubes/io.hpp"
#include "cubes/parser.hpp"
#include "cubes/stats.hpp"
#include "support/generators.hpp"
#include "support/reference_interpreter.hpp"

using namespace cubes;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::string detail;
    bool ok = true;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

CubeFrame run(std::string_view src, const CubeFrame& f = figure1()) { return eval_pipeline(f, parse_pipeline(src)).frame; }

CubeFrame frame(std::vector<std::string> names, std::vector<std::vector<Cell>> rows,
                std::optional<GroupSpec> groups = std::nullopt, bool summary = false) {
    // Built column-wise so summary labels such as `max(red)` are accepted.
    std::vector<Column> cols;
    for (std::size_t c = 0; c < names.size(); ++c) {
        Column col{names[c], {}};
        for (const auto& r : rows) col.cells.push_back(r.at(c));
        cols.push_back(std::move(col));
    }
    return CubeFrame::from_columns(std::move(cols), rows.size(), std::move(groups)).with_summary(summary);
}

const std::vector<std::string> kColors = {"red", "orange", "yellow", "green", "blue", "purple"};

// -- 1: example pipelines ------------------------------------------------------

Check example_pipelines() {
    Check c;
    CubeFrame no_purple = frame({"red", "orange", "yellow", "green", "blue"},
                                {{3, 4, 5, 6, 3}, {4, 3, 5, 4, 6}, {5, 6, 3, 5, 4}});
    struct Case {
        std::string src;
        CubeFrame start;
        CubeFrame expected;
    };
    std::vector<Case> cases = {
        {"data |>\n  filter(red == 3 | \n         green > 4)", figure1(),
         frame(kColors, {{3, 4, 5, 6, 3, 4}, {5, 6, 3, 5, 4, 5}})},
        {"data |>\n  select(red, yellow, \n         green)", figure1(),
         frame({"red", "yellow", "green"}, {{3, 5, 6}, {4, 5, 4}, {5, 3, 5}})},
        {"data |>\n  select(-green)", figure1(),
         frame({"red", "orange", "yellow", "blue", "purple"}, {{3, 4, 5, 3, 4}, {4, 3, 5, 6, 4}, {5, 6, 3, 4, 5}})},
        {"data |>\n  mutate(purple = c(4, 4, 5))", no_purple, figure1()},
        {"data |>\n  mutate(\n    blue = ifelse(red > 3, 4, 5)\n  )", figure1(),
         frame(kColors, {{3, 4, 5, 6, 5, 4}, {4, 3, 5, 4, 4, 4}, {5, 6, 3, 5, 4, 5}})},
        {"data |>\n  mutate(\n    orange = ifelse(blue == 6, 4, 3),\n    green = orange + 1\n  )", figure1(),
         frame(kColors, {{3, 3, 5, 4, 3, 4}, {4, 4, 5, 5, 6, 4}, {5, 3, 3, 4, 4, 5}})},
        {"data |>\n  arrange(red)", figure1(), figure1()},
        {"data |>\n  arrange(desc(red))", figure1(),
         frame(kColors, {{5, 6, 3, 5, 4, 5}, {4, 3, 5, 4, 6, 4}, {3, 4, 5, 6, 3, 4}})},
        {"data |>\n  group_by(purple)", figure1(), figure1().with_groups(GroupSpec{{"purple"}})},
        {"data |>\n  group_by(purple) |>\n  arrange(red)", figure1(), figure1().with_groups(GroupSpec{{"purple"}})},
        {"data |>\n  summarize(\n    max(red),\n    max(blue),\n    min(orange)\n  )", figure1(),
         frame({"max(red)", "max(blue)", "min(orange)"}, {{5, 6, 3}}, std::nullopt, true)},
        {"data |>\n  group_by(blue) |>\n  summarize(\n    min(red),\n    max(green)\n  )", figure1(),
         frame({"blue", "min(red)", "max(green)"}, {{3, 3, 6}, {4, 5, 5}, {6, 4, 4}}, std::nullopt, true)},
        {"data |>\n  filter(blue > 3) |>\n  select(red, yellow, blue)|>\n  mutate(green = blue - 1)", figure1(),
         frame({"red", "yellow", "blue", "green"}, {{4, 5, 6, 5}, {5, 3, 4, 3}})},
        {"data |>\n  filter(blue > 4) |>\n  summarize(max(blue))", figure1(),
         frame({"max(blue)"}, {{6}}, std::nullopt, true)},
    };
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& k : cases) {
        try {
            auto got = run(k.src, k.start);
            c.require(got == k.expected, "mismatch for: " + k.src);
        } catch (const WrangleError& e) {
            c.require(false, "error for " + k.src + ": " + e.message());
        }
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    c.require(ms < 1000, "took " + std::to_string(ms) + " ms");
    if (c.ok) c.detail = std::to_string(cases.size()) + " pipelines in " + std::to_string(ms) + " ms";
    return c;
}

// -- 2: warm-up answers ----------------------------------------------------------

Check warmup(const fs::path& csv) {
    Check c;
    auto f = load_frame(csv);
    c.require(dimensions(f) == std::make_pair(std::size_t{3}, std::size_t{6}), "dimensions");
    std::set<double> values;
    for (const auto& col : f.columns())
        for (const auto& cell : col.cells) values.insert(cell.value());
    c.require(values == std::set<double>{3, 4, 5, 6}, "distinct values");
    c.require(f.names() == kColors, "column names");
    for (const char* id : {"warmup-dims", "warmup-values", "warmup-names"}) {
        const Exercise* ex = find_exercise(builtin_exercises(), id);
        c.require(ex && grade(*ex, ex->model_solution).verdict == Verdict::correct, std::string("grading ") + id);
    }
    if (c.ok) c.detail = "(3, 6), {3,4,5,6}, six colour names";
    return c;
}

// -- 3: verb invariants ------------------------------------------------------------

Check verb_invariants() {
    Check c;
    gen::Rng rng(3);
    int cases = 0;
    for (int i = 0; i < 1200 && c.ok; ++i) {
        auto f = gen::frame(rng);
        gen::Scope s{f.names(), 0};
        auto fr = filter_rows(f, {gen::predicate(rng, s, 2)}).frame;
        c.require(fr.names() == f.names() && fr.nrows() <= f.nrows(), "filter changed columns");

        std::vector<SelectItem> items = {{f.names()[gen::below(rng, f.ncols())], false, {}}};
        if (f.is_grouped()) items.push_back({f.groups()->keys[0], false, {}});
        c.require(select_columns(f, items).frame.nrows() == f.nrows(), "select changed rows");

        c.require(mutate_columns(f, {{"z", gen::numeric(rng, s, 2), {}}}).frame.nrows() == f.nrows(),
                  "mutate changed rows");

        auto key = gen::column(rng, s);
        auto ar = arrange_rows(f, {key});
        auto perm = ar.lineage.source_rows;
        std::sort(perm.begin(), perm.end());
        bool is_perm = perm.size() == f.nrows();
        for (std::size_t k = 0; is_perm && k < perm.size(); ++k) is_perm = perm[k] == k;
        c.require(is_perm, "arrange is not a permutation");
        c.require(arrange_rows(ar.frame, {key}).frame == ar.frame, "arrange not idempotent");
        const auto& src = ar.lineage.source_rows;
        auto name = std::get<ColumnRef>(key->node).name;
        for (std::size_t r = 1; r < src.size(); ++r) {
            bool same = ar.frame.find(name)->cells[r] == ar.frame.find(name)->cells[r - 1];
            if (f.is_grouped())
                for (const auto& g : f.groups()->keys) same = same && ar.frame.find(g)->cells[r] == ar.frame.find(g)->cells[r - 1];
            c.require(!same || src[r - 1] < src[r], "arrange not stable");
        }

        auto gk = f.names()[gen::below(rng, f.ncols())];
        auto grouped = group_rows(f, {col(gk)}).frame;
        c.require(grouped.columns() == f.columns(), "group_by changed cells");
        std::set<std::optional<double>> groups;
        for (const auto& cell : f.find(gk)->cells) groups.insert(cell.is_na() ? std::nullopt : std::optional(cell.value()));
        c.require(summarize_groups(grouped, {{"s", gen::aggregate(rng, s), {}}}).frame.nrows() == groups.size(),
                  "summarize rows != groups");
        ++cases;
    }
    if (c.ok) c.detail = std::to_string(cases) + " random cases";
    return c;
}

// -- 4: oracle equivalence -------------------------------------------------------------

Check oracle() {
    Check c;
    gen::Rng rng(4);
    int cases = 0, evaluated = 0;
    for (; cases < 10000 && c.ok; ++cases) {
        auto f = gen::frame(rng);
        auto p = gen::pipeline(rng, f);
        std::optional<ref::Table> want;
        try {
            want = ref::Interpreter().run(p, ref::from_frame(f));
        } catch (const ref::Rejected&) {
        }
        std::optional<CubeFrame> got;
        try {
            got = eval_pipeline(f, p).frame;
        } catch (const WrangleError&) {
        }
        if (!want || !got) {
            c.require(!want && !got, "accept/reject disagreement: " + pretty_print(p));
            continue;
        }
        auto m = ref::mismatch(*want, *got);
        c.require(m.empty(), pretty_print(p) + "\n" + m);
        ++evaluated;
    }
    if (c.ok) c.detail = std::to_string(cases) + " cases, " + std::to_string(evaluated) + " evaluated";
    return c;
}

// -- 5: three-valued logic ----------------------------------------------------------------

Check kleene() {
    Check c;
    using L = Logical;
    const L vals[] = {L::t, L::f, L::na};
    // Reference tables on {0, 0.5, 1}: AND = min, OR = max, NOT = 1 - x.
    auto num = [](L v) { return v == L::t ? 1.0 : v == L::f ? 0.0 : 0.5; };
    int assertions = 0;
    for (L a : vals) {
        for (L b : vals) {
            c.require(num(logical_and(a, b)) == std::min(num(a), num(b)), "and");
            c.require(num(logical_or(a, b)) == std::max(num(a), num(b)), "or");
            assertions += 2;
        }
        c.require(num(logical_not(a)) == 1 - num(a), "not");
        ++assertions;
    }
    // Through the language: the same 27 combinations as expressions.
    auto one = make_frame({"x"}, {{1}});
    const char* lit[] = {"TRUE", "FALSE", "NA > 0"};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (const char* op : {" & ", " | "}) {
                std::string src = std::string("(") + lit[a] + ")" + op + "(" + lit[b] + ")";
                auto got = eval_expr(one, parse_expression(src)).logicals.at(0);
                L want = std::string(op) == " & " ? logical_and(vals[a], vals[b]) : logical_or(vals[a], vals[b]);
                c.require(got == want, src);
                ++assertions;
            }
        }
    }
    for (int a = 0; a < 3; ++a) {
        auto got = eval_expr(one, parse_expression(std::string("!(") + lit[a] + ")")).logicals.at(0);
        c.require(got == logical_not(vals[a]), std::string("!") + lit[a]);
        ++assertions;
    }
    auto f = make_frame({"red"}, {{Cell::na()}, {3}, {4}});
    c.require(run("data |> filter(red == 3)", f).nrows() == 1, "NA predicate row kept");
    c.require(run("data |> filter(!(red == 3))", f).nrows() == 1, "NA negation row kept");
    if (c.ok) c.detail = std::to_string(assertions) + " assertions (tables and expressions); filter drops NA rows";
    return c;
}

// -- 6: statistics ----------------------------------------------------------------------

Check statistics() {
    Check c;
    std::vector<Cell> v = {Cell(3.0), Cell(4.0), Cell(5.0)};
    c.require(stats::sd(v).value() == 1.0, "sd(3,4,5) != 1");
    c.require(std::abs(stats::quantile(v, 0.25).value() - 3.5) <= 1e-12, "quantile 0.25");
    gen::Rng rng(6);
    std::uniform_real_distribution<double> val(-100, 100), prob(0, 1);
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 2 + gen::below(rng, 20);
        std::vector<double> raw;
        std::vector<Cell> cells;
        for (std::size_t k = 0; k < n; ++k) {
            raw.push_back(val(rng));
            cells.emplace_back(raw.back());
        }
        double p = prob(rng);
        double m = 0;
        for (double x : raw) m += x;
        m /= static_cast<double>(n);
        double ss = 0;
        for (double x : raw) ss += (x - m) * (x - m);
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        std::sort(raw.begin(), raw.end());
        double h = (static_cast<double>(n) - 1) * p + 1;
        auto lo = static_cast<std::size_t>(std::floor(h));
        double q = raw[lo - 1] + (h - static_cast<double>(lo)) * (raw[std::min(lo, n - 1)] - raw[lo - 1]);
        c.require(std::abs(stats::sd(cells).value() - sd) <= 1e-9 * std::max(1.0, sd), "sd oracle");
        c.require(std::abs(stats::quantile(cells, p).value() - q) <= 1e-9 * std::max(1.0, std::abs(q)), "quantile oracle");
    }
    if (c.ok) c.detail = "goldens + 100 random vectors";
    return c;
}

// -- 7: parser ---------------------------------------------------------------------------

Check parser() {
    Check c;
    gen::Rng rng(7);
    for (int i = 0; i < 1000 && c.ok; ++i) {
        auto e = gen::any_expr(rng, 5);
        auto text = pretty_print(e);
        try {
            c.require(same_structure(e, parse_expression(text)), "round trip: " + text);
        } catch (const WrangleError& err) {
            c.require(false, "reparse failed: " + text);
        }
    }
    using B = BinaryOp;
    c.require(same_structure(parse_expression("a | b & c"),
                             binary(B::logical_or, col("a"), binary(B::logical_and, col("b"), col("c")))),
              "a | b & c");
    c.require(pretty_print(parse_expression("red %in% c(3,4)")) == "red %in% c(3, 4)", "%in% golden");
    c.require(pretty_print(parse_expression("!is.na(red)")) == "!is.na(red)", "is.na golden");
    c.require(pretty_print(parse_pipeline("data|>arrange(desc(red),blue)")) == "data |> arrange(desc(red), blue)",
              "desc golden");
    if (c.ok) c.detail = "1000 random ASTs round-trip; goldens match";
    return c;
}

// -- 8: grader ------------------------------------------------------------------------------

Check grader() {
    Check c;
    for (const auto& ex : builtin_exercises()) {
        c.require(grade(ex, ex.model_solution).verdict == Verdict::correct, "model solution for " + ex.id);
    }
    const Exercise* f1 = find_exercise(builtin_exercises(), "filter-1");
    c.require(f1 != nullptr, "filter-1 missing");
    if (!f1) return c;
    auto has = [](const GradeReport& r, const std::string& id) {
        return std::find(r.pitfall_ids.begin(), r.pitfall_ids.end(), id) != r.pitfall_ids.end();
    };
    auto drop = grade(*f1, "data |> filter(red == 3 | green > 4) |> select(red, green)");
    c.require(drop.verdict == Verdict::incorrect && has(drop, "filter-drops-columns"), "column-dropping filter");
    auto swap = grade(*f1, "data |> filter(red == 3 & green > 4)");
    c.require(swap.verdict == Verdict::incorrect && has(swap, "and-or-swap"), "& for |");
    if (c.ok) c.detail = std::to_string(builtin_exercises().size()) + " model solutions correct; pitfalls fire";
    return c;
}

// -- 9: CLI -------------------------------------------------------------------------------------

std::pair<int, std::string> shell(const std::string& cmd) {
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

Check cli(const std::string& bin, const fs::path& csv) {
    Check c;
    auto dir = fs::temp_directory_path() / ("cubes_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "combined.R")
        << "data |>\n  filter(blue > 3) |>\n  select(red, yellow, blue)|>\n  mutate(green = blue - 1)\n";
    auto [code, out] = shell(bin + " run " + (dir / "combined.R").string() + " --data " + csv.string());
    c.require(code == 0, "exit code " + std::to_string(code));
    c.require(out == "red,yellow,blue,green\n4,5,6,5\n5,3,4,3\n", "unexpected output:\n" + out);

    gen::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        auto f = gen::frame(rng, {.allow_groups = false});
        if (f.ncols() == 0) continue;
        c.require(parse_csv(to_csv(f)) == f, "CSV round trip");
        c.require(parse_json_frame(to_json_text(f)) == f, "JSON round trip");
    }
    std::ofstream(dir / "id.R") << "";
    auto [jcode, json] = shell(bin + " run " + (dir / "id.R").string() + " --data " + csv.string() + " --format json");
    c.require(jcode == 0 && parse_json_frame(json) == load_frame(csv), "CLI JSON output");
    fs::remove_all(dir);
    if (c.ok) c.detail = "2x4 CSV emitted; CSV/JSON round trips hold";
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance CUBES_BIN FIGURE1_CSV\n";
        return 2;
    }
    std::string bin = argv[1];
    fs::path csv = argv[2];
    std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"example pipelines", example_pipelines},
        {"warm-up answers", [&] { return warmup(csv); }},
        {"verb invariants", verb_invariants},
        {"oracle equivalence", oracle},
        {"three-valued logic", kleene},
        {"statistics", statistics},
        {"parser", parser},
        {"grader", grader},
        {"cli", [&] { return cli(bin, csv); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << c.detail
                  << "\n";
        if (!c.ok) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
