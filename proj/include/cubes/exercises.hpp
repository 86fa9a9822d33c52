#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cubes/engine.hpp"
#include "cubes/parser.hpp"
#include "cubes/wire.hpp"

namespace cubes {

enum class ExpectedMode { exact_frame, frame_up_to_row_order, scalar_answers };

inline std::string_view to_string(ExpectedMode m) {
    switch (m) {
        case ExpectedMode::exact_frame: return "exact_frame";
        case ExpectedMode::frame_up_to_row_order: return "frame_up_to_row_order";
        case ExpectedMode::scalar_answers: return "scalar_answers";
    }
    return "?";
}

inline std::optional<ExpectedMode> mode_from_string(std::string_view s) {
    if (s == "exact_frame") return ExpectedMode::exact_frame;
    if (s == "frame_up_to_row_order") return ExpectedMode::frame_up_to_row_order;
    if (s == "scalar_answers") return ExpectedMode::scalar_answers;
    return std::nullopt;
}

struct ExpectedResult {
    ExpectedMode mode = ExpectedMode::exact_frame;
    std::optional<CubeFrame> frame;    // frame modes
    std::vector<std::string> answers;  // scalar_answers
    bool ordered = false;              // scalar_answers: does order matter
};

struct Exercise {
    std::string id;
    std::string prompt;
    CubeFrame start_frame;
    ExpectedResult expected;
    std::string model_solution;
    std::vector<std::string> pitfalls;  // rule ids
};

/// Everything a pitfall trigger may look at.
struct PitfallContext {
    const Exercise& exercise;
    std::string_view source;
    const PipelineAst* submission = nullptr;  // null when parsing failed
    const PipelineAst* model = nullptr;
    const CubeFrame* result = nullptr;  // null when parsing or evaluation failed
    const WrangleError* error = nullptr;
};

struct PitfallRule {
    std::string id;
    std::string message;
    bool hard = true;  // a hard pitfall makes the verdict incorrect even if the frame matches
    std::function<bool(const PitfallContext&)> trigger;
};

enum class Verdict { correct, incorrect, parse_error };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::correct: return "correct";
        case Verdict::incorrect: return "incorrect";
        case Verdict::parse_error: return "parse_error";
    }
    return "?";
}

struct GradeReport {
    Verdict verdict = Verdict::incorrect;
    FrameDiff cell_diffs;                        // expected -> submitted
    std::vector<std::size_t> unexpected_rows;    // submitted rows with no expected counterpart
    std::vector<std::string> triggered_pitfalls; // messages
    std::vector<std::string> pitfall_ids;
    std::optional<WrangleError> error;
    std::string summary;
};

namespace exercise_detail {

inline void count_filter_ops(const Expr& e, int& ands, int& ors) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Binary>) {
                if (n.op == BinaryOp::logical_and) ++ands;
                if (n.op == BinaryOp::logical_or) ++ors;
                count_filter_ops(*n.lhs, ands, ors);
                count_filter_ops(*n.rhs, ands, ors);
            } else if constexpr (std::is_same_v<T, Unary>) {
                count_filter_ops(*n.operand, ands, ors);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args) count_filter_ops(*a, ands, ors);
            }
        },
        e.node);
}

inline std::pair<int, int> filter_ops(const PipelineAst& p) {
    int ands = 0, ors = 0;
    for (const auto& s : p.stages) {
        if (s.verb != Verb::filter) continue;
        ands += static_cast<int>(s.exprs.size()) - 1;  // filter(a, b) means a & b
        for (const auto& e : s.exprs) count_filter_ops(*e, ands, ors);
    }
    return {ands, ors};
}

inline bool has_verb(const PipelineAst& p, Verb v) {
    return std::any_of(p.stages.begin(), p.stages.end(), [&](const VerbAst& s) { return s.verb == v; });
}

/// (column, descending) for every arrange key in the pipeline.
inline std::vector<std::pair<std::string, bool>> arrange_keys(const PipelineAst& p) {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& s : p.stages) {
        if (s.verb != Verb::arrange) continue;
        for (const auto& k : s.exprs) {
            const Expr* target = k.get();
            bool desc = false;
            if (auto u = std::get_if<Unary>(&k->node); u && u->op == UnaryOp::desc) {
                target = u->operand.get();
                desc = true;
            }
            if (auto ref = std::get_if<ColumnRef>(&target->node)) out.emplace_back(ref->name, desc);
        }
    }
    return out;
}

}  // namespace exercise_detail

inline const std::vector<PitfallRule>& builtin_pitfall_rules() {
    using namespace exercise_detail;
    static const std::vector<PitfallRule> rules = {
        {"filter-drops-columns",
         "Filtering never removes columns: it keeps every column and only (possibly) removes rows.",
         true,
         [](const PitfallContext& c) {
             if (!c.submission || !c.model) return false;
             if (has_verb(*c.submission, Verb::select) && !has_verb(*c.model, Verb::select)) return true;
             const auto& expected = c.exercise.expected.frame;
             if (!c.result || !expected) return false;
             if (c.result->ncols() >= expected->ncols()) return false;
             for (const auto& col : c.result->columns()) {
                 if (!expected->index_of(col.name)) return false;
             }
             return true;
         }},
        {"and-or-swap",
         "Boolean operators: `&` requires BOTH conditions to be TRUE; `|` keeps a row when EITHER "
         "condition is TRUE.",
         true,
         [](const PitfallContext& c) {
             if (!c.submission || !c.model) return false;
             auto [sub_and, sub_or] = filter_ops(*c.submission);
             auto [model_and, model_or] = filter_ops(*c.model);
             return (model_or > sub_or && sub_and > model_and) || (model_and > sub_and && sub_or > model_or);
         }},
        {"equals-vs-double-equals", "`=` assigns; `==` compares. Use `==` to test whether two values are equal.",
         true,
         [](const PitfallContext& c) {
             return c.error && c.error->kind() == ErrorKind::equals_for_comparison;
         }},
        {"desc-misplacement",
         "`desc()` goes inside `arrange()` around a column, as in `arrange(desc(red))`, to sort from "
         "largest to smallest.",
         true,
         [](const PitfallContext& c) {
             if (c.error && c.error->kind() == ErrorKind::desc_outside_arrange) return true;
             if (!c.submission || !c.model) return false;
             auto want = arrange_keys(*c.model);
             auto got = arrange_keys(*c.submission);
             for (const auto& [name, desc] : got) {
                 for (const auto& [wname, wdesc] : want) {
                     if (name == wname && desc != wdesc) return true;
                 }
             }
             return false;
         }},
    };
    return rules;
}

inline const PitfallRule* find_pitfall_rule(std::string_view id) {
    for (const auto& r : builtin_pitfall_rules()) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

/// Messages of the exercise's rules that fire for this submission.
inline std::vector<std::string> diagnose_pitfalls(const PitfallContext& ctx,
                                                  std::vector<std::string>* ids = nullptr) {
    std::vector<std::string> out;
    for (const auto& id : ctx.exercise.pitfalls) {
        const PitfallRule* rule = find_pitfall_rule(id);
        if (rule && rule->trigger(ctx)) {
            out.push_back(rule->message);
            if (ids) ids->push_back(rule->id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparison

namespace exercise_detail {

inline std::vector<Cell> project_row(const CubeFrame& f, std::size_t r, const std::vector<std::string>& names) {
    std::vector<Cell> out;
    for (const auto& n : names) out.push_back(f.at(r, *f.index_of(n)));
    return out;
}

struct Comparison {
    FrameDiff diff;
    std::vector<std::size_t> unexpected_rows;
    bool equal = false;
};

inline Comparison compare_frames(const CubeFrame& expected, const CubeFrame& got, bool row_order_matters) {
    Comparison cmp;
    FrameDiff& d = cmp.diff;
    std::vector<std::string> common;
    for (const auto& c : expected.columns()) {
        if (got.index_of(c.name)) common.push_back(c.name);
        else d.dropped_columns.push_back(c.name);
    }
    std::vector<std::string> got_common;
    for (const auto& c : got.columns()) {
        if (!expected.index_of(c.name)) d.added_columns.push_back(c.name);
        else got_common.push_back(c.name);
    }
    d.columns_reordered = common != got_common;
    d.groups_changed = expected.groups() != got.groups();

    std::vector<bool> used(got.nrows(), false);
    if (row_order_matters) {
        for (std::size_t r = 0; r < expected.nrows(); ++r) {
            if (r < got.nrows() && project_row(expected, r, common) == project_row(got, r, common)) {
                d.kept_rows.push_back(r);
                used[r] = true;
            } else {
                d.dropped_rows.push_back(r);
            }
        }
        if (expected.nrows() == got.nrows()) {
            for (const auto& name : common) {
                if (expected.find(name)->cells != got.find(name)->cells) d.changed_columns.push_back(name);
            }
        }
    } else {
        for (std::size_t r = 0; r < expected.nrows(); ++r) {
            auto want = project_row(expected, r, common);
            bool found = false;
            for (std::size_t g = 0; g < got.nrows() && !found; ++g) {
                if (!used[g] && project_row(got, g, common) == want) {
                    used[g] = true;
                    found = true;
                }
            }
            (found ? d.kept_rows : d.dropped_rows).push_back(r);
        }
    }
    for (std::size_t g = 0; g < got.nrows(); ++g) {
        if (!used[g]) cmp.unexpected_rows.push_back(g);
    }
    cmp.equal = d.empty() && cmp.unexpected_rows.empty();
    return cmp;
}

/// Splits free-text answers like "3, 4, 5 and 6" or "'red', 'orange'" into normalised tokens.
inline std::vector<std::string> answer_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (cur != "and") {
            if (auto v = parse_number(cur)) cur = format_number(*v);
            out.push_back(cur);
        }
        cur.clear();
    };
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '(' || ch == ')' ||
            ch == '{' || ch == '}' || ch == '[' || ch == ']' || ch == '\'' || ch == '"' || ch == ';') {
            flush();
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

}  // namespace exercise_detail

/// Grades one submission. Never throws: every failure becomes part of the report.
inline GradeReport grade(const Exercise& ex, std::string_view submission) {
    using namespace exercise_detail;
    GradeReport report;
    try {
        if (ex.expected.mode == ExpectedMode::scalar_answers) {
            auto got = answer_tokens(submission);
            auto want = ex.expected.answers;
            for (auto& w : want) {
                if (auto v = parse_number(w)) w = format_number(*v);
            }
            if (!ex.expected.ordered) {
                std::sort(got.begin(), got.end());
                got.erase(std::unique(got.begin(), got.end()), got.end());
                std::sort(want.begin(), want.end());
                want.erase(std::unique(want.begin(), want.end()), want.end());
            }
            report.verdict = got == want ? Verdict::correct : Verdict::incorrect;
            report.summary = report.verdict == Verdict::correct ? "correct" : "not quite; check your answer";
            return report;
        }

        std::optional<PipelineAst> model;
        try {
            model = parse_pipeline(ex.model_solution);
        } catch (const WrangleError&) {
        }

        std::optional<PipelineAst> ast;
        try {
            ast = parse_pipeline(submission);
        } catch (const WrangleError& e) {
            report.verdict = Verdict::parse_error;
            report.error = e;
            report.summary = e.message();
            PitfallContext ctx{ex, submission, nullptr, model ? &*model : nullptr, nullptr, &e};
            report.triggered_pitfalls = diagnose_pitfalls(ctx, &report.pitfall_ids);
            return report;
        }

        std::optional<CubeFrame> result;
        try {
            result = eval_pipeline(ex.start_frame, *ast).frame;
        } catch (const WrangleError& e) {
            report.verdict = Verdict::incorrect;
            report.error = e;
            report.summary = e.message();
            PitfallContext ctx{ex, submission, &*ast, model ? &*model : nullptr, nullptr, &e};
            report.triggered_pitfalls = diagnose_pitfalls(ctx, &report.pitfall_ids);
            return report;
        }

        const CubeFrame& expected = *ex.expected.frame;
        auto cmp = compare_frames(expected, *result, ex.expected.mode == ExpectedMode::exact_frame);
        report.cell_diffs = cmp.diff;
        report.unexpected_rows = cmp.unexpected_rows;

        PitfallContext ctx{ex, submission, &*ast, model ? &*model : nullptr, &*result, nullptr};
        report.triggered_pitfalls = diagnose_pitfalls(ctx, &report.pitfall_ids);
        bool hard = std::any_of(report.pitfall_ids.begin(), report.pitfall_ids.end(), [](const std::string& id) {
            const PitfallRule* r = find_pitfall_rule(id);
            return r && r->hard;
        });
        report.verdict = cmp.equal && !hard ? Verdict::correct : Verdict::incorrect;
        report.summary = report.verdict == Verdict::correct ? "correct" : "the result does not match the expected data set";
    } catch (const WrangleError& e) {
        report.verdict = Verdict::incorrect;
        report.error = e;
        report.summary = e.message();
    } catch (const std::exception& e) {
        report.verdict = Verdict::incorrect;
        report.summary = std::string("internal error: ") + e.what();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Exercise files

inline Exercise exercise_from_json(const wire::json& j) {
    auto need_string = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_string()) {
            throw WrangleError(ErrorKind::invalid_frame, std::string("exercise is missing string field `") + key + "`");
        }
        return j.at(key).get<std::string>();
    };
    Exercise ex;
    ex.id = need_string("id");
    ex.prompt = need_string("prompt");
    ex.model_solution = need_string("model_solution");

    if (!j.contains("start_frame")) throw WrangleError(ErrorKind::invalid_frame, "exercise " + ex.id + " has no start_frame");
    const auto& sf = j.at("start_frame");
    if (sf.is_string()) {
        auto fixture = builtin_fixture(sf.get<std::string>());
        if (!fixture) throw WrangleError(ErrorKind::invalid_frame, "unknown fixture '" + sf.get<std::string>() + "'");
        ex.start_frame = *fixture;
    } else {
        ex.start_frame = wire::frame_from_json(sf);
    }

    if (!j.contains("expected") || !j.at("expected").is_object()) {
        throw WrangleError(ErrorKind::invalid_frame, "exercise " + ex.id + " has no expected result");
    }
    const auto& e = j.at("expected");
    auto mode = e.contains("mode") && e.at("mode").is_string() ? mode_from_string(e.at("mode").get<std::string>())
                                                                  : std::nullopt;
    if (!mode) throw WrangleError(ErrorKind::invalid_frame, "exercise " + ex.id + ": unknown expected mode");
    ex.expected.mode = *mode;
    if (*mode == ExpectedMode::scalar_answers) {
        if (!e.contains("answers") || !e.at("answers").is_array()) {
            throw WrangleError(ErrorKind::invalid_frame, "exercise " + ex.id + ": scalar_answers needs `answers`");
        }
        for (const auto& a : e.at("answers")) {
            ex.expected.answers.push_back(a.is_string() ? a.get<std::string>() : a.dump());
        }
        ex.expected.ordered = e.value("ordered", false);
    } else {
        if (!e.contains("frame")) throw WrangleError(ErrorKind::invalid_frame, "exercise " + ex.id + ": frame mode needs `frame`");
        ex.expected.frame = wire::frame_from_json(e.at("frame"));
    }

    if (j.contains("pitfalls")) {
        for (const auto& p : j.at("pitfalls")) {
            auto id = p.get<std::string>();
            if (!find_pitfall_rule(id)) throw WrangleError(ErrorKind::invalid_frame, "unknown pitfall rule '" + id + "'");
            ex.pitfalls.push_back(id);
        }
    }
    return ex;
}

inline wire::json exercise_to_json(const Exercise& ex) {
    wire::json expected = {{"mode", std::string(to_string(ex.expected.mode))}};
    if (ex.expected.mode == ExpectedMode::scalar_answers) {
        expected["answers"] = ex.expected.answers;
        expected["ordered"] = ex.expected.ordered;
    } else {
        expected["frame"] = wire::frame_to_json(*ex.expected.frame);
    }
    return {{"id", ex.id},
            {"prompt", ex.prompt},
            {"start_frame", wire::frame_to_json(ex.start_frame)},
            {"expected", expected},
            {"model_solution", ex.model_solution},
            {"pitfalls", ex.pitfalls}};
}

/// Accepts either a JSON array of exercises or a single exercise object.
inline std::vector<Exercise> parse_exercise_bank(std::string_view text) {
    wire::json j;
    try {
        j = wire::json::parse(text);
    } catch (const wire::json::exception& e) {
        throw WrangleError(ErrorKind::invalid_frame, std::string("invalid exercise JSON: ") + e.what());
    }
    std::vector<Exercise> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(exercise_from_json(e));
    } else {
        out.push_back(exercise_from_json(j));
    }
    return out;
}

inline wire::json grade_report_to_json(const GradeReport& r) {
    wire::json j = {{"verdict", std::string(to_string(r.verdict))},
                    {"cell_diffs", wire::diff_to_json(r.cell_diffs)},
                    {"triggered_pitfalls", r.triggered_pitfalls},
                    {"pitfall_ids", r.pitfall_ids},
                    {"summary", r.summary}};
    wire::json unexpected = wire::json::array();
    for (auto u : r.unexpected_rows) unexpected.push_back(u + 1);
    j["unexpected_rows"] = std::move(unexpected);
    j["error"] = r.error ? wire::error_to_json(*r.error) : wire::json(nullptr);
    return j;
}

// Hand-computed on the figure1 fixture:
//   red=(3,4,5) orange=(4,3,6) yellow=(5,5,3) green=(6,4,5) blue=(3,6,4) purple=(4,4,5)
inline constexpr std::string_view builtin_exercise_json = R"JSON([
  {"id": "warmup-observations",
   "prompt": "How many observations (rows of cubes) are in your data set?",
   "start_frame": "figure1",
   "expected": {"mode": "scalar_answers", "answers": ["3"], "ordered": true},
   "model_solution": "3", "pitfalls": []},
  {"id": "warmup-values",
   "prompt": "Which distinct values appear in the data set? (Each value is a cube face shape.)",
   "start_frame": "figure1",
   "expected": {"mode": "scalar_answers", "answers": ["3", "4", "5", "6"], "ordered": false},
   "model_solution": "3, 4, 5, 6", "pitfalls": []},
  {"id": "warmup-columns",
   "prompt": "How many columns (variables) are in your data set?",
   "start_frame": "figure1",
   "expected": {"mode": "scalar_answers", "answers": ["6"], "ordered": true},
   "model_solution": "6", "pitfalls": []},
  {"id": "warmup-names",
   "prompt": "What names would you give the columns?",
   "start_frame": "figure1",
   "expected": {"mode": "scalar_answers",
                "answers": ["red", "orange", "yellow", "green", "blue", "purple"], "ordered": false},
   "model_solution": "red, orange, yellow, green, blue, purple", "pitfalls": []},
  {"id": "warmup-dims",
   "prompt": "Give the dimensions of your data set as: observations, columns.",
   "start_frame": "figure1",
   "expected": {"mode": "scalar_answers", "answers": ["3", "6"], "ordered": true},
   "model_solution": "3, 6", "pitfalls": []},

  {"id": "filter-1",
   "prompt": "Take your data frame and then filter it: keep only the rows where the red cube is a triangle (red is 3) OR the green cube has more than 4 sides (green is greater than 4). Your answer may differ from other groups if your cubes were arranged differently.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 5]}, {"name": "orange", "cells": [4, 6]},
     {"name": "yellow", "cells": [5, 3]}, {"name": "green", "cells": [6, 5]},
     {"name": "blue", "cells": [3, 4]}, {"name": "purple", "cells": [4, 5]}]}},
   "model_solution": "data |>\n  filter(red == 3 | \n         green > 4)",
   "pitfalls": ["filter-drops-columns", "and-or-swap", "equals-vs-double-equals"]},

  {"id": "select-1",
   "prompt": "Keep only the red, yellow and green columns, in that order.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "yellow", "cells": [5, 5, 3]},
     {"name": "green", "cells": [6, 4, 5]}]}},
   "model_solution": "data |>\n  select(red, yellow, \n         green)",
   "pitfalls": []},
  {"id": "select-2",
   "prompt": "Remove the green column and keep everything else.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "blue", "cells": [3, 6, 4]},
     {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  select(-green)",
   "pitfalls": []},

  {"id": "mutate-purple",
   "prompt": "Add a purple column holding the values 4, 4, 5 (square, square, pentagon) for the three observations.",
   "start_frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [3, 6, 4]}]},
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [3, 6, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  mutate(purple = c(4, 4, 5))",
   "pitfalls": ["equals-vs-double-equals"]},
  {"id": "mutate-1",
   "prompt": "Replace the blue column: if red is greater than 3 the blue cube becomes 4, otherwise 5.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [5, 4, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  mutate(\n    blue = ifelse(red > 3, 4, 5)\n  )",
   "pitfalls": ["equals-vs-double-equals"]},
  {"id": "mutate-2",
   "prompt": "Replace orange with 4 where blue is 6 and 3 elsewhere; then set green to the new orange plus 1.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [3, 4, 3]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [4, 5, 4]},
     {"name": "blue", "cells": [3, 6, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  mutate(\n    orange = ifelse(blue == 6, 4, 3),\n    green = orange + 1\n  )",
   "pitfalls": ["equals-vs-double-equals"]},

  {"id": "arrange-1",
   "prompt": "Sort the observations by red, smallest first.",
   "start_frame": "figure1",
   "expected": {"mode": "exact_frame", "frame": {"columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [3, 6, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  arrange(red)",
   "pitfalls": ["desc-misplacement"]},
  {"id": "arrange-2",
   "prompt": "Sort the observations by red, largest first.",
   "start_frame": "figure1",
   "expected": {"mode": "exact_frame", "frame": {"columns": [
     {"name": "red", "cells": [5, 4, 3]}, {"name": "orange", "cells": [6, 3, 4]},
     {"name": "yellow", "cells": [3, 5, 5]}, {"name": "green", "cells": [5, 4, 6]},
     {"name": "blue", "cells": [4, 6, 3]}, {"name": "purple", "cells": [5, 4, 4]}]}},
   "model_solution": "data |>\n  arrange(desc(red))",
   "pitfalls": ["desc-misplacement"]},

  {"id": "groupby-1",
   "prompt": "Group the observations by purple. Notice that the cubes themselves do not move.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"groups": ["purple"], "columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [3, 6, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  group_by(purple)",
   "pitfalls": []},
  {"id": "groupby-2",
   "prompt": "Group by purple, then sort each group by red (smallest first).",
   "start_frame": "figure1",
   "expected": {"mode": "exact_frame", "frame": {"groups": ["purple"], "columns": [
     {"name": "red", "cells": [3, 4, 5]}, {"name": "orange", "cells": [4, 3, 6]},
     {"name": "yellow", "cells": [5, 5, 3]}, {"name": "green", "cells": [6, 4, 5]},
     {"name": "blue", "cells": [3, 6, 4]}, {"name": "purple", "cells": [4, 4, 5]}]}},
   "model_solution": "data |>\n  group_by(purple) |>\n  arrange(red)",
   "pitfalls": ["desc-misplacement"]},

  {"id": "summary-1",
   "prompt": "Build one summary row: the largest red, the largest blue and the smallest orange.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "max(red)", "cells": [5]}, {"name": "max(blue)", "cells": [6]},
     {"name": "min(orange)", "cells": [3]}]}},
   "model_solution": "data |>\n  summarize(\n    max(red),\n    max(blue),\n    min(orange)\n  )",
   "pitfalls": []},
  {"id": "summary-2",
   "prompt": "For each blue value, report the smallest red and the largest green.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "blue", "cells": [3, 4, 6]}, {"name": "min(red)", "cells": [3, 5, 4]},
     {"name": "max(green)", "cells": [6, 5, 4]}]}},
   "model_solution": "data |>\n  group_by(blue) |>\n  summarize(\n    min(red),\n    max(green)\n  )",
   "pitfalls": []},

  {"id": "combined-1",
   "prompt": "Keep rows where blue is greater than 3, keep only red, yellow and blue, then add green as blue minus 1.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "red", "cells": [4, 5]}, {"name": "yellow", "cells": [5, 3]},
     {"name": "blue", "cells": [6, 4]}, {"name": "green", "cells": [5, 3]}]}},
   "model_solution": "data |>\n  filter(blue > 3) |>\n  select(red, yellow, blue)|>\n  mutate(green = blue - 1)",
   "pitfalls": ["equals-vs-double-equals"]},
  {"id": "combined-2",
   "prompt": "Keep rows where blue is greater than 4, then report the largest blue.",
   "start_frame": "figure1",
   "expected": {"mode": "frame_up_to_row_order", "frame": {"columns": [
     {"name": "max(blue)", "cells": [6]}]}},
   "model_solution": "data |>\n  filter(blue > 4) |>\n  summarize(max(blue))",
   "pitfalls": ["equals-vs-double-equals"]}
])JSON";

inline const std::vector<Exercise>& builtin_exercises() {
    static const std::vector<Exercise> bank = parse_exercise_bank(builtin_exercise_json);
    return bank;
}

inline const Exercise* find_exercise(const std::vector<Exercise>& bank, std::string_view id) {
    for (const auto& e : bank) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

}  // namespace cubes
