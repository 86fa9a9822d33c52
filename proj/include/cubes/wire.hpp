#pragma once

// JSON projections shared by the CLI, the HTTP service and the exercise files.

#include <cmath>
#include <string>

#include <json.hpp>

#include "cubes/ast.hpp"
#include "cubes/engine.hpp"
#include "cubes/frame.hpp"

namespace cubes::wire {

using json = nlohmann::json;

inline json cell_to_json(const Cell& c) {
    if (c.is_na()) return "NA";
    double v = c.value();
    if (std::trunc(v) == v && std::fabs(v) < 9007199254740992.0) {
        return static_cast<std::int64_t>(v);
    }
    return v;
}

inline Cell cell_from_json(const json& j, const std::string& column, std::size_t row) {
    const json& v = j.is_object() && j.contains("value") ? j.at("value") : j;
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "NA")) return Cell::na();
    if (v.is_number()) {
        double d = v.get<double>();
        if (std::isfinite(d)) return d;
    }
    throw WrangleError(ErrorKind::invalid_frame,
                       "row " + std::to_string(row + 1) + ", column " + column + ": not a number");
}

/// {nrows, columns:[{name, cells, glyphs}], groups, summary_flag}
inline json frame_to_json(const CubeFrame& f) {
    json cols = json::array();
    for (const auto& c : f.columns()) {
        json cells = json::array();
        json glyphs = json::array();
        for (const auto& cell : c.cells) {
            cells.push_back(cell_to_json(cell));
            glyphs.push_back(std::string(glyph_name(shape_for(cell))));
        }
        cols.push_back({{"name", c.name}, {"cells", std::move(cells)}, {"glyphs", std::move(glyphs)}});
    }
    json groups = json::array();
    if (f.is_grouped()) {
        for (const auto& k : f.groups()->keys) groups.push_back(k);
    }
    return {{"nrows", f.nrows()},
            {"columns", std::move(cols)},
            {"groups", std::move(groups)},
            {"summary_flag", f.is_summary()}};
}

inline CubeFrame frame_from_json(const json& j) {
    if (!j.is_object() || !j.contains("columns") || !j.at("columns").is_array()) {
        throw WrangleError(ErrorKind::invalid_frame, "frame must be an object with a `columns` array");
    }
    std::vector<Column> cols;
    std::optional<std::size_t> nrows;
    if (j.contains("nrows")) {
        if (!j.at("nrows").is_number_unsigned()) {
            throw WrangleError(ErrorKind::invalid_frame, "`nrows` must be a non-negative integer");
        }
        nrows = j.at("nrows").get<std::size_t>();
    }
    for (const auto& jc : j.at("columns")) {
        if (!jc.is_object() || !jc.contains("name") || !jc.at("name").is_string() || !jc.contains("cells") ||
            !jc.at("cells").is_array()) {
            throw WrangleError(ErrorKind::invalid_frame, "each column needs a `name` and a `cells` array");
        }
        Column c{jc.at("name").get<std::string>(), {}};
        const auto& cells = jc.at("cells");
        for (std::size_t r = 0; r < cells.size(); ++r) c.cells.push_back(cell_from_json(cells[r], c.name, r));
        if (!nrows) nrows = c.cells.size();
        cols.push_back(std::move(c));
    }
    std::optional<GroupSpec> groups;
    if (j.contains("groups") && !j.at("groups").is_null()) {
        if (!j.at("groups").is_array()) throw WrangleError(ErrorKind::invalid_frame, "`groups` must be an array");
        GroupSpec g;
        for (const auto& k : j.at("groups")) {
            if (!k.is_string()) throw WrangleError(ErrorKind::invalid_frame, "group keys must be strings");
            g.keys.push_back(k.get<std::string>());
        }
        if (!g.keys.empty()) groups = std::move(g);
    }
    CubeFrame f = CubeFrame::from_columns(std::move(cols), nrows.value_or(0), std::move(groups));
    if (j.contains("summary_flag") && j.at("summary_flag").is_boolean()) {
        f = f.with_summary(j.at("summary_flag").get<bool>());
    }
    return f;
}

/// Row indices are shown 1-based, matching how students count observations.
inline json diff_to_json(const FrameDiff& d) {
    auto one_based = [](const std::vector<std::size_t>& rows) {
        json out = json::array();
        for (auto r : rows) out.push_back(r + 1);
        return out;
    };
    json j = {{"kept_rows", one_based(d.kept_rows)},
              {"dropped_rows", one_based(d.dropped_rows)},
              {"added_columns", d.added_columns},
              {"dropped_columns", d.dropped_columns},
              {"changed_columns", d.changed_columns},
              {"columns_reordered", d.columns_reordered},
              {"groups_changed", d.groups_changed},
              {"aggregated", d.aggregated}};
    j["row_permutation"] = d.row_permutation ? json(one_based(*d.row_permutation)) : json(nullptr);
    return j;
}

inline json span_to_json(const Span& s) { return {{"start", s.start}, {"end", s.end}}; }

inline json error_to_json(const WrangleError& e) {
    json j = {{"kind", std::string(to_string(e.kind()))}, {"message", e.message()}, {"hint", e.hint()}};
    j["span"] = e.span() ? span_to_json(*e.span()) : json(nullptr);
    j["stage"] = e.stage() ? json(*e.stage()) : json(nullptr);
    return j;
}

namespace detail {

inline std::string_view unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::logical_not: return "not";
        case UnaryOp::negate: return "negate";
        case UnaryOp::desc: return "desc";
    }
    return "?";
}

inline std::string_view binary_name(BinaryOp op) {
    switch (op) {
        case BinaryOp::lt: return "lt";
        case BinaryOp::gt: return "gt";
        case BinaryOp::le: return "le";
        case BinaryOp::ge: return "ge";
        case BinaryOp::eq: return "eq";
        case BinaryOp::ne: return "ne";
        case BinaryOp::in: return "in";
        case BinaryOp::logical_and: return "and";
        case BinaryOp::logical_or: return "or";
        case BinaryOp::add: return "add";
        case BinaryOp::sub: return "sub";
        case BinaryOp::mul: return "mul";
    }
    return "?";
}

}  // namespace detail

/// Debug form: {kind, span, ..., children}. Used for error underlining in the workbench.
inline json expr_to_json(const Expr& e) {
    json j = {{"span", span_to_json(e.span)}};
    json children = json::array();
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                j["kind"] = "NumberLit";
                j["value"] = n.value;
            } else if constexpr (std::is_same_v<T, NaLit>) {
                j["kind"] = "NaLit";
            } else if constexpr (std::is_same_v<T, LogicalLit>) {
                j["kind"] = "LogicalLit";
                j["value"] = n.value;
            } else if constexpr (std::is_same_v<T, ColumnRef>) {
                j["kind"] = "ColumnRef";
                j["name"] = n.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                j["kind"] = "Unary";
                j["op"] = detail::unary_name(n.op);
                children.push_back(expr_to_json(*n.operand));
            } else if constexpr (std::is_same_v<T, Binary>) {
                j["kind"] = "Binary";
                j["op"] = detail::binary_name(n.op);
                children.push_back(expr_to_json(*n.lhs));
                children.push_back(expr_to_json(*n.rhs));
            } else {
                j["kind"] = "Call";
                j["name"] = n.name;
                for (const auto& a : n.args) children.push_back(expr_to_json(*a));
                json named = json::array();
                for (const auto& a : n.named_args) {
                    named.push_back({{"name", a.name}, {"value", expr_to_json(*a.value)}});
                }
                j["named_args"] = std::move(named);
            }
        },
        e.node);
    j["children"] = std::move(children);
    return j;
}

inline json verb_to_json(const VerbAst& v) {
    json j = {{"kind", "Verb"}, {"verb", std::string(to_string(v.verb))}, {"span", span_to_json(v.span)}};
    json children = json::array();
    for (const auto& e : v.exprs) children.push_back(expr_to_json(*e));
    for (const auto& c : v.columns) {
        children.push_back({{"kind", "SelectItem"}, {"name", c.name}, {"exclude", c.exclude},
                            {"span", span_to_json(c.span)}});
    }
    for (const auto& a : v.assignments) {
        children.push_back({{"kind", "Assignment"}, {"target", a.target}, {"value", expr_to_json(*a.value)}});
    }
    j["children"] = std::move(children);
    return j;
}

inline json pipeline_to_json(const PipelineAst& p) {
    json stages = json::array();
    for (const auto& s : p.stages) stages.push_back(verb_to_json(s));
    return {{"kind", "Pipeline"}, {"source", "data"}, {"span", span_to_json(p.source_span)}, {"stages", stages}};
}

inline json stage_to_json(const StageTrace& t) {
    return {{"verb", std::string(to_string(t.verb.verb))},
            {"text", pretty_print(t.verb)},
            {"span", span_to_json(t.verb.span)},
            {"frame", frame_to_json(t.output)},
            {"diff", diff_to_json(t.diff)},
            {"notes", t.notes}};
}

}  // namespace cubes::wire
