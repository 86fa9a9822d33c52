#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubes/ast.hpp"
#include "cubes/frame.hpp"
#include "cubes/logic.hpp"
#include "cubes/stats.hpp"

namespace cubes {

/// Result of evaluating an expression: either numbers or truth values.
/// Length is the number of rows in scope, or 1 for a scalar that broadcasts.
struct Vector {
    enum class Type { number, logical };

    Type type = Type::number;
    std::vector<Cell> numbers;
    std::vector<Logical> logicals;

    static Vector of_numbers(std::vector<Cell> v) { return {Type::number, std::move(v), {}}; }
    static Vector of_logicals(std::vector<Logical> v) { return {Type::logical, {}, std::move(v)}; }

    bool is_number() const noexcept { return type == Type::number; }
    bool is_logical() const noexcept { return type == Type::logical; }
    std::size_t size() const noexcept { return is_number() ? numbers.size() : logicals.size(); }

    friend bool operator==(const Vector&, const Vector&) = default;
};

inline constexpr std::string_view summary_functions[] = {"min", "max", "mean", "sd", "sum", "quantile"};
inline constexpr std::string_view known_functions[] = {"min", "max",      "mean",  "sd", "sum",
                                                       "quantile", "ifelse", "is.na", "c",  "desc"};

inline bool is_summary_function(std::string_view name) {
    return std::find(std::begin(summary_functions), std::end(summary_functions), name) !=
           std::end(summary_functions);
}

/// Per-verb snapshot used by the REPL, the grader and the workbench.
struct StageTrace {
    VerbAst verb;
    CubeFrame input;
    CubeFrame output;
    FrameDiff diff;
    std::vector<std::string> notes;
};

struct PipelineResult {
    CubeFrame frame;
    std::vector<StageTrace> stages;
};

/// Output of a single verb together with the row lineage diff_frames needs.
struct VerbResult {
    CubeFrame frame;
    RowLineage lineage;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string quoted(std::string_view s) { return "`" + std::string(s) + "`"; }

[[noreturn]] inline void unknown_column(const CubeFrame& f, const std::string& name,
                                        std::optional<Span> span) {
    std::string hint;
    auto names = f.names();
    if (auto near = nearest_match(name, names)) hint = "did you mean " + *near + "?";
    throw WrangleError(ErrorKind::unknown_column, "unknown column '" + name + "'", span, hint);
}

inline std::string_view type_name(const Vector& v) {
    return v.is_number() ? "numbers" : "TRUE/FALSE values";
}

/// Lexicographic key order with NA last.
inline bool key_less(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (a[i].is_na()) return false;
        if (b[i].is_na()) return true;
        return a[i].value() < b[i].value();
    }
    return false;
}

struct Group {
    std::vector<Cell> key;
    std::vector<std::size_t> rows;
};

/// Partition rows by key tuple; groups come back in ascending key order.
/// An ungrouped frame is a single group holding every row.
inline std::vector<Group> partition(const CubeFrame& f) {
    if (!f.is_grouped()) {
        Group g;
        g.rows.resize(f.nrows());
        std::iota(g.rows.begin(), g.rows.end(), std::size_t{0});
        return {std::move(g)};
    }
    std::vector<std::size_t> key_cols;
    for (const auto& k : f.groups()->keys) key_cols.push_back(*f.index_of(k));
    std::vector<Group> groups;
    for (std::size_t r = 0; r < f.nrows(); ++r) {
        std::vector<Cell> key;
        for (auto c : key_cols) key.push_back(f.at(r, c));
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.key == key; });
        if (it == groups.end()) {
            groups.push_back({std::move(key), {r}});
        } else {
            it->rows.push_back(r);
        }
    }
    std::stable_sort(groups.begin(), groups.end(),
                     [](const Group& a, const Group& b) { return key_less(a.key, b.key); });
    return groups;
}

/// Evaluates expressions over a subset of a frame's rows.
class Evaluator {
public:
    Evaluator(const CubeFrame& frame, const std::vector<std::size_t>& rows) : frame_(frame), rows_(rows) {}

    Vector eval(const Expr& e) const {
        return std::visit([&](const auto& node) { return eval_node(node, e); }, e.node);
    }

    Vector eval(const ExprPtr& e) const { return eval(*e); }

private:
    Vector eval_node(const NumberLit& n, const Expr&) const { return Vector::of_numbers({Cell(n.value)}); }

    Vector eval_node(const NaLit&, const Expr&) const { return Vector::of_numbers({Cell::na()}); }

    Vector eval_node(const LogicalLit& l, const Expr&) const {
        return Vector::of_logicals({to_logical(l.value)});
    }

    Vector eval_node(const ColumnRef& c, const Expr& e) const {
        const Column* column = frame_.find(c.name);
        if (!column) unknown_column(frame_, c.name, e.span);
        std::vector<Cell> out;
        out.reserve(rows_.size());
        for (auto r : rows_) out.push_back(column->cells[r]);
        return Vector::of_numbers(std::move(out));
    }

    Vector eval_node(const Unary& u, const Expr& e) const {
        if (u.op == UnaryOp::desc) {
            throw WrangleError(ErrorKind::desc_outside_arrange, "desc() only works inside arrange()", e.span,
                               "use `arrange(desc(column))` to sort from largest to smallest");
        }
        Vector v = eval(u.operand);
        if (u.op == UnaryOp::logical_not) {
            require_logical(v, *u.operand, "`!`");
            for (auto& x : v.logicals) x = logical_not(x);
        } else {
            require_number(v, *u.operand, "`-`");
            for (auto& x : v.numbers) {
                if (!x.is_na()) x = Cell(-x.value());
            }
        }
        return v;
    }

    std::size_t broadcast_size(const Vector& a, const Vector& b, Span span) const {
        if (a.size() == b.size() || b.size() == 1) return a.size();
        if (a.size() == 1) return b.size();
        throw WrangleError(ErrorKind::length_mismatch,
                           "cannot combine " + std::to_string(a.size()) + " values with " +
                               std::to_string(b.size()) + " values",
                           span, "each side must have one value per row, or a single value");
    }

    template <typename T>
    static const T& pick(const std::vector<T>& v, std::size_t i) {
        return v.size() == 1 ? v[0] : v[i];
    }

    Vector eval_node(const Binary& b, const Expr& e) const {
        Vector lhs = eval(b.lhs);
        if (b.op == BinaryOp::in) {
            Vector rhs = eval(b.rhs);
            require_number(lhs, *b.lhs, "`%in%`");
            require_number(rhs, *b.rhs, "`%in%`");
            bool set_has_na = std::any_of(rhs.numbers.begin(), rhs.numbers.end(),
                                          [](const Cell& c) { return c.is_na(); });
            std::vector<Logical> out;
            out.reserve(lhs.size());
            for (const auto& x : lhs.numbers) {
                if (x.is_na()) {
                    out.push_back(set_has_na ? Logical::t : Logical::na);
                    continue;
                }
                bool hit = std::any_of(rhs.numbers.begin(), rhs.numbers.end(), [&](const Cell& c) {
                    return !c.is_na() && c.value() == x.value();
                });
                out.push_back(to_logical(hit));
            }
            return Vector::of_logicals(std::move(out));
        }

        Vector rhs = eval(b.rhs);
        std::size_t n = broadcast_size(lhs, rhs, e.span);

        if (b.op == BinaryOp::logical_and || b.op == BinaryOp::logical_or) {
            std::string_view what = b.op == BinaryOp::logical_and ? "`&`" : "`|`";
            require_logical(lhs, *b.lhs, what);
            require_logical(rhs, *b.rhs, what);
            std::vector<Logical> out(n);
            for (std::size_t i = 0; i < n; ++i) {
                Logical x = pick(lhs.logicals, i), y = pick(rhs.logicals, i);
                out[i] = b.op == BinaryOp::logical_and ? logical_and(x, y) : logical_or(x, y);
            }
            return Vector::of_logicals(std::move(out));
        }

        std::string what = quoted(op_text(b.op));
        require_number(lhs, *b.lhs, what);
        require_number(rhs, *b.rhs, what);

        if (b.op == BinaryOp::add || b.op == BinaryOp::sub || b.op == BinaryOp::mul) {
            std::vector<Cell> out(n);
            for (std::size_t i = 0; i < n; ++i) {
                const Cell& x = pick(lhs.numbers, i);
                const Cell& y = pick(rhs.numbers, i);
                if (x.is_na() || y.is_na()) continue;
                double r = b.op == BinaryOp::add   ? x.value() + y.value()
                           : b.op == BinaryOp::sub ? x.value() - y.value()
                                                   : x.value() * y.value();
                out[i] = Cell(r);
            }
            return Vector::of_numbers(std::move(out));
        }

        std::vector<Logical> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Cell& x = pick(lhs.numbers, i);
            const Cell& y = pick(rhs.numbers, i);
            if (x.is_na() || y.is_na()) {
                out[i] = Logical::na;
                continue;
            }
            double l = x.value(), r = y.value();
            bool res = false;
            switch (b.op) {
                case BinaryOp::lt: res = l < r; break;
                case BinaryOp::gt: res = l > r; break;
                case BinaryOp::le: res = l <= r; break;
                case BinaryOp::ge: res = l >= r; break;
                case BinaryOp::eq: res = l == r; break;
                case BinaryOp::ne: res = l != r; break;
                default: break;
            }
            out[i] = to_logical(res);
        }
        return Vector::of_logicals(std::move(out));
    }

    Vector eval_node(const Call& c, const Expr& e) const {
        auto arity = [&](std::size_t n) {
            if (c.args.size() != n) {
                throw WrangleError(ErrorKind::type_error,
                                   c.name + "() takes " + std::to_string(n) + " argument" +
                                       (n == 1 ? "" : "s") + ", got " + std::to_string(c.args.size()),
                                   e.span);
            }
        };
        auto no_named = [&] {
            if (!c.named_args.empty()) {
                throw WrangleError(ErrorKind::type_error,
                                   c.name + "() has no argument called '" + c.named_args[0].name + "'",
                                   c.named_args[0].name_span);
            }
        };

        if (c.name == "is.na") {
            arity(1);
            no_named();
            Vector v = eval(c.args[0]);
            std::vector<Logical> out;
            if (v.is_number()) {
                for (const auto& x : v.numbers) out.push_back(to_logical(x.is_na()));
            } else {
                for (auto x : v.logicals) out.push_back(to_logical(x == Logical::na));
            }
            return Vector::of_logicals(std::move(out));
        }
        if (c.name == "ifelse") {
            arity(3);
            no_named();
            Vector test = eval(c.args[0]);
            Vector yes = eval(c.args[1]);
            Vector no = eval(c.args[2]);
            require_logical(test, *c.args[0], "the test in ifelse()");
            if (yes.type != no.type) {
                throw WrangleError(ErrorKind::type_error, "ifelse() branches must both be numbers or both TRUE/FALSE",
                                   e.span);
            }
            std::size_t n = broadcast_size(broadcast_probe(test, yes, e.span), no, e.span);
            if (yes.is_number()) {
                std::vector<Cell> out(n);
                for (std::size_t i = 0; i < n; ++i) {
                    Logical t = pick(test.logicals, i);
                    if (t != Logical::na) out[i] = t == Logical::t ? pick(yes.numbers, i) : pick(no.numbers, i);
                }
                return Vector::of_numbers(std::move(out));
            }
            std::vector<Logical> out(n, Logical::na);
            for (std::size_t i = 0; i < n; ++i) {
                Logical t = pick(test.logicals, i);
                if (t != Logical::na) out[i] = t == Logical::t ? pick(yes.logicals, i) : pick(no.logicals, i);
            }
            return Vector::of_logicals(std::move(out));
        }
        if (c.name == "c") {
            no_named();
            if (c.args.empty()) throw WrangleError(ErrorKind::type_error, "c() needs at least one value", e.span);
            Vector out = eval(c.args[0]);
            for (std::size_t i = 1; i < c.args.size(); ++i) {
                Vector next = eval(c.args[i]);
                if (next.type != out.type) {
                    throw WrangleError(ErrorKind::type_error, "c() cannot mix numbers and TRUE/FALSE values",
                                       c.args[i]->span);
                }
                out.numbers.insert(out.numbers.end(), next.numbers.begin(), next.numbers.end());
                out.logicals.insert(out.logicals.end(), next.logicals.begin(), next.logicals.end());
            }
            return out;
        }
        if (is_summary_function(c.name)) {
            arity(1);
            Vector x = eval(c.args[0]);
            require_number(x, *c.args[0], c.name + "()");
            if (c.name == "quantile") {
                if (c.named_args.size() != 1 || c.named_args[0].name != "probs") {
                    throw WrangleError(ErrorKind::type_error, "quantile() needs `probs = <number between 0 and 1>`",
                                       e.span, "for example quantile(red, probs = 0.25)");
                }
                Vector p = eval(c.named_args[0].value);
                if (!p.is_number() || p.size() != 1 || p.numbers[0].is_na()) {
                    throw WrangleError(ErrorKind::type_error, "probs must be a single number",
                                       c.named_args[0].value->span);
                }
                try {
                    return Vector::of_numbers({stats::quantile(x.numbers, p.numbers[0].value())});
                } catch (WrangleError& err) {
                    throw WrangleError(err.kind(), err.message(), c.named_args[0].value->span);
                }
            }
            no_named();
            Cell r;
            if (c.name == "min") r = stats::min(x.numbers);
            else if (c.name == "max") r = stats::max(x.numbers);
            else if (c.name == "mean") r = stats::mean(x.numbers);
            else if (c.name == "sd") r = stats::sd(x.numbers);
            else r = stats::sum(x.numbers);
            return Vector::of_numbers({r});
        }
        std::string hint;
        if (auto near = nearest_match(c.name, known_functions)) hint = "did you mean " + *near + "?";
        throw WrangleError(ErrorKind::unknown_function, "unknown function '" + c.name + "'", e.span, hint);
    }

    // The operand whose length ifelse's test/yes pair broadcasts to. A length-1
    // value against a length-0 column broadcasts to 0, not 1.
    const Vector& broadcast_probe(const Vector& test, const Vector& yes, Span span) const {
        return broadcast_size(test, yes, span) == test.size() ? test : yes;
    }

    static void require_number(const Vector& v, const Expr& where, std::string_view ctx) {
        if (!v.is_number()) {
            throw WrangleError(ErrorKind::type_error,
                               std::string(ctx) + " needs numbers but got " + std::string(type_name(v)),
                               where.span);
        }
    }

    static void require_logical(const Vector& v, const Expr& where, std::string_view ctx) {
        if (!v.is_logical()) {
            throw WrangleError(ErrorKind::type_error,
                               std::string(ctx) + " needs TRUE/FALSE values but got numbers", where.span,
                               "comparison expected; did you mean `==`?");
        }
    }

    const CubeFrame& frame_;
    const std::vector<std::size_t>& rows_;
};

/// A result must hold one value per row in scope, or a single broadcast value.
inline void check_length(const Vector& v, std::size_t expected, Span span) {
    if (v.size() != expected && v.size() != 1) {
        throw WrangleError(ErrorKind::length_mismatch,
                           "expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()),
                           span, "give one value per row, or a single value for every row");
    }
}

inline bool is_aggregate(const Expr& e) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ColumnRef>) {
                return false;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return is_aggregate(*n.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return is_aggregate(*n.lhs) && is_aggregate(*n.rhs);
            } else if constexpr (std::is_same_v<T, Call>) {
                if (is_summary_function(n.name)) return true;
                for (const auto& a : n.args) {
                    if (!is_aggregate(*a)) return false;
                }
                return true;
            } else {
                return true;
            }
        },
        e.node);
}

/// Reports unknown columns before any rows are evaluated, so empty frames
/// and empty groups fail the same way as full ones.
inline void require_columns(const CubeFrame& f, const Expr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ColumnRef>) {
                if (!f.find(n.name)) unknown_column(f, n.name, e.span);
            } else if constexpr (std::is_same_v<T, Unary>) {
                require_columns(f, *n.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                require_columns(f, *n.lhs);
                require_columns(f, *n.rhs);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args) require_columns(f, *a);
                for (const auto& a : n.named_args) require_columns(f, *a.value);
            }
        },
        e.node);
}

inline std::string join_rows(const std::vector<std::size_t>& rows) {
    std::string s;
    for (auto r : rows) {
        if (!s.empty()) s += ",";
        s += std::to_string(r + 1);
    }
    return s;
}

}  // namespace detail

/// Evaluates an expression over every row of an ungrouped view of `f`.
inline Vector eval_expr(const CubeFrame& f, const Expr& e) {
    std::vector<std::size_t> rows(f.nrows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return detail::Evaluator(f, rows).eval(e);
}

inline Vector eval_expr(const CubeFrame& f, const ExprPtr& e) { return eval_expr(f, *e); }

// ---------------------------------------------------------------------------
// Verbs

inline VerbResult filter_rows(const CubeFrame& f, const std::vector<ExprPtr>& predicates) {
    for (const auto& p : predicates) detail::require_columns(f, *p);
    std::vector<Logical> keep(f.nrows(), Logical::t);
    for (const auto& g : detail::partition(f)) {
        detail::Evaluator ev(f, g.rows);
        for (const auto& p : predicates) {
            Vector v = ev.eval(p);
            if (!v.is_logical()) {
                throw WrangleError(ErrorKind::type_error, "filter() needs a TRUE/FALSE condition, got numbers",
                                   p->span, "comparison expected; did you mean `==`?");
            }
            detail::check_length(v, g.rows.size(), p->span);
            for (std::size_t i = 0; i < g.rows.size(); ++i) {
                auto r = g.rows[i];
                keep[r] = logical_and(keep[r], v.logicals.size() == 1 ? v.logicals[0] : v.logicals[i]);
            }
        }
    }
    VerbResult out;
    std::vector<std::size_t> na_rows;
    for (std::size_t r = 0; r < f.nrows(); ++r) {
        if (keep[r] == Logical::t) out.lineage.source_rows.push_back(r);
        if (keep[r] == Logical::na) na_rows.push_back(r);
    }
    if (!na_rows.empty()) {
        out.notes.push_back("condition was NA (missing) for row(s) " + detail::join_rows(na_rows) +
                            "; those rows were dropped");
    }
    std::vector<Column> cols;
    for (const auto& c : f.columns()) {
        Column nc{c.name, {}};
        for (auto r : out.lineage.source_rows) nc.cells.push_back(c.cells[r]);
        cols.push_back(std::move(nc));
    }
    out.frame = CubeFrame::from_columns(std::move(cols), out.lineage.source_rows.size(), f.groups())
                    .with_summary(f.is_summary());
    return out;
}

inline VerbResult select_columns(const CubeFrame& f, const std::vector<SelectItem>& items) {
    VerbResult out;
    out.lineage = RowLineage::identity(f.nrows());
    if (items.empty()) throw WrangleError(ErrorKind::parse, "select() needs at least one column");
    bool exclude = items.front().exclude;
    for (const auto& it : items) {
        if (it.exclude != exclude) {
            throw WrangleError(ErrorKind::mixed_select_signs, "select cannot mix kept and removed columns",
                               it.span);
        }
        if (!f.index_of(it.name)) detail::unknown_column(f, it.name, it.span);
    }
    std::vector<std::string> chosen;
    if (exclude) {
        for (const auto& c : f.columns()) {
            bool drop = std::any_of(items.begin(), items.end(), [&](const SelectItem& it) { return it.name == c.name; });
            if (!drop) chosen.push_back(c.name);
        }
    } else {
        for (const auto& it : items) {
            if (std::find(chosen.begin(), chosen.end(), it.name) != chosen.end()) {
                out.notes.push_back("column '" + it.name + "' was listed more than once; kept the first");
                continue;
            }
            chosen.push_back(it.name);
        }
    }
    if (f.is_grouped()) {
        for (const auto& k : f.groups()->keys) {
            if (std::find(chosen.begin(), chosen.end(), k) == chosen.end()) {
                Span span = items.front().span;
                for (const auto& it : items) {
                    if (it.name == k) span = it.span;
                }
                throw WrangleError(ErrorKind::select_drops_group_key,
                                   "select would drop the grouping column '" + k + "'", span,
                                   "keep the group_by column, or select before grouping");
            }
        }
    }
    std::vector<Column> cols;
    for (const auto& name : chosen) cols.push_back(*f.find(name));
    out.frame = CubeFrame::from_columns(std::move(cols), f.nrows(), f.groups()).with_summary(f.is_summary());
    return out;
}

inline VerbResult mutate_columns(const CubeFrame& f, const std::vector<Assignment>& assignments) {
    CubeFrame cur = f;
    for (const auto& a : assignments) {
        if (!is_valid_column_name(a.target)) {
            throw WrangleError(ErrorKind::invalid_name, "invalid column name '" + a.target + "'", a.target_span);
        }
        detail::require_columns(cur, *a.value);
        std::vector<Cell> cells(cur.nrows());
        for (const auto& g : detail::partition(cur)) {
            Vector v = detail::Evaluator(cur, g.rows).eval(a.value);
            if (!v.is_number()) {
                throw WrangleError(ErrorKind::type_error,
                                   "mutate() needs numbers for '" + a.target + "', got TRUE/FALSE values",
                                   a.value->span, "wrap the condition in ifelse(condition, value_if_true, value_if_false)");
            }
            detail::check_length(v, g.rows.size(), a.value->span);
            for (std::size_t i = 0; i < g.rows.size(); ++i) {
                cells[g.rows[i]] = v.numbers.size() == 1 ? v.numbers[0] : v.numbers[i];
            }
        }
        std::vector<Column> cols = cur.columns();
        if (auto idx = cur.index_of(a.target)) {
            cols[*idx].cells = std::move(cells);
        } else {
            cols.push_back({a.target, std::move(cells)});
        }
        cur = CubeFrame::from_columns(std::move(cols), cur.nrows(), cur.groups()).with_summary(cur.is_summary());
    }
    return {cur, RowLineage::identity(f.nrows()), {}};
}

inline VerbResult arrange_rows(const CubeFrame& f, const std::vector<ExprPtr>& keys) {
    struct Key {
        std::size_t col;
        bool desc;
    };
    std::vector<Key> resolved;
    for (const auto& k : keys) {
        const Expr* target = k.get();
        bool desc = false;
        if (auto u = std::get_if<Unary>(&k->node); u && u->op == UnaryOp::desc) {
            target = u->operand.get();
            desc = true;
        }
        auto ref = std::get_if<ColumnRef>(&target->node);
        if (!ref) {
            throw WrangleError(ErrorKind::invalid_arrange_key, "arrange() sorts by column names", k->span,
                               "write `arrange(red)` or `arrange(desc(red))`");
        }
        auto idx = f.index_of(ref->name);
        if (!idx) detail::unknown_column(f, ref->name, target->span);
        resolved.push_back({*idx, desc});
    }

    std::vector<std::size_t> group_cols;
    if (f.is_grouped()) {
        for (const auto& g : f.groups()->keys) group_cols.push_back(*f.index_of(g));
    }

    std::vector<std::size_t> order(f.nrows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (auto gc : group_cols) {
            const Cell &x = f.at(a, gc), &y = f.at(b, gc);
            if (x == y) continue;
            if (x.is_na()) return false;
            if (y.is_na()) return true;
            return x.value() < y.value();
        }
        for (const auto& k : resolved) {
            const Cell &x = f.at(a, k.col), &y = f.at(b, k.col);
            if (x == y) continue;
            if (x.is_na()) return false;  // NA last in either direction
            if (y.is_na()) return true;
            return k.desc ? x.value() > y.value() : x.value() < y.value();
        }
        return false;
    });

    std::vector<Column> cols;
    for (const auto& c : f.columns()) {
        Column nc{c.name, {}};
        for (auto r : order) nc.cells.push_back(c.cells[r]);
        cols.push_back(std::move(nc));
    }
    VerbResult out;
    out.frame = CubeFrame::from_columns(std::move(cols), f.nrows(), f.groups()).with_summary(f.is_summary());
    out.lineage.source_rows = std::move(order);
    return out;
}

inline VerbResult group_rows(const CubeFrame& f, const std::vector<ExprPtr>& keys) {
    GroupSpec spec;
    for (const auto& k : keys) {
        auto ref = std::get_if<ColumnRef>(&k->node);
        if (!ref) {
            throw WrangleError(ErrorKind::type_error, "group_by() takes column names", k->span);
        }
        if (!f.index_of(ref->name)) detail::unknown_column(f, ref->name, k->span);
        spec.keys.push_back(ref->name);
    }
    VerbResult out;
    out.frame = f.with_groups(std::move(spec));
    out.lineage = RowLineage::identity(f.nrows());
    if (f.is_grouped()) out.notes.push_back("replaced the previous grouping");
    return out;
}

inline VerbResult summarize_groups(const CubeFrame& f, const std::vector<Assignment>& items) {
    std::vector<std::string> labels;
    std::vector<std::string> key_names = f.is_grouped() ? f.groups()->keys : std::vector<std::string>{};
    for (const auto& it : items) {
        detail::require_columns(f, *it.value);
        if (!detail::is_aggregate(*it.value)) {
            throw WrangleError(ErrorKind::non_scalar_summary, "summarize() needs one value per group",
                               it.value->span, "wrap columns in a summary function such as max(red) or mean(red)");
        }
        std::string label = it.target.empty() ? pretty_print(it.value) : it.target;
        if (std::find(labels.begin(), labels.end(), label) != labels.end() ||
            std::find(key_names.begin(), key_names.end(), label) != key_names.end()) {
            throw WrangleError(ErrorKind::duplicate_column, "summary column '" + label + "' appears twice",
                               it.value->span);
        }
        labels.push_back(std::move(label));
    }

    auto groups = detail::partition(f);
    std::vector<Column> cols;
    for (const auto& k : key_names) cols.push_back({k, {}});
    for (const auto& l : labels) cols.push_back({l, {}});

    for (const auto& g : groups) {
        for (std::size_t k = 0; k < key_names.size(); ++k) cols[k].cells.push_back(g.key[k]);
        detail::Evaluator ev(f, g.rows);
        for (std::size_t i = 0; i < items.size(); ++i) {
            Vector v = ev.eval(items[i].value);
            if (v.size() != 1) {
                throw WrangleError(ErrorKind::non_scalar_summary,
                                   "'" + labels[i] + "' gave " + std::to_string(v.size()) + " values for one group",
                                   items[i].value->span);
            }
            if (!v.is_number()) {
                throw WrangleError(ErrorKind::type_error, "summary values must be numbers", items[i].value->span);
            }
            cols[key_names.size() + i].cells.push_back(v.numbers[0]);
        }
    }

    VerbResult out;
    out.frame = CubeFrame::from_columns(std::move(cols), groups.size()).with_summary(true);
    out.lineage.aggregated = true;
    return out;
}

inline VerbResult apply_verb(const CubeFrame& f, const VerbAst& v) {
    switch (v.verb) {
        case Verb::filter: return filter_rows(f, v.exprs);
        case Verb::select: return select_columns(f, v.columns);
        case Verb::mutate: return mutate_columns(f, v.assignments);
        case Verb::arrange: return arrange_rows(f, v.exprs);
        case Verb::group_by: return group_rows(f, v.exprs);
        case Verb::summarize: return summarize_groups(f, v.assignments);
    }
    throw WrangleError(ErrorKind::parse, "unknown verb");
}

// Frame-in, frame-out conveniences.

inline CubeFrame apply_filter(const CubeFrame& f, const ExprPtr& predicate) {
    return filter_rows(f, {predicate}).frame;
}

inline CubeFrame apply_select(const CubeFrame& f, const std::vector<SelectItem>& spec) {
    return select_columns(f, spec).frame;
}

inline CubeFrame apply_mutate(const CubeFrame& f, const std::vector<Assignment>& assignments) {
    return mutate_columns(f, assignments).frame;
}

inline CubeFrame apply_arrange(const CubeFrame& f, const std::vector<ExprPtr>& keys) {
    return arrange_rows(f, keys).frame;
}

inline CubeFrame apply_group_by(const CubeFrame& f, const std::vector<std::string>& keys) {
    std::vector<ExprPtr> refs;
    for (const auto& k : keys) refs.push_back(col(k));
    return group_rows(f, refs).frame;
}

inline CubeFrame apply_summarize(const CubeFrame& f, const std::vector<ExprPtr>& exprs) {
    std::vector<Assignment> items;
    for (const auto& e : exprs) items.push_back({"", e, {}});
    return summarize_groups(f, items).frame;
}

inline StageTrace trace_stage(const CubeFrame& input, const VerbAst& v) {
    VerbResult r = apply_verb(input, v);
    FrameDiff d = diff_frames(input, r.frame, r.lineage);
    return {v, input, std::move(r.frame), std::move(d), std::move(r.notes)};
}

/// Runs every stage left to right. Errors carry the index of the failing stage.
inline PipelineResult eval_pipeline(const CubeFrame& f, const PipelineAst& p) {
    PipelineResult out{f, {}};
    for (std::size_t i = 0; i < p.stages.size(); ++i) {
        try {
            out.stages.push_back(trace_stage(out.frame, p.stages[i]));
        } catch (WrangleError& e) {
            e.at_stage(i);
            throw;
        }
        out.frame = out.stages.back().output;
    }
    return out;
}

/// Non-throwing variant: keeps the stages that succeeded before the failure.
struct PipelineRun {
    CubeFrame frame;
    std::vector<StageTrace> stages;
    std::optional<WrangleError> error;
};

inline PipelineRun run_pipeline(const CubeFrame& f, const PipelineAst& p) {
    PipelineRun out{f, {}, std::nullopt};
    for (std::size_t i = 0; i < p.stages.size(); ++i) {
        try {
            out.stages.push_back(trace_stage(out.frame, p.stages[i]));
        } catch (WrangleError& e) {
            e.at_stage(i);
            out.error = e;
            return out;
        }
        out.frame = out.stages.back().output;
    }
    return out;
}

}  // namespace cubes
