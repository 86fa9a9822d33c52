#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cubes/cell.hpp"
#include "cubes/error.hpp"

namespace cubes {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { logical_not, negate, desc };

enum class BinaryOp { lt, gt, le, ge, eq, ne, in, logical_and, logical_or, add, sub, mul };

struct NumberLit {
    double value;
};
struct NaLit {};
struct LogicalLit {
    bool value;
};
struct ColumnRef {
    std::string name;
};
struct Unary {
    UnaryOp op;
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct NamedArg {
    std::string name;
    ExprPtr value;
    Span name_span;
};
struct Call {
    std::string name;
    std::vector<ExprPtr> args;
    std::vector<NamedArg> named_args;
};

struct Expr {
    std::variant<NumberLit, NaLit, LogicalLit, ColumnRef, Unary, Binary, Call> node;
    Span span;
};

template <typename Node>
ExprPtr make_expr(Node node, Span span = {}) {
    return std::make_shared<const Expr>(Expr{std::move(node), span});
}

inline ExprPtr number(double v) { return make_expr(NumberLit{v}); }
inline ExprPtr col(std::string name) { return make_expr(ColumnRef{std::move(name)}); }
inline ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
    return make_expr(Binary{op, std::move(l), std::move(r)});
}
inline ExprPtr unary(UnaryOp op, ExprPtr e) { return make_expr(Unary{op, std::move(e)}); }
inline ExprPtr call(std::string name, std::vector<ExprPtr> args, std::vector<NamedArg> named = {}) {
    return make_expr(Call{std::move(name), std::move(args), std::move(named)});
}

enum class Verb { filter, select, mutate, arrange, group_by, summarize };

inline constexpr std::string_view verb_names[] = {"filter",  "select",   "mutate",
                                                  "arrange", "group_by", "summarize"};

inline std::string_view to_string(Verb v) { return verb_names[static_cast<int>(v)]; }

inline std::optional<Verb> verb_from_name(std::string_view name) {
    for (int i = 0; i < 6; ++i) {
        if (verb_names[i] == name) return static_cast<Verb>(i);
    }
    return std::nullopt;
}

struct SelectItem {
    std::string name;
    bool exclude = false;
    Span span;
};

/// `target = value`. Summaries may leave the target empty to get the default label.
struct Assignment {
    std::string target;
    ExprPtr value;
    Span target_span;
};

/// One verb call. Which argument list is populated depends on the verb:
/// filter/arrange/group_by use `exprs`, select uses `columns`,
/// mutate and summarize use `assignments`.
struct VerbAst {
    Verb verb;
    std::vector<ExprPtr> exprs;
    std::vector<SelectItem> columns;
    std::vector<Assignment> assignments;
    Span span;
    Span name_span;
};

struct PipelineAst {
    std::vector<VerbAst> stages;
    Span source_span;
};

// ---------------------------------------------------------------------------
// Structural equality (spans ignored)

inline bool same_structure(const ExprPtr& a, const ExprPtr& b);

inline bool same_structure(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, NumberLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, NaLit>) {
                return true;
            } else if constexpr (std::is_same_v<T, LogicalLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, ColumnRef>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == y.op && same_structure(x.operand, y.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && same_structure(x.lhs, y.lhs) && same_structure(x.rhs, y.rhs);
            } else {
                if (x.name != y.name || x.args.size() != y.args.size() ||
                    x.named_args.size() != y.named_args.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (!same_structure(x.args[i], y.args[i])) return false;
                }
                for (std::size_t i = 0; i < x.named_args.size(); ++i) {
                    if (x.named_args[i].name != y.named_args[i].name ||
                        !same_structure(x.named_args[i].value, y.named_args[i].value)) {
                        return false;
                    }
                }
                return true;
            }
        },
        a.node);
}

inline bool same_structure(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    return same_structure(*a, *b);
}

inline bool same_structure(const VerbAst& a, const VerbAst& b) {
    if (a.verb != b.verb || a.exprs.size() != b.exprs.size() ||
        a.columns.size() != b.columns.size() || a.assignments.size() != b.assignments.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.exprs.size(); ++i) {
        if (!same_structure(a.exprs[i], b.exprs[i])) return false;
    }
    for (std::size_t i = 0; i < a.columns.size(); ++i) {
        if (a.columns[i].name != b.columns[i].name || a.columns[i].exclude != b.columns[i].exclude) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.assignments.size(); ++i) {
        if (a.assignments[i].target != b.assignments[i].target ||
            !same_structure(a.assignments[i].value, b.assignments[i].value)) {
            return false;
        }
    }
    return true;
}

inline bool same_structure(const PipelineAst& a, const PipelineAst& b) {
    if (a.stages.size() != b.stages.size()) return false;
    for (std::size_t i = 0; i < a.stages.size(); ++i) {
        if (!same_structure(a.stages[i], b.stages[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace detail {

// Binding strength, loosest first.
enum Level : int { lvl_or = 1, lvl_and, lvl_cmp, lvl_add, lvl_mul, lvl_unary, lvl_primary };

inline int level_of(BinaryOp op) {
    switch (op) {
        case BinaryOp::logical_or: return lvl_or;
        case BinaryOp::logical_and: return lvl_and;
        case BinaryOp::add:
        case BinaryOp::sub: return lvl_add;
        case BinaryOp::mul: return lvl_mul;
        default: return lvl_cmp;
    }
}

inline int level_of(const Expr& e) {
    if (auto b = std::get_if<Binary>(&e.node)) return level_of(b->op);
    if (auto u = std::get_if<Unary>(&e.node)) return u->op == UnaryOp::desc ? lvl_primary : lvl_unary;
    return lvl_primary;
}

inline void print(const Expr& e, int min_level, std::string& out);

inline void print_child(const ExprPtr& e, int min_level, std::string& out) {
    bool paren = level_of(*e) < min_level;
    if (paren) out += '(';
    print(*e, min_level, out);
    if (paren) out += ')';
}

}  // namespace detail

inline std::string_view op_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::lt: return "<";
        case BinaryOp::gt: return ">";
        case BinaryOp::le: return "<=";
        case BinaryOp::ge: return ">=";
        case BinaryOp::eq: return "==";
        case BinaryOp::ne: return "!=";
        case BinaryOp::in: return "%in%";
        case BinaryOp::logical_and: return "&";
        case BinaryOp::logical_or: return "|";
        case BinaryOp::add: return "+";
        case BinaryOp::sub: return "-";
        case BinaryOp::mul: return "*";
    }
    return "?";
}

inline void detail::print(const Expr& e, int, std::string& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                out += format_number(x.value);
            } else if constexpr (std::is_same_v<T, NaLit>) {
                out += "NA";
            } else if constexpr (std::is_same_v<T, LogicalLit>) {
                out += x.value ? "TRUE" : "FALSE";
            } else if constexpr (std::is_same_v<T, ColumnRef>) {
                out += x.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (x.op == UnaryOp::desc) {
                    out += "desc(";
                    print_child(x.operand, lvl_or, out);
                    out += ')';
                } else {
                    out += x.op == UnaryOp::logical_not ? '!' : '-';
                    print_child(x.operand, lvl_unary, out);
                }
            } else if constexpr (std::is_same_v<T, Binary>) {
                int lvl = level_of(x.op);
                bool left_assoc = lvl != lvl_cmp;
                print_child(x.lhs, left_assoc ? lvl : lvl + 1, out);
                out += ' ';
                out += op_text(x.op);
                out += ' ';
                print_child(x.rhs, lvl + 1, out);
            } else {
                out += x.name;
                out += '(';
                bool first = true;
                for (const auto& a : x.args) {
                    if (!first) out += ", ";
                    first = false;
                    print_child(a, lvl_or, out);
                }
                for (const auto& na : x.named_args) {
                    if (!first) out += ", ";
                    first = false;
                    out += na.name;
                    out += " = ";
                    print_child(na.value, lvl_or, out);
                }
                out += ')';
            }
        },
        e.node);
}

inline std::string pretty_print(const Expr& e) {
    std::string out;
    detail::print(e, detail::lvl_or, out);
    return out;
}

inline std::string pretty_print(const ExprPtr& e) { return pretty_print(*e); }

inline std::string pretty_print(const VerbAst& v) {
    std::string out(to_string(v.verb));
    out += '(';
    bool first = true;
    auto sep = [&] {
        if (!first) out += ", ";
        first = false;
    };
    for (const auto& e : v.exprs) {
        sep();
        out += pretty_print(e);
    }
    for (const auto& c : v.columns) {
        sep();
        if (c.exclude) out += '-';
        out += c.name;
    }
    for (const auto& a : v.assignments) {
        sep();
        if (!a.target.empty()) {
            out += a.target;
            out += " = ";
        }
        out += pretty_print(a.value);
    }
    out += ')';
    return out;
}

inline std::string pretty_print(const PipelineAst& p) {
    std::string out = "data";
    for (const auto& s : p.stages) {
        out += " |> ";
        out += pretty_print(s);
    }
    return out;
}

}  // namespace cubes
