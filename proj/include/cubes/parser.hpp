#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cubes/ast.hpp"
#include "cubes/lexer.hpp"

namespace cubes {

namespace detail {

/// Recursive-descent parser over the token stream. Precedence, tightest first:
///   unary ! -   >   *   >   + -   >   comparisons, %in% (non-associative)   >   &   >   |
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

    PipelineAst pipeline() {
        PipelineAst p;
        const Token* head = peek();
        if (!head || head->kind != TokenKind::ident || head->lexeme != "data") {
            fail_expected("`data` at the start of the pipeline");
        }
        p.source_span = take().span;
        while (peek()) {
            if (peek()->kind != TokenKind::pipe) fail_expected("`|>` between verbs");
            take();
            p.stages.push_back(verb());
        }
        return p;
    }

    ExprPtr expression_only() {
        ExprPtr e = expr();
        if (peek()) {
            check_stray_equals();
            fail_expected("end of expression");
        }
        return e;
    }

private:
    const Token* peek(std::size_t k = 0) const {
        return pos_ + k < toks_.size() ? &toks_[pos_ + k] : nullptr;
    }

    Token take() { return toks_.at(pos_++); }

    bool at(TokenKind k) const { return peek() && peek()->kind == k; }

    bool at_op(std::string_view lexeme) const {
        return peek() && peek()->kind == TokenKind::op && peek()->lexeme == lexeme;
    }

    Span here() const {
        if (auto t = peek()) return t->span;
        return {src_.size(), src_.size()};
    }

    std::string found_text() const {
        if (auto t = peek()) return "`" + t->lexeme + "`";
        return "end of input";
    }

    [[noreturn]] void fail_expected(const std::string& what, std::string hint = {}) const {
        throw WrangleError(ErrorKind::parse, "expected " + what + ", found " + found_text(), here(),
                           std::move(hint));
    }

    void check_stray_equals() const {
        if (at(TokenKind::equals)) {
            throw WrangleError(ErrorKind::equals_for_comparison, "`=` assigns; `==` compares", here(),
                               "use `==` to test whether two values are equal");
        }
    }

    Token expect(TokenKind k, const std::string& what) {
        if (!at(k)) {
            check_stray_equals();
            fail_expected(what);
        }
        return take();
    }

    VerbAst verb() {
        if (!at(TokenKind::ident)) fail_expected("a verb");
        Token name = take();
        auto v = verb_from_name(name.lexeme);
        if (!v) {
            std::string hint;
            if (name.lexeme == "desc") {
                hint = "desc() goes inside arrange(), as in arrange(desc(red))";
            } else if (auto near = nearest_match(name.lexeme, verb_names)) {
                hint = "did you mean " + *near + "?";
            }
            throw WrangleError(ErrorKind::unknown_verb, "unknown verb '" + name.lexeme + "'", name.span,
                               hint);
        }
        VerbAst out;
        out.verb = *v;
        out.name_span = name.span;
        expect(TokenKind::lparen, "`(` after " + name.lexeme);
        if (at(TokenKind::rparen)) fail_expected("at least one argument to " + name.lexeme);
        while (true) {
            switch (*v) {
                case Verb::select: select_item(out); break;
                case Verb::mutate: assignment(out, true); break;
                case Verb::summarize: assignment(out, false); break;
                default:
                    if (at(TokenKind::ident) && peek(1) && peek(1)->kind == TokenKind::equals) {
                        pos_ += 1;
                        check_stray_equals();
                    }
                    out.exprs.push_back(expr());
                    break;
            }
            if (at(TokenKind::comma)) {
                take();
                continue;
            }
            Token close = expect(TokenKind::rparen, "`,` or `)`");
            out.span = join(name.span, close.span);
            break;
        }
        if (*v == Verb::select) {
            bool first_sign = out.columns.front().exclude;
            for (const auto& c : out.columns) {
                if (c.exclude != first_sign) {
                    throw WrangleError(ErrorKind::mixed_select_signs,
                                       "select cannot mix kept and removed columns", c.span,
                                       "either list the columns to keep, or list `-column` for each "
                                       "column to remove");
                }
            }
        }
        return out;
    }

    void select_item(VerbAst& out) {
        Span start = here();
        bool exclude = false;
        if (at_op("-")) {
            take();
            exclude = true;
        }
        if (!at(TokenKind::ident)) fail_expected("a column name");
        Token name = take();
        out.columns.push_back({name.lexeme, exclude, join(start, name.span)});
    }

    void assignment(VerbAst& out, bool target_required) {
        if (at(TokenKind::ident) && peek(1) && peek(1)->kind == TokenKind::equals) {
            Token target = take();
            take();
            if (target.lexeme == "TRUE" || target.lexeme == "FALSE") {
                throw WrangleError(ErrorKind::parse, "'" + target.lexeme + "' cannot be a column name",
                                   target.span);
            }
            out.assignments.push_back({target.lexeme, expr(), target.span});
            return;
        }
        if (target_required) fail_expected("`name = expression`");
        out.assignments.push_back({"", expr(), {}});
    }

    ExprPtr expr() { return or_expr(); }

    ExprPtr or_expr() {
        ExprPtr lhs = and_expr();
        while (at_op("|")) {
            take();
            ExprPtr rhs = and_expr();
            Span s = join(lhs->span, rhs->span);
            lhs = make_expr(Binary{BinaryOp::logical_or, lhs, rhs}, s);
        }
        return lhs;
    }

    ExprPtr and_expr() {
        ExprPtr lhs = comparison();
        while (at_op("&")) {
            take();
            ExprPtr rhs = comparison();
            Span s = join(lhs->span, rhs->span);
            lhs = make_expr(Binary{BinaryOp::logical_and, lhs, rhs}, s);
        }
        return lhs;
    }

    std::optional<BinaryOp> comparison_op() const {
        if (!at(TokenKind::op)) return std::nullopt;
        const auto& l = peek()->lexeme;
        if (l == "<") return BinaryOp::lt;
        if (l == ">") return BinaryOp::gt;
        if (l == "<=") return BinaryOp::le;
        if (l == ">=") return BinaryOp::ge;
        if (l == "==") return BinaryOp::eq;
        if (l == "!=") return BinaryOp::ne;
        if (l == "%in%") return BinaryOp::in;
        return std::nullopt;
    }

    ExprPtr comparison() {
        ExprPtr lhs = additive();
        auto op = comparison_op();
        if (!op) return lhs;
        take();
        ExprPtr rhs = additive();
        if (comparison_op()) {
            throw WrangleError(ErrorKind::chained_comparison, "comparisons cannot be chained", here(),
                               "join two comparisons with `&`, e.g. `a < b & b < c`");
        }
        Span s = join(lhs->span, rhs->span);
        return make_expr(Binary{*op, lhs, rhs}, s);
    }

    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        while (at_op("+") || at_op("-")) {
            BinaryOp op = take().lexeme == "+" ? BinaryOp::add : BinaryOp::sub;
            ExprPtr rhs = multiplicative();
            Span s = join(lhs->span, rhs->span);
            lhs = make_expr(Binary{op, lhs, rhs}, s);
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary_expr();
        while (at_op("*")) {
            take();
            ExprPtr rhs = unary_expr();
            Span s = join(lhs->span, rhs->span);
            lhs = make_expr(Binary{BinaryOp::mul, lhs, rhs}, s);
        }
        return lhs;
    }

    ExprPtr unary_expr() {
        if (at_op("!") || at_op("-")) {
            Token t = take();
            ExprPtr operand = unary_expr();
            UnaryOp op = t.lexeme == "!" ? UnaryOp::logical_not : UnaryOp::negate;
            return make_expr(Unary{op, operand}, join(t.span, operand->span));
        }
        return primary();
    }

    ExprPtr primary() {
        if (!peek()) fail_expected("an expression");
        const Token& t = *peek();
        switch (t.kind) {
            case TokenKind::number: {
                Token n = take();
                auto v = parse_number(n.lexeme);
                if (!v) throw WrangleError(ErrorKind::lex, "malformed number", n.span);
                return make_expr(NumberLit{*v}, n.span);
            }
            case TokenKind::na: return make_expr(NaLit{}, take().span);
            case TokenKind::lparen: {
                take();
                ExprPtr inner = expr();
                expect(TokenKind::rparen, "`)`");
                return inner;
            }
            case TokenKind::ident: {
                Token name = take();
                if (!at(TokenKind::lparen)) {
                    if (name.lexeme == "TRUE") return make_expr(LogicalLit{true}, name.span);
                    if (name.lexeme == "FALSE") return make_expr(LogicalLit{false}, name.span);
                    return make_expr(ColumnRef{name.lexeme}, name.span);
                }
                return call_rest(name);
            }
            default:
                check_stray_equals();
                fail_expected("an expression");
        }
    }

    ExprPtr call_rest(const Token& name) {
        take();  // (
        Call c{name.lexeme, {}, {}};
        if (!at(TokenKind::rparen)) {
            while (true) {
                if (at(TokenKind::ident) && peek(1) && peek(1)->kind == TokenKind::equals) {
                    if (peek()->lexeme != "probs") {
                        pos_ += 1;
                        check_stray_equals();
                    }
                    Token arg = take();
                    take();
                    c.named_args.push_back({arg.lexeme, expr(), arg.span});
                } else {
                    c.args.push_back(expr());
                }
                if (at(TokenKind::comma)) {
                    take();
                    continue;
                }
                break;
            }
        }
        Token close = expect(TokenKind::rparen, "`,` or `)`");
        Span s = join(name.span, close.span);
        if (c.name == "desc") {
            if (c.args.size() != 1 || !c.named_args.empty()) {
                throw WrangleError(ErrorKind::parse, "desc() takes exactly one column", s);
            }
            return make_expr(Unary{UnaryOp::desc, c.args.front()}, s);
        }
        return make_expr(std::move(c), s);
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline PipelineAst parse_pipeline(std::string_view src) { return detail::Parser(src).pipeline(); }

inline ExprPtr parse_expression(std::string_view src) {
    return detail::Parser(src).expression_only();
}

}  // namespace cubes
