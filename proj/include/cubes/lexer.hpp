#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cubes/error.hpp"

namespace cubes {

enum class TokenKind { ident, number, na, pipe, lparen, rparen, comma, equals, op };

struct Token {
    TokenKind kind;
    std::string lexeme;
    Span span;

    friend bool operator==(const Token&, const Token&) = default;
};

inline std::string_view to_string(TokenKind k) {
    switch (k) {
        case TokenKind::ident: return "IDENT";
        case TokenKind::number: return "NUMBER";
        case TokenKind::na: return "NA_LIT";
        case TokenKind::pipe: return "PIPE";
        case TokenKind::lparen: return "LPAREN";
        case TokenKind::rparen: return "RPAREN";
        case TokenKind::comma: return "COMMA";
        case TokenKind::equals: return "EQUALS";
        case TokenKind::op: return "OP";
    }
    return "?";
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    auto emit = [&](TokenKind k, std::size_t start, std::size_t end) {
        out.push_back({k, std::string(src.substr(start, end - start)), {start, end}});
    };

    std::size_t i = 0;
    while (i < src.size()) {
        char c = src[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        char next = i + 1 < src.size() ? src[i + 1] : '\0';

        if (alpha(c)) {
            while (i < src.size() && (alpha(src[i]) || digit(src[i]) || src[i] == '_' || src[i] == '.')) ++i;
            emit(src.substr(start, i - start) == "NA" ? TokenKind::na : TokenKind::ident, start, i);
            continue;
        }
        if (digit(c) || (c == '.' && digit(next))) {
            while (i < src.size() && digit(src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && digit(src[i])) ++i;
            }
            if (i < src.size() && (alpha(src[i]) || src[i] == '_')) {
                throw WrangleError(ErrorKind::lex, "malformed number", Span{start, i + 1});
            }
            emit(TokenKind::number, start, i);
            continue;
        }
        switch (c) {
            case '(': emit(TokenKind::lparen, i, i + 1); ++i; continue;
            case ')': emit(TokenKind::rparen, i, i + 1); ++i; continue;
            case ',': emit(TokenKind::comma, i, i + 1); ++i; continue;
            case '+':
            case '-':
            case '*':
            case '&': emit(TokenKind::op, i, i + 1); ++i; continue;
            case '|':
                if (next == '>') {
                    emit(TokenKind::pipe, i, i + 2);
                    i += 2;
                } else {
                    emit(TokenKind::op, i, i + 1);
                    ++i;
                }
                continue;
            case '<':
            case '>':
            case '!':
                if (next == '=') {
                    emit(TokenKind::op, i, i + 2);
                    i += 2;
                } else {
                    emit(TokenKind::op, i, i + 1);
                    ++i;
                }
                continue;
            case '=':
                if (next == '=') {
                    emit(TokenKind::op, i, i + 2);
                    i += 2;
                } else {
                    emit(TokenKind::equals, i, i + 1);
                    ++i;
                }
                continue;
            case '%': {
                constexpr std::string_view in_op = "%in%";
                std::size_t n = 0;
                while (n < in_op.size() && i + n < src.size() && src[i + n] == in_op[n]) ++n;
                if (n == in_op.size()) {
                    emit(TokenKind::op, i, i + n);
                    i += n;
                    continue;
                }
                throw WrangleError(ErrorKind::lex, "incomplete operator; expected `%in%`",
                                   Span{start, i + std::max<std::size_t>(n, 1)},
                                   "write membership tests as `x %in% c(3, 4)`");
            }
            default:
                break;
        }
        // Stray character; swallow a whole UTF-8 sequence so the span is printable.
        std::size_t end = i + 1;
        while (end < src.size() && (static_cast<unsigned char>(src[end]) & 0xC0) == 0x80) ++end;
        throw WrangleError(ErrorKind::lex,
                           "unexpected character '" + std::string(src.substr(start, end - start)) + "'",
                           Span{start, end});
    }
    return out;
}

}  // namespace cubes
