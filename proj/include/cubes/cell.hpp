#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace cubes {

/// A number or the missing marker NA.
class Cell {
public:
    Cell() = default;  // NA
    Cell(double v) : value_(v) {}
    Cell(int v) : value_(static_cast<double>(v)) {}

    static Cell na() { return Cell{}; }

    bool is_na() const noexcept { return !value_.has_value(); }
    double value() const { return *value_; }
    const std::optional<double>& raw() const noexcept { return value_; }

    // Structural equality: NA equals NA. Three-valued comparison lives in the evaluator.
    friend bool operator==(const Cell&, const Cell&) = default;

private:
    std::optional<double> value_;
};

/// Shortest decimal text that reads back to the same double; never uses exponents.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
    return c.is_na() ? std::string("NA") : format_number(c.value());
}

/// Strict decimal parse: optional sign, digits, optional fraction. Rejects inf/nan/exponents.
inline std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') ++i;
    bool digits = false, dot = false;
    for (std::size_t j = i; j < text.size(); ++j) {
        char ch = text[j];
        if (ch >= '0' && ch <= '9') {
            digits = true;
        } else if (ch == '.' && !dot) {
            dot = true;
        } else {
            return std::nullopt;
        }
    }
    if (!digits) return std::nullopt;
    std::string_view body = text.substr(text[0] == '+' ? 1 : 0);
    double v = 0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

inline std::optional<Cell> parse_cell(std::string_view text) {
    if (text == "NA") return Cell::na();
    if (auto v = parse_number(text)) return Cell(*v);
    return std::nullopt;
}

enum class ShapeGlyph : std::uint8_t { triangle, square, pentagon, hexagon, numeral };

/// 3,4,5,6 are the four cube faces; everything else is shown as its literal text.
inline ShapeGlyph shape_for(const Cell& c) {
    if (c.is_na()) return ShapeGlyph::numeral;
    double v = c.value();
    if (v == 3.0) return ShapeGlyph::triangle;
    if (v == 4.0) return ShapeGlyph::square;
    if (v == 5.0) return ShapeGlyph::pentagon;
    if (v == 6.0) return ShapeGlyph::hexagon;
    return ShapeGlyph::numeral;
}

inline std::string_view glyph_name(ShapeGlyph g) {
    switch (g) {
        case ShapeGlyph::triangle: return "triangle";
        case ShapeGlyph::square: return "square";
        case ShapeGlyph::pentagon: return "pentagon";
        case ShapeGlyph::hexagon: return "hexagon";
        case ShapeGlyph::numeral: return "numeral";
    }
    return "numeral";
}

}  // namespace cubes
