#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "cubes/engine.hpp"
#include "cubes/frame.hpp"

namespace cubes {

enum class RenderMode { ascii_cubes, table };

struct RenderOptions {
    RenderMode mode = RenderMode::ascii_cubes;
    bool color = true;
    std::size_t width = 80;
};

namespace render_detail {

// Display width of a UTF-8 string, counting every code point as one column.
inline std::size_t display_width(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

inline std::string pad(std::string_view s, std::size_t width) {
    std::string out(s);
    std::size_t w = display_width(s);
    if (w < width) out.append(width - w, ' ');
    return out;
}

/// ANSI foreground colour for a column; unknown names cycle through the remaining colours.
inline std::string ansi_for(std::string_view name, std::size_t index) {
    if (name == "red") return "\x1b[31m";
    if (name == "orange") return "\x1b[38;5;208m";
    if (name == "yellow") return "\x1b[33m";
    if (name == "green") return "\x1b[32m";
    if (name == "blue") return "\x1b[34m";
    if (name == "purple") return "\x1b[35m";
    static constexpr std::string_view cycle[] = {"\x1b[36m", "\x1b[91m", "\x1b[92m", "\x1b[94m", "\x1b[95m"};
    return std::string(cycle[index % std::size(cycle)]);
}

// Reserved colour for summary cubes.
inline constexpr std::string_view summary_ansi = "\x1b[97;100m";
inline constexpr std::string_view ansi_reset = "\x1b[0m";

}  // namespace render_detail

/// ▲ ■ ⬟ ⬢ for 3..6 with colour; T S P H without. Other values print as numbers.
inline std::string glyph_text(const Cell& c, bool color) {
    switch (shape_for(c)) {
        case ShapeGlyph::triangle: return color ? "▲" : "T";
        case ShapeGlyph::square: return color ? "■" : "S";
        case ShapeGlyph::pentagon: return color ? "⬟" : "P";
        case ShapeGlyph::hexagon: return color ? "⬢" : "H";
        case ShapeGlyph::numeral: break;
    }
    return format_cell(c);
}

inline std::string render_frame(const CubeFrame& f, const RenderOptions& opt = {}) {
    using namespace render_detail;
    if (opt.mode == RenderMode::ascii_cubes && opt.width < 20) {
        throw WrangleError(ErrorKind::invalid_frame, "ascii cube rendering needs a width of at least 20");
    }
    std::string out;
    out += std::to_string(f.nrows()) + " x " + std::to_string(f.ncols());
    if (f.is_summary()) out += "  (summary)";
    if (f.is_grouped()) {
        out += "  groups: ";
        for (std::size_t i = 0; i < f.groups()->keys.size(); ++i) {
            if (i) out += ", ";
            out += f.groups()->keys[i];
        }
    }
    out += '\n';
    if (f.ncols() == 0) return out;

    std::vector<std::size_t> widths;
    for (const auto& c : f.columns()) {
        std::size_t w = display_width(c.name);
        for (const auto& cell : c.cells) {
            std::string t = opt.mode == RenderMode::table ? format_cell(cell) : glyph_text(cell, opt.color);
            w = std::max(w, display_width(t));
        }
        widths.push_back(w);
    }

    // Wrap columns into blocks that fit the requested width.
    std::size_t first = 0;
    while (first < f.ncols()) {
        std::size_t last = first, used = 0;
        while (last < f.ncols() && (last == first || used + widths[last] + 2 <= opt.width)) {
            used += widths[last] + 2;
            ++last;
        }
        if (first > 0) out += '\n';
        for (std::size_t c = first; c < last; ++c) {
            out += pad(f.column(c).name, widths[c]);
            out += c + 1 < last ? "  " : "";
        }
        out += '\n';
        for (std::size_t r = 0; r < f.nrows(); ++r) {
            for (std::size_t c = first; c < last; ++c) {
                const Cell& cell = f.at(r, c);
                std::string t = opt.mode == RenderMode::table ? format_cell(cell) : glyph_text(cell, opt.color);
                if (opt.color && opt.mode == RenderMode::ascii_cubes) {
                    out += f.is_summary() ? std::string(summary_ansi) : ansi_for(f.column(c).name, c);
                    out += pad(t, widths[c]);
                    out += ansi_reset;
                } else {
                    out += pad(t, widths[c]);
                }
                out += c + 1 < last ? "  " : "";
            }
            out += '\n';
        }
        first = last;
    }
    return out;
}

/// One-line description of a stage's effect, e.g. "rows kept: 1,3; dropped row 2".
inline std::string describe_diff(const FrameDiff& d) {
    auto rows = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (auto r : v) {
            if (!s.empty()) s += ",";
            s += std::to_string(r + 1);
        }
        return s;
    };
    auto names = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& n : v) {
            if (!s.empty()) s += ", ";
            s += n;
        }
        return s;
    };
    std::vector<std::string> parts;
    if (d.aggregated) {
        parts.push_back("rows collapsed into a summary");
    } else if (!d.dropped_rows.empty()) {
        parts.push_back("rows kept: " + rows(d.kept_rows));
        parts.push_back((d.dropped_rows.size() == 1 ? "dropped row " : "dropped rows ") + rows(d.dropped_rows));
    }
    if (d.row_permutation) parts.push_back("rows reordered");
    if (!d.added_columns.empty()) parts.push_back("added " + names(d.added_columns));
    if (!d.dropped_columns.empty()) parts.push_back("removed " + names(d.dropped_columns));
    if (!d.changed_columns.empty()) parts.push_back("changed " + names(d.changed_columns));
    if (d.columns_reordered) parts.push_back("columns reordered");
    if (d.groups_changed) parts.push_back("grouping changed");
    if (parts.empty()) return "no change";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "; ";
        out += parts[i];
    }
    return out;
}

/// Source line plus a caret line under the span.
inline std::string caret_line(std::string_view source, const Span& span) {
    std::size_t line_start = 0;
    if (span.start > 0) {
        std::size_t nl = source.rfind('\n', span.start - 1);
        if (nl != std::string_view::npos) line_start = nl + 1;
    }
    std::size_t line_end = source.find('\n', span.start);
    if (line_end == std::string_view::npos) line_end = source.size();
    std::string_view line = source.substr(line_start, line_end - line_start);
    std::size_t col = render_detail::display_width(source.substr(line_start, span.start - line_start));
    std::size_t len = std::max<std::size_t>(1, render_detail::display_width(
                                                   source.substr(span.start, std::min(span.end, line_end) - span.start)));
    return "  " + std::string(line) + "\n  " + std::string(col, ' ') + std::string(len, '^') + "\n";
}

inline std::string format_error(const WrangleError& e, std::string_view source) {
    std::string out = std::string(to_string(e.kind())) + ": " + e.message();
    if (e.stage()) out += " (stage " + std::to_string(*e.stage() + 1) + ")";
    out += '\n';
    if (e.span() && e.span()->start <= source.size()) out += caret_line(source, *e.span());
    if (!e.hint().empty()) out += "hint: " + e.hint() + "\n";
    return out;
}

}  // namespace cubes
