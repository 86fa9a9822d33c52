#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cubes/frame.hpp"
#include "cubes/wire.hpp"

namespace cubes {

namespace csv_detail {

inline bool needs_quotes(std::string_view s) {
    if (s.empty()) return false;
    if (s.front() == ' ' || s.back() == ' ') return true;
    return s.find_first_of(",\"") != std::string_view::npos;
}

inline std::string quote(std::string_view s) {
    if (!needs_quotes(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

/// Splits one line into fields. Double-quoted fields may contain commas and `""`.
inline std::vector<std::string> split_fields(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (true) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::string field;
        if (i < line.size() && line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                field += line[i++];
            }
            if (!closed) {
                throw WrangleError(ErrorKind::invalid_frame, "line " + std::to_string(line_no) + ": unterminated quote");
            }
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i < line.size() && line[i] != ',') {
                throw WrangleError(ErrorKind::invalid_frame,
                                   "line " + std::to_string(line_no) + ": text after closing quote");
            }
        } else {
            std::size_t end = line.find(',', i);
            if (end == std::string_view::npos) end = line.size();
            field = std::string(trim(line.substr(i, end - i)));
            i = end;
        }
        out.push_back(std::move(field));
        if (i >= line.size()) break;
        ++i;  // comma
    }
    return out;
}

}  // namespace csv_detail

/// Header row of column names, then one line per observation. Missing cells are `NA`.
inline CubeFrame parse_csv(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = end + 1;
    }
    if (!text.empty() && text.back() == '\n') lines.pop_back();
    if (lines.empty() || (text.empty())) throw WrangleError(ErrorKind::invalid_frame, "CSV has no header row");

    std::vector<std::string> names;
    if (!lines[0].empty()) names = csv_detail::split_fields(lines[0], 1);

    if (names.empty()) {
        // Zero-column frame: every following line is an (empty) observation.
        return CubeFrame::from_columns({}, lines.size() - 1);
    }

    std::vector<Column> cols;
    for (auto& n : names) cols.push_back({n, {}});
    std::size_t nrows = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (csv_detail::trim(lines[li]).empty()) continue;
        auto fields = csv_detail::split_fields(lines[li], li + 1);
        ++nrows;
        if (fields.size() != names.size()) {
            throw WrangleError(ErrorKind::ragged_rows, "row " + std::to_string(nrows) + " has " +
                                                           std::to_string(fields.size()) + " cells, expected " +
                                                           std::to_string(names.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            auto cell = parse_cell(fields[c]);
            if (!cell) {
                throw WrangleError(ErrorKind::invalid_frame,
                                   "row " + std::to_string(nrows) + ", column " + names[c] + ": not a number");
            }
            cols[c].cells.push_back(*cell);
        }
    }
    return CubeFrame::from_columns(std::move(cols), nrows);
}

inline std::string to_csv(const CubeFrame& f) {
    std::string out;
    for (std::size_t c = 0; c < f.ncols(); ++c) {
        if (c) out += ',';
        out += csv_detail::quote(f.column(c).name);
    }
    out += '\n';
    for (std::size_t r = 0; r < f.nrows(); ++r) {
        for (std::size_t c = 0; c < f.ncols(); ++c) {
            if (c) out += ',';
            out += format_cell(f.at(r, c));
        }
        out += '\n';
    }
    return out;
}

inline CubeFrame parse_json_frame(std::string_view text) {
    wire::json j;
    try {
        j = wire::json::parse(text);
    } catch (const wire::json::exception& e) {
        throw WrangleError(ErrorKind::invalid_frame, std::string("invalid JSON: ") + e.what());
    }
    return wire::frame_from_json(j);
}

inline std::string to_json_text(const CubeFrame& f) { return wire::frame_to_json(f).dump(2) + "\n"; }

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WrangleError(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WrangleError(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw WrangleError(ErrorKind::io, "write failed for '" + path.string() + "'");
}

inline CubeFrame load_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path)); }
inline void save_csv(const CubeFrame& f, const std::filesystem::path& path) { write_text_file(path, to_csv(f)); }
inline CubeFrame load_json(const std::filesystem::path& path) { return parse_json_frame(read_text_file(path)); }
inline void save_json(const CubeFrame& f, const std::filesystem::path& path) { write_text_file(path, to_json_text(f)); }

/// Picks the format from the extension: `.json` is JSON, anything else CSV.
inline CubeFrame load_frame(const std::filesystem::path& path) {
    return path.extension() == ".json" ? load_json(path) : load_csv(path);
}

}  // namespace cubes
