#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubes/cell.hpp"
#include "cubes/error.hpp"

namespace cubes {

/// Letters, digits, underscore and dot; must start with a letter.
inline bool is_valid_column_name(std::string_view name) {
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (name.empty() || !alpha(name.front())) return false;
    return std::all_of(name.begin(), name.end(),
                       [&](char c) { return alpha(c) || digit(c) || c == '_' || c == '.'; });
}

/// Looser rule for labels produced by summarize, such as `max(red)`.
/// Anything printable without line breaks is accepted.
inline bool is_valid_column_label(std::string_view name) {
    if (name.empty()) return false;
    return std::none_of(name.begin(), name.end(),
                        [](char c) { return c == '\n' || c == '\r' || c == '\0'; });
}

enum class NameRule { identifier, label };

struct Column {
    std::string name;
    std::vector<Cell> cells;

    friend bool operator==(const Column&, const Column&) = default;
};

/// Grouping keys registered on a frame. Never reorders or touches cells.
struct GroupSpec {
    std::vector<std::string> keys;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// Rectangular grid of cubes: one column per colour, one row per observation.
/// Immutable once built; every verb returns a new frame.
class CubeFrame {
public:
    CubeFrame() = default;

    static CubeFrame from_columns(std::vector<Column> columns, std::size_t nrows,
                                  std::optional<GroupSpec> groups = std::nullopt,
                                  NameRule rule = NameRule::label) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto& name = columns[i].name;
            bool ok = rule == NameRule::identifier ? is_valid_column_name(name)
                                                   : is_valid_column_label(name);
            if (!ok) {
                throw WrangleError(ErrorKind::invalid_name, "invalid column name '" + name + "'");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (columns[j].name == name) {
                    throw WrangleError(ErrorKind::duplicate_column, "duplicate column '" + name + "'");
                }
            }
            if (columns[i].cells.size() != nrows) {
                throw WrangleError(ErrorKind::ragged_rows,
                                   "column '" + name + "' has " +
                                       std::to_string(columns[i].cells.size()) + " cells, expected " +
                                       std::to_string(nrows));
            }
        }
        CubeFrame f;
        f.columns_ = std::move(columns);
        f.nrows_ = nrows;
        f.set_groups(std::move(groups));
        return f;
    }

    std::size_t nrows() const noexcept { return nrows_; }
    std::size_t ncols() const noexcept { return columns_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    const Column& column(std::size_t i) const { return columns_.at(i); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].name == name) return i;
        }
        return std::nullopt;
    }

    const Column* find(std::string_view name) const {
        auto i = index_of(name);
        return i ? &columns_[*i] : nullptr;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(columns_.size());
        for (const auto& c : columns_) out.push_back(c.name);
        return out;
    }

    const Cell& at(std::size_t row, std::size_t col) const { return columns_.at(col).cells.at(row); }

    std::vector<Cell> row(std::size_t r) const {
        std::vector<Cell> out;
        out.reserve(columns_.size());
        for (const auto& c : columns_) out.push_back(c.cells.at(r));
        return out;
    }

    const std::optional<GroupSpec>& groups() const noexcept { return groups_; }
    bool is_grouped() const noexcept { return groups_.has_value(); }

    /// Frames produced by summarize; the workbench draws them in a reserved colour.
    bool is_summary() const noexcept { return summary_; }

    CubeFrame with_groups(std::optional<GroupSpec> groups) const {
        CubeFrame f = *this;
        f.set_groups(std::move(groups));
        return f;
    }

    CubeFrame with_summary(bool summary) const {
        CubeFrame f = *this;
        f.summary_ = summary;
        return f;
    }

    friend bool operator==(const CubeFrame&, const CubeFrame&) = default;

private:
    void set_groups(std::optional<GroupSpec> groups) {
        if (groups) {
            if (groups->keys.empty()) {
                throw WrangleError(ErrorKind::invalid_frame, "group spec needs at least one key");
            }
            std::vector<std::string> distinct;
            for (const auto& k : groups->keys) {
                if (!index_of(k)) {
                    throw WrangleError(ErrorKind::unknown_column, "group key '" + k + "' is not a column");
                }
                if (std::find(distinct.begin(), distinct.end(), k) == distinct.end()) {
                    distinct.push_back(k);
                }
            }
            groups->keys = std::move(distinct);
        }
        groups_ = std::move(groups);
    }

    std::vector<Column> columns_;
    std::size_t nrows_ = 0;
    std::optional<GroupSpec> groups_;
    bool summary_ = false;
};

/// Builds a frame row by row. Names must be proper identifiers.
inline CubeFrame make_frame(const std::vector<std::string>& names,
                            const std::vector<std::vector<Cell>>& rows) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != names.size()) {
            throw WrangleError(ErrorKind::ragged_rows,
                               "row " + std::to_string(r + 1) + " has " +
                                   std::to_string(rows[r].size()) + " cells, expected " +
                                   std::to_string(names.size()));
        }
    }
    std::vector<Column> cols;
    cols.reserve(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
        Column col{names[c], {}};
        col.cells.reserve(rows.size());
        for (const auto& row : rows) col.cells.push_back(row[c]);
        cols.push_back(std::move(col));
    }
    return CubeFrame::from_columns(std::move(cols), rows.size(), std::nullopt, NameRule::identifier);
}

inline std::pair<std::size_t, std::size_t> dimensions(const CubeFrame& f) {
    return {f.nrows(), f.ncols()};
}

/// Canonical 3x6 classroom data set.
inline CubeFrame figure1() {
    return make_frame({"red", "orange", "yellow", "green", "blue", "purple"},
                      {{3, 4, 5, 6, 3, 4},
                       {4, 3, 5, 4, 6, 4},
                       {5, 6, 3, 5, 4, 5}});
}

inline std::optional<CubeFrame> builtin_fixture(std::string_view id) {
    if (id == "figure1") return figure1();
    return std::nullopt;
}

inline std::vector<std::string> builtin_fixture_ids() { return {"figure1"}; }

/// Where each output row came from. For row-preserving verbs, source_rows[i]
/// is the input index of output row i. Summaries collapse rows and set `aggregated`.
struct RowLineage {
    std::vector<std::size_t> source_rows;
    bool aggregated = false;

    static RowLineage identity(std::size_t n) {
        RowLineage l;
        l.source_rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) l.source_rows[i] = i;
        return l;
    }
};

/// What changed between two frames. Row indices are 0-based source indices.
struct FrameDiff {
    std::vector<std::size_t> kept_rows;
    std::vector<std::size_t> dropped_rows;
    std::vector<std::string> added_columns;
    std::vector<std::string> dropped_columns;
    std::vector<std::string> changed_columns;
    /// permutation[i] = position among kept rows (in source order) of output row i.
    std::optional<std::vector<std::size_t>> row_permutation;
    bool columns_reordered = false;
    bool groups_changed = false;
    bool aggregated = false;

    bool empty() const {
        return dropped_rows.empty() && added_columns.empty() && dropped_columns.empty() &&
               changed_columns.empty() && !row_permutation && !columns_reordered &&
               !groups_changed && !aggregated;
    }

    friend bool operator==(const FrameDiff&, const FrameDiff&) = default;
};

inline FrameDiff diff_frames(const CubeFrame& before, const CubeFrame& after,
                             const RowLineage& lineage) {
    FrameDiff d;
    d.groups_changed = before.groups() != after.groups();

    for (const auto& c : after.columns()) {
        if (!before.index_of(c.name)) d.added_columns.push_back(c.name);
    }
    for (const auto& c : before.columns()) {
        if (!after.index_of(c.name)) d.dropped_columns.push_back(c.name);
    }

    if (lineage.aggregated) {
        d.aggregated = true;
        for (std::size_t r = 0; r < before.nrows(); ++r) d.dropped_rows.push_back(r);
        return d;
    }

    const auto& src = lineage.source_rows;
    if (src.size() != after.nrows()) {
        throw WrangleError(ErrorKind::inconsistent_provenance,
                           "lineage covers " + std::to_string(src.size()) + " rows but frame has " +
                               std::to_string(after.nrows()));
    }
    std::vector<bool> seen(before.nrows(), false);
    for (auto s : src) {
        if (s >= before.nrows() || seen[s]) {
            throw WrangleError(ErrorKind::inconsistent_provenance,
                               "lineage row " + std::to_string(s) + " is out of range or repeated");
        }
        seen[s] = true;
    }
    for (std::size_t r = 0; r < before.nrows(); ++r) {
        (seen[r] ? d.kept_rows : d.dropped_rows).push_back(r);
    }
    if (!std::is_sorted(src.begin(), src.end())) {
        std::vector<std::size_t> perm(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            perm[i] = static_cast<std::size_t>(
                std::lower_bound(d.kept_rows.begin(), d.kept_rows.end(), src[i]) - d.kept_rows.begin());
        }
        d.row_permutation = std::move(perm);
    }

    std::vector<std::string> common_before, common_after;
    for (const auto& c : before.columns()) {
        if (after.index_of(c.name)) common_before.push_back(c.name);
    }
    for (const auto& c : after.columns()) {
        auto bi = before.index_of(c.name);
        if (!bi) continue;
        common_after.push_back(c.name);
        const auto& old_cells = before.column(*bi).cells;
        for (std::size_t i = 0; i < src.size(); ++i) {
            if (!(c.cells[i] == old_cells[src[i]])) {
                d.changed_columns.push_back(c.name);
                break;
            }
        }
    }
    d.columns_reordered = common_before != common_after;
    return d;
}

}  // namespace cubes
