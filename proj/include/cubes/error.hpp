#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cubes {

/// Half-open byte range [start, end) into pipeline source text.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

inline Span join(Span a, Span b) {
    return {std::min(a.start, b.start), std::max(a.end, b.end)};
}

enum class ErrorKind {
    lex,
    parse,
    unknown_verb,
    mixed_select_signs,
    equals_for_comparison,
    chained_comparison,
    unknown_column,
    unknown_function,
    type_error,
    length_mismatch,
    non_scalar_summary,
    probs_out_of_range,
    select_drops_group_key,
    desc_outside_arrange,
    invalid_arrange_key,
    ragged_rows,
    duplicate_column,
    invalid_name,
    invalid_frame,
    inconsistent_provenance,
    io,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::lex: return "LexError";
        case ErrorKind::parse: return "ParseError";
        case ErrorKind::unknown_verb: return "UnknownVerb";
        case ErrorKind::mixed_select_signs: return "MixedSelectSigns";
        case ErrorKind::equals_for_comparison: return "EqualsForComparison";
        case ErrorKind::chained_comparison: return "ChainedComparison";
        case ErrorKind::unknown_column: return "UnknownColumn";
        case ErrorKind::unknown_function: return "UnknownFunction";
        case ErrorKind::type_error: return "TypeError";
        case ErrorKind::length_mismatch: return "LengthMismatch";
        case ErrorKind::non_scalar_summary: return "NonScalarSummary";
        case ErrorKind::probs_out_of_range: return "ProbsOutOfRange";
        case ErrorKind::select_drops_group_key: return "SelectDropsGroupKey";
        case ErrorKind::desc_outside_arrange: return "DescOutsideArrange";
        case ErrorKind::invalid_arrange_key: return "InvalidArrangeKey";
        case ErrorKind::ragged_rows: return "RaggedRows";
        case ErrorKind::duplicate_column: return "DuplicateColumn";
        case ErrorKind::invalid_name: return "InvalidName";
        case ErrorKind::invalid_frame: return "InvalidFrame";
        case ErrorKind::inconsistent_provenance: return "InconsistentProvenance";
        case ErrorKind::io: return "IOError";
    }
    return "Error";
}

/// True for errors raised while reading pipeline text (as opposed to running it).
inline bool is_syntax_error(ErrorKind k) {
    switch (k) {
        case ErrorKind::lex:
        case ErrorKind::parse:
        case ErrorKind::unknown_verb:
        case ErrorKind::mixed_select_signs:
        case ErrorKind::equals_for_comparison:
        case ErrorKind::chained_comparison:
            return true;
        default:
            return false;
    }
}

/// Every failure in the library is reported through this one exception type.
/// Student mistakes are lesson content, so the error carries enough structure
/// (span, hint, stage) for the REPL and the workbench to point at the problem.
class WrangleError : public std::runtime_error {
public:
    WrangleError(ErrorKind kind, std::string message,
                 std::optional<Span> span = std::nullopt, std::string hint = {})
        : std::runtime_error(message),
          kind_(kind),
          message_(std::move(message)),
          span_(span),
          hint_(std::move(hint)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    const std::optional<Span>& span() const noexcept { return span_; }
    const std::string& hint() const noexcept { return hint_; }
    const std::optional<std::size_t>& stage() const noexcept { return stage_; }

    WrangleError& at_stage(std::size_t index) {
        stage_ = index;
        return *this;
    }

private:
    ErrorKind kind_;
    std::string message_;
    std::optional<Span> span_;
    std::string hint_;
    std::optional<std::size_t> stage_;
};

/// Plain Levenshtein distance, used for "did you mean" suggestions.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

/// Closest candidate within a small edit budget, if any.
template <typename Range>
std::optional<std::string> nearest_match(std::string_view word, const Range& candidates) {
    std::optional<std::string> best;
    std::size_t best_d = 0;
    std::size_t budget = std::max<std::size_t>(2, word.size() / 2);
    for (const auto& c : candidates) {
        std::size_t d = edit_distance(word, c);
        if (d <= budget && (!best || d < best_d)) {
            best = std::string(c);
            best_d = d;
        }
    }
    return best;
}

}  // namespace cubes
