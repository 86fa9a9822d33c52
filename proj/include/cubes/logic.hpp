#pragma once

#include <cstdint>
#include <string_view>

namespace cubes {

/// Three-valued truth value.
enum class Logical : std::uint8_t { f, t, na };

/*
Kleene rules:

  AND: FALSE wins, then NA, then TRUE.
    NA & FALSE = FALSE    NA & TRUE = NA    NA & NA = NA
  OR:  TRUE wins, then NA, then FALSE.
    NA | TRUE = TRUE      NA | FALSE = NA   NA | NA = NA
  NOT: !NA = NA
*/
constexpr Logical logical_and(Logical a, Logical b) {
    if (a == Logical::f || b == Logical::f) return Logical::f;
    if (a == Logical::na || b == Logical::na) return Logical::na;
    return Logical::t;
}

constexpr Logical logical_or(Logical a, Logical b) {
    if (a == Logical::t || b == Logical::t) return Logical::t;
    if (a == Logical::na || b == Logical::na) return Logical::na;
    return Logical::f;
}

constexpr Logical logical_not(Logical a) {
    if (a == Logical::na) return Logical::na;
    return a == Logical::t ? Logical::f : Logical::t;
}

constexpr Logical to_logical(bool b) { return b ? Logical::t : Logical::f; }

inline std::string_view to_string(Logical l) {
    switch (l) {
        case Logical::t: return "TRUE";
        case Logical::f: return "FALSE";
        case Logical::na: return "NA";
    }
    return "NA";
}

}  // namespace cubes
