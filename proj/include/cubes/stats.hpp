#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cubes/cell.hpp"
#include "cubes/error.hpp"

// Summary statistics. Any NA in the input makes the result NA. Empty input
// gives NA for everything except sum, which gives 0.
namespace cubes::stats {

inline bool any_na(std::span<const Cell> xs) {
    return std::any_of(xs.begin(), xs.end(), [](const Cell& c) { return c.is_na(); });
}

inline Cell sum(std::span<const Cell> xs) {
    if (any_na(xs)) return Cell::na();
    double s = 0;
    for (const auto& c : xs) s += c.value();
    return s;
}

inline Cell min(std::span<const Cell> xs) {
    if (xs.empty() || any_na(xs)) return Cell::na();
    double m = xs.front().value();
    for (const auto& c : xs) m = std::min(m, c.value());
    return m;
}

inline Cell max(std::span<const Cell> xs) {
    if (xs.empty() || any_na(xs)) return Cell::na();
    double m = xs.front().value();
    for (const auto& c : xs) m = std::max(m, c.value());
    return m;
}

inline Cell mean(std::span<const Cell> xs) {
    if (xs.empty() || any_na(xs)) return Cell::na();
    return sum(xs).value() / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator). Fewer than two values gives NA.
inline Cell sd(std::span<const Cell> xs) {
    if (xs.size() < 2 || any_na(xs)) return Cell::na();
    double m = mean(xs).value();
    double ss = 0;
    for (const auto& c : xs) ss += (c.value() - m) * (c.value() - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Linear-interpolation quantile at 1-based position h = (n - 1) p + 1.
inline Cell quantile(std::span<const Cell> xs, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw WrangleError(ErrorKind::probs_out_of_range,
                           "probs must be between 0 and 1, got " + format_number(p));
    }
    if (xs.empty() || any_na(xs)) return Cell::na();
    std::vector<double> v;
    v.reserve(xs.size());
    for (const auto& c : xs) v.push_back(c.value());
    std::sort(v.begin(), v.end());
    double h = static_cast<double>(v.size() - 1) * p;  // 0-based
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return v[lo];
    return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace cubes::stats
