#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "regsolve/ast.hpp"

namespace regsolve {

// Per-regex feature usage counters, one per survey category.
struct FeatureProfile {
    std::uint64_t capture_groups = 0;
    std::uint64_t global_flag = 0;
    std::uint64_t character_class = 0;  // bracketed [...] classes
    std::uint64_t kleene_plus = 0;
    std::uint64_t kleene_star = 0;
    std::uint64_t ignore_case_flag = 0;
    std::uint64_t ranges = 0;  // a-z items inside classes
    std::uint64_t non_capturing = 0;
    std::uint64_t repetition = 0;
    std::uint64_t lazy_kleene_star = 0;
    std::uint64_t multiline_flag = 0;
    std::uint64_t word_boundary = 0;  // \b and \B
    std::uint64_t lazy_kleene_plus = 0;
    std::uint64_t lookaheads = 0;  // positive and negative
    std::uint64_t backreferences = 0;
    std::uint64_t lazy_repetition = 0;
    std::uint64_t quantified_backreferences = 0;  // backreference beneath *, + or {m,n}
    std::uint64_t sticky_flag = 0;
    std::uint64_t unicode_flag = 0;

    FeatureProfile& operator+=(const FeatureProfile& o);
    bool operator==(const FeatureProfile&) const = default;
};

// Stable field order used by reports.
inline constexpr std::array<const char*, 19> kFeatureNames = {
    "capture_groups",    "global_flag",     "character_class",
    "kleene_plus",       "kleene_star",     "ignore_case_flag",
    "ranges",            "non_capturing",   "repetition",
    "lazy_kleene_star",  "multiline_flag",  "word_boundary",
    "lazy_kleene_plus",  "lookaheads",      "backreferences",
    "lazy_repetition",   "quantified_backreferences", "sticky_flag",
    "unicode_flag",
};

std::uint64_t feature_by_index(const FeatureProfile& p, size_t i);

FeatureProfile profile_features(const RegexAst& ast, const FlagSet& flags);

}  // namespace regsolve
