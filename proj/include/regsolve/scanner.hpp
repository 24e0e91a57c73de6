#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regsolve/features.hpp"

namespace regsolve {

struct ExtractedLiteral {
    std::string pattern;  // raw pattern body text
    std::string flags;
    size_t byte_offset = 0;
};

// Finds /pattern/flags literals in JavaScript source, skipping strings,
// template literals and comments and disambiguating division by the class of
// the preceding significant token. `new RegExp(...)` is deliberately not
// detected, so counts are a lower bound.
std::vector<ExtractedLiteral> extract_literals(const std::string& source_text);

struct ScanReport {
    std::uint64_t files_scanned = 0;
    std::uint64_t literals_found = 0;
    std::uint64_t unique_literals = 0;
    std::uint64_t parse_failures = 0;
    std::uint64_t io_errors = 0;
    FeatureProfile total;   // across all parsed literals
    FeatureProfile unique;  // across distinct pattern+flags texts

    bool operator==(const ScanReport&) const = default;
};

// Recursively scans *.js, *.mjs and *.cjs files under the given roots.
ScanReport scan_paths(const std::vector<std::string>& roots);

std::string report_to_text(const ScanReport& report);
// One row per feature: name,totalCount,totalPct,uniqueCount,uniquePct.
std::string report_to_csv(const ScanReport& report);

}  // namespace regsolve
