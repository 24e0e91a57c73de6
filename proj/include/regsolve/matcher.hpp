#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "regsolve/ast.hpp"
#include "regsolve/errors.hpp"

namespace regsolve {

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MatchBudgetExceeded : public std::runtime_error {
public:
    MatchBudgetExceeded() : std::runtime_error("backtracking step budget exceeded") {}
};

struct MatchResult {
    bool matched = false;
    size_t index = 0;  // start of the whole match in the input
    // Position 0 is the whole match; an unset optional is an unparticipating
    // group, distinct from a group that matched the empty string.
    std::vector<std::optional<Text>> captures;
    Text input;
    size_t last_index_after = 0;
    // Which alternate matched at annotated alternation sites (rewriting
    // support; empty for ordinary patterns).
    std::map<int, int> taken_alternates;
};

// Stateful wrapper mirroring a RegExp object: lastIndex participates in
// matching for the sticky and global flags.
struct RegexValue {
    RegexAst ast;
    FlagSet flags;
    size_t last_index = 0;
};

inline constexpr std::uint64_t kDefaultStepBudget = 10000000;

// Single anchored match attempt at `start` with ES6 matching precedence.
std::optional<MatchResult> match_at(const RegexAst& ast, const Text& input, size_t start,
                                    const FlagSet& flags,
                                    std::uint64_t step_budget = kDefaultStepBudget);

// RegExp.prototype.exec per the ES6 algorithm: sticky/global start handling,
// scan for the first match, capture extraction, lastIndex update.
MatchResult exec(RegexValue& r, const Text& input,
                 std::uint64_t step_budget = kDefaultStepBudget);

bool test(RegexValue& r, const Text& input, std::uint64_t step_budget = kDefaultStepBudget);

// Every backtracking completion of a single anchored attempt, in matching
// precedence order. Throws BudgetExceeded past `max_results` completions.
std::vector<MatchResult> match_all_at(const RegexAst& ast, const Text& input, size_t start,
                                      const FlagSet& flags, size_t max_results = 100000,
                                      std::uint64_t step_budget = kDefaultStepBudget);

// Whole-word match: some attempt starting at 0 must consume the entire input.
// Used to decide classical-regular-language membership.
bool matches_full(const RegexAst& ast, const Text& input, const FlagSet& flags,
                  std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace regsolve
