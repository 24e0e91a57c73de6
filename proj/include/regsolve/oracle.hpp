#pragma once

#include <vector>

#include "regsolve/cegar.hpp"
#include "regsolve/ir.hpp"
#include "regsolve/matcher.hpp"

namespace regsolve {

struct EnumerationSpec {
    std::vector<char32_t> alphabet;
    size_t max_len = 4;          // kept small; enumeration is exponential
    size_t budget = 2000000;     // cap on enumerated words
};

// One matcher-realizable element of the capturing language: the word plus
// the precedence-correct captures (slot 0 = whole match).
struct CapturingTuple {
    Text word;
    std::vector<std::optional<Text>> captures;
};

// Exhaustive matcher runs over every word up to max_len: the restriction of
// the capturing language to precedence-correct tuples.
std::vector<CapturingTuple> capturing_language_enumerate(const RegexAst& ast,
                                                         const FlagSet& flags,
                                                         const EnumerationSpec& spec);

// Independent decision procedure: enumerate bounded words for all declared
// subject variables, derive captures through the matcher, and evaluate the
// user-level assertions directly. Every subject must carry a length bound of
// at most spec.max_len.
struct BruteForceResult {
    enum class Status { Sat, Unsat };
    Status status = Status::Unsat;
    Assignment model;
};

BruteForceResult brute_force_solve(const ConstraintProblem& problem,
                                   const EnumerationSpec& spec);

}  // namespace regsolve
