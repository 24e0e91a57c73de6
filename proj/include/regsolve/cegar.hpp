#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regsolve/ir.hpp"
#include "regsolve/matcher.hpp"
#include "regsolve/solver.hpp"

namespace regsolve {

struct RefinementClause {
    enum class Kind { CaptureFix, WordExclusion };
    Kind kind = Kind::WordExclusion;
    size_t constraint_idx = 0;
    Text word;  // the solver's word for the constraint's subject
    // CaptureFix: the concrete matcher's captures, aligned with the
    // constraint's capture variable list.
    std::vector<std::optional<Text>> captures;
};

struct SolveResult {
    enum class Status { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    Assignment model;  // meaningful iff Sat; validated against the matcher
    int refinements_used = 0;
    std::vector<int> per_constraint_refinements;
    std::vector<RefinementClause> trace;
    std::string diagnostics;
};

struct CegarOptions {
    int refinement_limit = 20;
    Millis solver_timeout = kDefaultSolverTimeout;
    bool incremental = true;
    std::string solver_command = default_solver_command();
    // An existing session to reuse (reset between problems); owned elsewhere.
    SolverSession* session = nullptr;
};

// Replays one regex constraint concretely for the subject value `word`.
MatchResult concrete_match(const RegexConstraintInfo& info, const Text& word);

// The refinement clause as a formula over the problem's variables.
Ir refinement_clause_ir(const ConstraintProblem& problem, const RefinementClause& clause);

// Appends exactly one clause; the problem is otherwise unchanged.
ConstraintProblem refine(ConstraintProblem problem, const RefinementClause& clause);

// Solve / concretely validate / strengthen until the assignment is
// matching-precedence correct, the problem is unsatisfiable, or the
// refinement limit or a solver timeout is hit.
SolveResult cegar_solve(const ConstraintProblem& problem, const CegarOptions& options = {});

}  // namespace regsolve
