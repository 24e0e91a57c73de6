#include "regsolve/cegar.hpp"

#include "regsolve/smtlib.hpp"

namespace regsolve {

MatchResult concrete_match(const RegexConstraintInfo& info, const Text& word) {
    FlagSet flags = info.flags;
    size_t last_index = info.last_index;
    if (info.mode == ApiMode::Raw) {
        flags.sticky = false;
        flags.global = false;
        last_index = 0;
    }
    RegexValue value{info.regex, flags, last_index};
    return exec(value, word);
}

namespace {

Term subject_term(const RegexConstraintInfo& info) {
    return info.subject_is_capture ? term_cap_value(info.subject) : term_var(info.subject);
}

Text subject_value(const RegexConstraintInfo& info, const Assignment& a) {
    if (info.subject_is_capture) return a.captures.at(info.subject).value_or(Text{});
    return a.strings.at(info.subject);
}

// The modeled capture variables aligned with the concrete result's slots.
// Exec mode lists C0..Cn; raw mode C1..Cn (slot 0 is internal).
std::vector<std::pair<std::string, size_t>> capture_slots(const RegexConstraintInfo& info) {
    std::vector<std::pair<std::string, size_t>> out;
    size_t base = info.mode == ApiMode::Exec ? 0 : 1;
    for (size_t i = 0; i < info.capture_vars.size(); ++i)
        out.push_back({info.capture_vars[i], base + i});
    return out;
}

}  // namespace

Ir refinement_clause_ir(const ConstraintProblem& problem, const RefinementClause& clause) {
    const RegexConstraintInfo& info = problem.regex_constraints.at(clause.constraint_idx);
    Term subj = subject_term(info);
    if (clause.kind == RefinementClause::Kind::WordExclusion)
        return ir_not(ir_str_eq(subj, term_lit(clause.word)));
    std::vector<Ir> fixes;
    auto slots = capture_slots(info);
    for (size_t i = 0; i < slots.size(); ++i) {
        const auto& [name, slot] = slots[i];
        const std::optional<Text>& concrete =
            slot < clause.captures.size() ? clause.captures[slot] : std::nullopt;
        if (concrete) {
            fixes.push_back(ir_cap_eq(name, term_lit(*concrete)));
        } else {
            fixes.push_back(ir_cap_undef(name));
        }
    }
    return ir_implies(ir_str_eq(subj, term_lit(clause.word)), ir_and(std::move(fixes)));
}

ConstraintProblem refine(ConstraintProblem problem, const RefinementClause& clause) {
    problem.assertions.push_back(refinement_clause_ir(problem, clause));
    return problem;
}

namespace {

// One validation pass per Algorithm 1 lines 8..22. Returns the clauses to add.
std::vector<RefinementClause> validate(const ConstraintProblem& problem, const Assignment& a) {
    std::vector<RefinementClause> clauses;
    for (size_t j = 0; j < problem.regex_constraints.size(); ++j) {
        const RegexConstraintInfo& info = problem.regex_constraints[j];
        Text word = subject_value(info, a);
        MatchResult concrete = concrete_match(info, word);
        if (concrete.matched) {
            if (info.polarity == Polarity::Member) {
                bool mismatch = false;
                for (const auto& [name, slot] : capture_slots(info)) {
                    const std::optional<Text>& modeled = a.captures.at(name);
                    const std::optional<Text>& actual =
                        slot < concrete.captures.size() ? concrete.captures[slot] : std::nullopt;
                    if (modeled != actual) {
                        mismatch = true;
                        break;
                    }
                }
                if (mismatch) {
                    RefinementClause c;
                    c.kind = RefinementClause::Kind::CaptureFix;
                    c.constraint_idx = j;
                    c.word = word;
                    c.captures = concrete.captures;
                    clauses.push_back(std::move(c));
                }
            } else {
                // Non-membership query: the word matched concretely.
                RefinementClause c;
                c.kind = RefinementClause::Kind::WordExclusion;
                c.constraint_idx = j;
                c.word = word;
                clauses.push_back(std::move(c));
            }
        } else if (info.polarity == Polarity::Member) {
            // No concrete match for a membership constraint.
            RefinementClause c;
            c.kind = RefinementClause::Kind::WordExclusion;
            c.constraint_idx = j;
            c.word = word;
            clauses.push_back(std::move(c));
        }
    }
    return clauses;
}

}  // namespace

SolveResult cegar_solve(const ConstraintProblem& problem, const CegarOptions& options) {
    SolveResult result;
    result.per_constraint_refinements.assign(problem.regex_constraints.size(), 0);

    ConstraintProblem current = problem;

    std::unique_ptr<SolverSession> owned;
    SolverSession* session = options.session;
    auto fresh_session = [&]() {
        owned = std::make_unique<SolverSession>(options.solver_command);
        session = owned.get();
        session->add("(set-option :produce-models true)\n");
    };
    if (session) {
        session->reset();
    } else {
        fresh_session();
    }
    session->add(emit_declarations(current));
    for (const auto& a : current.assertions) session->add(emit_assert(a));

    while (true) {
        SolverOutcome::Status status = session->check_sat(options.solver_timeout);
        if (status == SolverOutcome::Status::Unsat) {
            result.status = SolveResult::Status::Unsat;
            return result;
        }
        if (status == SolverOutcome::Status::Unknown) {
            result.status = SolveResult::Status::Unknown;
            result.diagnostics = "solver returned unknown or timed out";
            return result;
        }
        auto model = session->read_model(current, options.solver_timeout);
        if (!model) {
            result.status = SolveResult::Status::Unknown;
            result.diagnostics = "model extraction timed out";
            return result;
        }

        // Round-trip fidelity: the solver's assignment must satisfy the
        // problem under the IR's own semantics.
        if (!eval_problem(current, *model))
            throw SolverCrash("solver model does not satisfy the problem under IR evaluation");

        std::vector<RefinementClause> clauses = validate(current, *model);
        if (clauses.empty()) {
            result.status = SolveResult::Status::Sat;
            result.model = std::move(*model);
            return result;
        }
        if (result.refinements_used >= options.refinement_limit) {
            result.status = SolveResult::Status::Unknown;
            result.diagnostics = "refinement limit reached";
            return result;
        }
        result.refinements_used++;
        for (const RefinementClause& clause : clauses) {
            result.per_constraint_refinements[clause.constraint_idx]++;
            Ir ir = refinement_clause_ir(current, clause);
            current.assertions.push_back(ir);
            result.trace.push_back(clause);
            if (options.incremental) {
                session->add(emit_assert(ir));
            }
        }
        if (!options.incremental) {
            if (options.session) {
                session->reset();
            } else {
                fresh_session();
            }
            session->add(emit_declarations(current));
            for (const auto& a : current.assertions) session->add(emit_assert(a));
        }
    }
}

}  // namespace regsolve
