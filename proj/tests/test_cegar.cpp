#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regsolve/cegar.hpp"
#include "regsolve/oracle.hpp"
#include "regsolve/parser.hpp"
#include "regsolve/problem_file.hpp"

using namespace regsolve;

namespace {

CompiledProblem compile(const std::string& text) {
    UnrollConfig cfg;
    return compile_problem(parse_problem_text(text), cfg);
}

}  // namespace

TEST_CASE("the spurious greedy candidate is eliminated by one capture fix") {
    CompiledProblem cp = compile(
        "str w len<=6\n"
        "assert in w /^a*(a)?$/ captures C0 C1\n"
        "assert eq w \"aa\"\n"
        "assert eq C1 \"a\"\n");
    SolveResult result = cegar_solve(cp.problem);
    CHECK(result.status == SolveResult::Status::Unsat);
    CHECK(result.refinements_used >= 1);
    REQUIRE(!result.trace.empty());
    const RefinementClause& clause = result.trace.front();
    CHECK(clause.kind == RefinementClause::Kind::CaptureFix);
    CHECK(to_utf8(clause.word) == "aa");
    REQUIRE(clause.captures.size() == 2);
    CHECK(to_utf8(clause.captures[0].value()) == "aa");
    CHECK_FALSE(clause.captures[1].has_value());  // the matcher starves (a)?
}

TEST_CASE("the worked path condition solves to a bug-triggering witness") {
    CompiledProblem cp = compile(
        "str args0 len<=24\n"
        "assert in args0 /<(\\w+)>([0-9]*)<\\/\\1>/ captures C0 C1 C2\n"
        "assert eq C1 \"timeout\"\n"
        "assert notin C2 /^[0-9]+$/ captures D0\n");
    SolveResult result = cegar_solve(cp.problem);
    REQUIRE(result.status == SolveResult::Status::Sat);
    // replay the witness end to end through the matcher
    Text witness = result.model.strings.at("args0");
    RegexValue re{parse_pattern("<(\\w+)>([0-9]*)<\\/\\1>", "").first, FlagSet{}, 0};
    MatchResult m = exec(re, witness);
    REQUIRE(m.matched);
    REQUIRE(m.captures[1].has_value());
    CHECK(to_utf8(*m.captures[1]) == "timeout");
    RegexValue digits{parse_pattern("^[0-9]+$", "").first, FlagSet{}, 0};
    CHECK_FALSE(test(digits, m.captures[2].value_or(Text{})));
}

TEST_CASE("contradictory memberships are unsat without refinement") {
    CompiledProblem cp = compile(
        "str w len<=4\n"
        "assert in w /^a$/ captures A0\n"
        "assert in w /^b$/ captures B0\n");
    SolveResult result = cegar_solve(cp.problem);
    CHECK(result.status == SolveResult::Status::Unsat);
    CHECK(result.refinements_used == 0);
}

TEST_CASE("refinement clauses take the two Algorithm-1 shapes") {
    CompiledProblem cp = compile(
        "str w len<=4\n"
        "assert in w /^(a)(b)?$/ captures C0 C1 C2\n");
    // member polarity + concrete match + capture mismatch -> capture fix
    RefinementClause fix;
    fix.kind = RefinementClause::Kind::CaptureFix;
    fix.constraint_idx = 0;
    fix.word = from_utf8("ab");
    fix.captures = {from_utf8("ab"), from_utf8("a"), from_utf8("b")};
    Ir fix_ir = refinement_clause_ir(cp.problem, fix);
    Assignment a;
    a.strings["w"] = from_utf8("ab");
    a.captures["C0"] = from_utf8("ab");
    a.captures["C1"] = from_utf8("a");
    a.captures["C2"] = from_utf8("b");
    CHECK(eval_ir(fix_ir, a));
    a.captures["C2"] = std::nullopt;
    CHECK_FALSE(eval_ir(fix_ir, a));
    a.strings["w"] = from_utf8("a");  // different word: implication vacuous
    CHECK(eval_ir(fix_ir, a));

    // word exclusion
    RefinementClause excl;
    excl.kind = RefinementClause::Kind::WordExclusion;
    excl.constraint_idx = 0;
    excl.word = from_utf8("ab");
    Ir excl_ir = refinement_clause_ir(cp.problem, excl);
    a.strings["w"] = from_utf8("ab");
    CHECK_FALSE(eval_ir(excl_ir, a));
    a.strings["w"] = from_utf8("x");
    CHECK(eval_ir(excl_ir, a));

    // refine appends exactly one clause
    size_t before = cp.problem.assertions.size();
    ConstraintProblem refined = refine(cp.problem, excl);
    CHECK(refined.assertions.size() == before + 1);
    CHECK(cp.problem.assertions.size() == before);
}

TEST_CASE("every added clause is violated by the model that triggered it") {
    CompiledProblem cp = compile(
        "str w len<=6\n"
        "assert in w /^(a*)(a*)$/ captures C0 C1 C2\n"
        "assert eq concat(C1, C2) \"aaa\"\n"
        "assert eq C2 \"a\"\n");
    SolveResult result = cegar_solve(cp.problem);
    // greedy (a*) takes everything: C2 = "a" is impossible
    CHECK(result.status == SolveResult::Status::Unsat);
    CHECK(result.refinements_used >= 1);
    // progress: replay the trace; the triggering models are gone, but each
    // clause must strictly strengthen the problem
    ConstraintProblem current = cp.problem;
    for (const auto& clause : result.trace) {
        size_t n = current.assertions.size();
        current = refine(current, clause);
        CHECK(current.assertions.size() == n + 1);
    }
}

TEST_CASE("non-membership with a concretely matching word is excluded") {
    CompiledProblem cp = compile(
        "str w len<=3\n"
        "assert notin w /a/ captures N0\n"
        "assert in w /^(a|b)$/ captures C0 C1\n");
    SolveResult result = cegar_solve(cp.problem);
    REQUIRE(result.status == SolveResult::Status::Sat);
    CHECK(to_utf8(result.model.strings.at("w")) == "b");
}

TEST_CASE("sat results replay exactly through the matcher") {
    const char* problems[] = {
        "str w len<=5\nassert in w /(a)(b)*\\2/ captures C0 C1 C2\n",
        "str w len<=5\nassert in w /^(a+)(a)$/ captures C0 C1 C2\n",
        "str w len<=6\nassert in w /(?=(ab))a(b)/ captures C0 C1 C2\n",
        "str w len<=6\nassert in w /\\b(a)\\b/ captures C0 C1\nassert eq w concat(\"b \", C1)\n",
    };
    for (const char* text : problems) {
        CompiledProblem cp = compile(text);
        SolveResult result = cegar_solve(cp.problem);
        CAPTURE(text);
        REQUIRE(result.status == SolveResult::Status::Sat);
        for (const auto& info : cp.problem.regex_constraints) {
            Text word = info.subject_is_capture
                            ? result.model.captures.at(info.subject).value_or(Text{})
                            : result.model.strings.at(info.subject);
            MatchResult m = concrete_match(info, word);
            REQUIRE(m.matched == (info.polarity == Polarity::Member));
            if (!m.matched) continue;
            size_t base = info.mode == ApiMode::Exec ? 0 : 1;
            for (size_t i = 0; i < info.capture_vars.size(); ++i) {
                auto modeled = result.model.captures.at(info.capture_vars[i]);
                auto actual = base + i < m.captures.size() ? m.captures[base + i]
                                                           : std::nullopt;
                CHECK(modeled == actual);
            }
        }
    }
}

TEST_CASE("the refinement limit yields unknown, never unsat") {
    // every word a^n admits only the spurious split (greedy leaves C2 empty),
    // so each iteration must exclude one more word until the limit trips
    CompiledProblem cp = compile(
        "str w len<=6\n"
        "assert in w /^(a*)(a*)$/ captures C0 C1 C2\n"
        "assert eq C2 \"a\"\n");
    CegarOptions options;
    options.refinement_limit = 2;
    SolveResult result = cegar_solve(cp.problem, options);
    CHECK(result.status == SolveResult::Status::Unknown);
    CHECK(result.refinements_used == 2);
}

TEST_CASE("cegar agrees with brute force on small problems") {
    const char* texts[] = {
        "str w len<=4\nassert in w /^(a|b)(ab?)$/ captures C0 C1 C2\nassert eq C2 \"ab\"\n",
        "str w len<=4\nassert in w /^(a*)b$/ captures C0 C1\nassert eq C1 \"aa\"\n",
        "str w len<=4\nassert in w /(a)\\1/ captures C0 C1\nassert notin w /aaa/ captures N0\n",
        "str w len<=3\nassert in w /^(a)$/ captures C0 C1\nassert eq C1 \"b\"\n",
        "str w len<=4\nassert in w /^(?:(a)|(b))+$/ captures C0 C1 C2\nassert undef C1\n",
    };
    EnumerationSpec spec{{U'a', U'b'}, 4, 1000000};
    SolverSession session(default_solver_command());
    for (const char* text : texts) {
        CompiledProblem cp = compile(text);
        CegarOptions options;
        options.session = &session;
        SolveResult got = cegar_solve(cp.problem, options);
        BruteForceResult expected = brute_force_solve(cp.problem, spec);
        CAPTURE(text);
        REQUIRE(got.status != SolveResult::Status::Unknown);
        CHECK((got.status == SolveResult::Status::Sat) ==
              (expected.status == BruteForceResult::Status::Sat));
    }
}
