#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "regsolve/oracle.hpp"
#include "regsolve/parser.hpp"
#include "regsolve/problem_file.hpp"

using namespace regsolve;

namespace {

EnumerationSpec ab_spec(size_t max_len) { return {{U'a', U'b'}, max_len, 1000000}; }

bool contains(const std::vector<CapturingTuple>& tuples, const std::string& w,
              const std::vector<std::optional<std::string>>& captures) {
    for (const auto& t : tuples) {
        if (to_utf8(t.word) != w) continue;
        if (t.captures.size() != captures.size()) continue;
        bool all = true;
        for (size_t i = 0; i < captures.size() && all; ++i) {
            if (captures[i].has_value() != t.captures[i].has_value()) all = false;
            else if (captures[i] && to_utf8(*t.captures[i]) != *captures[i]) all = false;
        }
        if (all) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("enumeration of the overview capturing language") {
    auto [ast, flags] = parse_pattern("^(?:a|(b))\\1$", "");
    auto tuples = capturing_language_enumerate(ast, flags, ab_spec(2));
    CHECK(contains(tuples, "a", {"a", std::nullopt}));
    CHECK(contains(tuples, "bb", {"bb", "b"}));
    CHECK_FALSE(contains(tuples, "b", {"b", "b"}));
}

TEST_CASE("the empty-pattern language is the empty tuple") {
    auto [ast, flags] = parse_pattern("^$", "");
    auto tuples = capturing_language_enumerate(ast, flags, ab_spec(2));
    REQUIRE(tuples.size() == 1);
    CHECK(tuples[0].word.empty());
    CHECK(to_utf8(*tuples[0].captures[0]).empty());
}

TEST_CASE("alternation leaves the untaken group undefined in every tuple") {
    auto [ast, flags] = parse_pattern("^(a)|(b)$", "");
    auto tuples = capturing_language_enumerate(ast, flags, ab_spec(1));
    CHECK(contains(tuples, "a", {"a", "a", std::nullopt}));
    CHECK(contains(tuples, "b", {"b", std::nullopt, "b"}));
}

TEST_CASE("every enumerated tuple replays through the matcher") {
    for (const char* src : {"(a*)(b)?", "^(?:(a)|b)+$", "(?=(a))a|b"}) {
        auto [ast, flags] = parse_pattern(src, "");
        for (const auto& t : capturing_language_enumerate(ast, flags, ab_spec(3))) {
            RegexValue value{ast, flags, 0};
            MatchResult m = exec(value, t.word);
            CAPTURE(src);
            REQUIRE(m.matched);
            CHECK(m.captures == t.captures);
        }
    }
}

TEST_CASE("enumeration respects the budget") {
    auto [ast, flags] = parse_pattern("a", "");
    EnumerationSpec spec{{U'a', U'b'}, 8, 100};
    CHECK_THROWS_AS(capturing_language_enumerate(ast, flags, spec), BudgetExceeded);
}

TEST_CASE("brute force decides the spurious-capture problem") {
    UnrollConfig cfg;
    CompiledProblem cp = compile_problem(parse_problem_text("str w len<=4\n"
                                                            "assert in w /^a*(a)?$/ captures C0 C1\n"
                                                            "assert eq w \"aa\"\n"
                                                            "assert eq C1 \"a\"\n"),
                                         cfg);
    BruteForceResult r = brute_force_solve(cp.problem, ab_spec(4));
    CHECK(r.status == BruteForceResult::Status::Unsat);
}

TEST_CASE("brute force finds plain memberships") {
    UnrollConfig cfg;
    CompiledProblem cp = compile_problem(
        parse_problem_text("str w len<=3\nassert in w /^ab$/ captures C0\n"), cfg);
    BruteForceResult r = brute_force_solve(cp.problem, ab_spec(3));
    REQUIRE(r.status == BruteForceResult::Status::Sat);
    CHECK(to_utf8(r.model.strings.at("w")) == "ab");
    CHECK(to_utf8(r.model.captures.at("C0").value()) == "ab");
}

TEST_CASE("brute force refutes contradictions") {
    UnrollConfig cfg;
    CompiledProblem cp = compile_problem(parse_problem_text("str w len<=3\n"
                                                            "assert in w /^a$/ captures A0\n"
                                                            "assert in w /^b$/ captures B0\n"),
                                         cfg);
    CHECK(brute_force_solve(cp.problem, ab_spec(3)).status == BruteForceResult::Status::Unsat);
}

TEST_CASE("brute force requires explicit bounds") {
    UnrollConfig cfg;
    CompiledProblem cp = compile_problem(
        parse_problem_text("str w\nassert in w /a/ captures C0\n"), cfg);
    CHECK_THROWS_AS(brute_force_solve(cp.problem, ab_spec(3)), BudgetExceeded);
}

TEST_CASE("capture-valued subjects chain through constraints") {
    UnrollConfig cfg;
    CompiledProblem cp = compile_problem(
        parse_problem_text("str w len<=4\n"
                           "assert in w /^<(a+)>$/ captures C0 C1\n"
                           "assert in C1 /^aa$/ captures D0\n"),
        cfg);
    EnumerationSpec spec{{U'a', U'b', U'<', U'>'}, 4, 1000000};
    BruteForceResult r = brute_force_solve(cp.problem, spec);
    REQUIRE(r.status == BruteForceResult::Status::Sat);
    CHECK(to_utf8(r.model.strings.at("w")) == "<aa>");
}
