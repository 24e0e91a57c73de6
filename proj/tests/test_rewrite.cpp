#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "regsolve/parser.hpp"
#include "regsolve/printer.hpp"
#include "regsolve/rewrite.hpp"

using namespace regsolve;

namespace {

RegexAst parse(const std::string& src) { return parse_pattern(src, "").first; }

std::vector<Text> words_up_to(const std::string& alphabet, size_t max_len) {
    std::vector<Text> out{Text{}};
    size_t begin = 0;
    for (size_t len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t i = begin; i < end; ++i)
            for (char c : alphabet) {
                Text w = out[i];
                w.push_back(static_cast<char32_t>(c));
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

}  // namespace

TEST_CASE("bounded repetition duplicates capture groups") {
    RewriteResult r = rewrite_quantifiers(parse("(a){1,2}"));
    CHECK(print_pattern(r.ast) == "(?:(a)(a)|(a))");
    CHECK(r.ast.group_count == 3);
    REQUIRE(r.corr.entries.size() == 1);
    const CorrExpr& e = *r.corr.entries[0];
    REQUIRE(e.kind == CorrExpr::Kind::Select);
    REQUIRE(e.options.size() == 2);
    CHECK(e.options[0]->kind == CorrExpr::Kind::Group);
    CHECK(e.options[0]->group == 2);  // last copy of the two-copy alternate
    CHECK(e.options[1]->group == 3);
    REQUIRE(r.corr.sites.size() == 1);
    CHECK(r.corr.sites[0].alternates.size() == 2);
}

TEST_CASE("kleene plus splits into star and a trailing copy") {
    RewriteResult r = rewrite_quantifiers(parse("(a)+"));
    CHECK(print_pattern(r.ast) == "(a)*(a)");
    CHECK(r.ast.group_count == 2);
    REQUIRE(r.corr.entries.size() == 1);
    CHECK(r.corr.entries[0]->kind == CorrExpr::Kind::Group);
    CHECK(r.corr.entries[0]->group == 2);
}

TEST_CASE("lazy optional becomes an epsilon-first alternation") {
    RewriteResult r = rewrite_quantifiers(parse("a??"));
    REQUIRE(r.ast.root->kind == Node::Kind::Alternation);
    CHECK(r.ast.root->left->kind == Node::Kind::Concat);
    CHECK(r.ast.root->left->children.empty());
    CHECK(r.ast.root->right->kind == Node::Kind::Literal);
    RewriteResult g = rewrite_quantifiers(parse("a?"));
    CHECK(g.ast.root->left->kind == Node::Kind::Literal);
}

TEST_CASE("lazy stars keep their flag for matcher-precedence fidelity") {
    RewriteResult r = rewrite_quantifiers(parse("(a)+?"));
    REQUIRE(r.ast.root->kind == Node::Kind::Concat);
    CHECK(r.ast.root->children[0]->kind == Node::Kind::Star);
    CHECK(r.ast.root->children[0]->lazy);
}

TEST_CASE("open repetition binds captures to the trailing copy") {
    RewriteResult r = rewrite_quantifiers(parse("(a|b){2,}"));
    CHECK(print_pattern(r.ast) == "(a|b)(a|b)*(a|b)");
    CHECK(r.corr.entries[0]->group == 3);
}

TEST_CASE("rewriting refuses pathological expansion") {
    CHECK_THROWS_AS(rewrite_quantifiers(parse("(ab){1,1000}")), RewriteBlowup);
}

TEST_CASE("backreference into a bounded-repetition duplicate is rejected") {
    CHECK_THROWS_AS(rewrite_quantifiers(parse("(a){1,2}\\1")), UnsupportedError);
    CHECK_NOTHROW(rewrite_quantifiers(parse("(a)+\\1")));
    CHECK_NOTHROW(rewrite_quantifiers(parse("(a){2,}\\1")));
}

TEST_CASE("mutable-bodied quantifiers survive rewriting as one unit") {
    RewriteResult r = rewrite_quantifiers(parse("((a|b)\\2)+\\1\\2"));
    REQUIRE(r.ast.root->kind == Node::Kind::Concat);
    CHECK(r.ast.root->children[0]->kind == Node::Kind::Plus);
    CHECK(r.ast.group_count == 2);
    auto classes = classify_backreferences(r.ast);
    REQUIRE(classes.size() == 3);
    CHECK(classes[0].kind == BackrefKind::Mutable);
    CHECK(classes[1].kind == BackrefKind::Immutable);  // \1
    CHECK(classes[2].kind == BackrefKind::Immutable);  // trailing \2
}

TEST_CASE("backreference classification on the worked examples") {
    {
        auto classes = classify_backreferences(rewrite_quantifiers(parse("(a\\1)*")).ast);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].kind == BackrefKind::Empty);
    }
    {
        auto classes = classify_backreferences(rewrite_quantifiers(parse("\\1(a)")).ast);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].kind == BackrefKind::Empty);
    }
    {
        auto classes = classify_backreferences(rewrite_quantifiers(parse("(a)\\1*")).ast);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].kind == BackrefKind::ImmutableQuantified);
    }
    {
        auto classes = classify_backreferences(rewrite_quantifiers(parse("(a)\\1")).ast);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].kind == BackrefKind::Immutable);
    }
    {
        // beyond the group count: always empty
        auto classes = classify_backreferences(rewrite_quantifiers(parse("(a)\\5")).ast);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].kind == BackrefKind::Empty);
    }
}

TEST_CASE("classification is stable under exec wrapping") {
    for (const char* src : {"(a)\\1", "(a\\1)*", "(a)\\1*", "((a|b)\\2)+\\1\\2"}) {
        RegexAst rewritten = rewrite_quantifiers(parse(src)).ast;
        auto before = classify_backreferences(rewritten);
        FlagSet none;
        WrapResult wrapped = wrap_for_exec(rewritten, none, 0);
        auto after = classify_backreferences(wrapped.ast);
        REQUIRE(before.size() == after.size());
        for (size_t i = 0; i < before.size(); ++i) CHECK(before[i].kind == after[i].kind);
    }
}

TEST_CASE("capture erasure on regular fragments") {
    CRegexPtr erased = erase_captures(parse("(a)(b|(c))").root);
    CHECK(cregex_member(erased, from_utf8("ab")));
    CHECK(cregex_member(erased, from_utf8("ac")));
    CHECK_FALSE(cregex_member(erased, from_utf8("a")));
    CRegexPtr star = erase_captures(parse("a*").root);
    CHECK(cregex_member(star, from_utf8("")));
    CHECK(cregex_member(star, from_utf8("aaa")));
    CHECK_THROWS_AS(erase_captures(parse("(a\\1)").root), NotRegularError);
}

TEST_CASE("erasure preserves the language ignoring captures") {
    auto words = words_up_to("ab", 5);
    FlagSet none;
    for (const char* src : {"(a)(b|(c))*", "(?:a|(b))*ab?", "((a)*b)+", "(a|ab)(b?)"}) {
        RegexAst ast = parse(src);
        CRegexPtr erased = erase_captures(ast.root);
        for (const Text& w : words) {
            CAPTURE(src);
            CAPTURE(to_utf8(w));
            CHECK(cregex_member(erased, w) == matches_full(ast, w, none));
        }
    }
}

TEST_CASE("exec wrapping pads with lazy wildcards and an outer group") {
    auto [ast, flags] = parse_pattern("goo+d", "");
    WrapResult w = wrap_for_exec(ast, flags, 0);
    CHECK(print_pattern(w.ast) == "(?:.|\\n)*?(goo+d)(?:.|\\n)*?");
    CHECK(w.offset == 0);
    CHECK(w.ast.group_count == 0);

    auto [ast2, flags2] = parse_pattern("a", "y");
    CHECK(wrap_for_exec(ast2, flags2, 3).offset == 4);
    CHECK(wrap_for_exec(ast2, flags2, 0).offset == 0);

    auto [ast3, flags3] = parse_pattern("^a$", "");
    WrapResult w3 = wrap_for_exec(ast3, flags3, 0);
    CHECK(print_pattern(w3.ast) == "(?:.|\\n)*?(^a$)(?:.|\\n)*?");
}

TEST_CASE("ignore-case rewriting closes literals and ranges") {
    CHECK(print_pattern(rewrite_ignore_case(parse("a")).root) == "[aA]");
    CHECK(print_pattern(rewrite_ignore_case(parse("[a-c]")).root) == "[a-cA-C]");
    CHECK(print_pattern(rewrite_ignore_case(parse("[0-9]")).root) == "[0-9]");
    CHECK(print_pattern(rewrite_ignore_case(parse("[x-z2]")).root) == "[x-z2X-Z]");
    // closure property: language closed under per-character case swap
    RegexAst closed = rewrite_ignore_case(parse("(?:ab|c[d-f])x"));
    FlagSet none;
    auto flip = [](Text w, size_t i) {
        w[i] = ascii_swap_case(w[i]);
        return w;
    };
    for (const std::string& s : {std::string("abx"), std::string("cdx"), std::string("cfx")}) {
        Text w = from_utf8(s);
        REQUIRE(matches_full(closed, w, none));
        for (size_t i = 0; i < w.size(); ++i) CHECK(matches_full(closed, flip(w, i), none));
    }
}

namespace {

NodePtr random_quant_regex(std::mt19937& rng, int depth, int& groups_left,
                           std::uint32_t& next_group) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
    switch (pick(rng)) {
        case 0:
        case 1:
            return make_literal(rng() % 2 ? U'a' : U'b');
        case 2: {
            std::vector<NodePtr> kids;
            for (int i = 0, n = 1 + rng() % 2; i < n; ++i)
                kids.push_back(random_quant_regex(rng, depth - 1, groups_left, next_group));
            return make_concat(std::move(kids));
        }
        case 3:
            return make_alternation(random_quant_regex(rng, depth - 1, groups_left, next_group),
                                    random_quant_regex(rng, depth - 1, groups_left, next_group));
        case 4:
            return make_optional(random_quant_regex(rng, depth - 1, groups_left, next_group),
                                 rng() % 2 == 0);
        case 5:
            return make_plus(random_quant_regex(rng, depth - 1, groups_left, next_group),
                             rng() % 2 == 0);
        case 6: {
            std::uint32_t lo = rng() % 3;
            std::uint32_t hi = lo + rng() % 3;
            if (rng() % 4 == 0) hi = kRepInfinity;
            return make_repetition(random_quant_regex(rng, depth - 1, groups_left, next_group),
                                   lo, hi, rng() % 2 == 0);
        }
        case 7:
            return make_star(random_quant_regex(rng, depth - 1, groups_left, next_group),
                             rng() % 2 == 0);
        default: {
            if (groups_left <= 0)
                return random_quant_regex(rng, depth - 1, groups_left, next_group);
            --groups_left;
            std::uint32_t idx = next_group++;
            return make_group(idx, random_quant_regex(rng, depth - 1, groups_left, next_group));
        }
    }
}

}  // namespace

// Table-1 rewriting preserves the language but not matching precedence, so a
// plain first-match comparison on the rewritten form is the wrong oracle (the
// alternation expansion hoists iteration counts above per-iteration choices).
// The property the constraint models rely on: the rewritten form, through the
// correspondence, can reproduce exactly the original's verdict, match index
// and precedence-true capture tuple.
bool tuple_recoverable(const RegexAst& original, const RewriteResult& rw, const Text& w) {
    FlagSet none;
    RegexValue orig{original, none, 0};
    MatchResult mo = exec(orig, w);
    RegexValue rewr{rw.ast, none, 0};
    MatchResult mr = exec(rewr, w);
    if (mo.matched != mr.matched) return false;
    if (!mo.matched) return true;
    if (mo.index != mr.index) return false;
    for (const MatchResult& cand : match_all_at(rw.ast, w, mo.index, none)) {
        if (*cand.captures[0] != *mo.captures[0]) continue;
        bool all = true;
        for (std::uint32_t g = 1; g <= original.group_count && all; ++g) {
            std::optional<Text> rec = recover_capture(rw.corr.entries[g - 1], cand);
            all = rec.has_value() == mo.captures[g].has_value() &&
                  (!rec || *rec == *mo.captures[g]);
        }
        if (all) return true;
    }
    return false;
}

TEST_CASE("rewriting preserves verdicts and recovers the precedence-true captures") {
    std::mt19937 rng(321);
    auto words = words_up_to("ab", 5);
    int tried = 0;
    while (tried < 120) {
        int groups_left = 2;
        std::uint32_t next_group = 1;
        NodePtr raw = random_quant_regex(rng, 3, groups_left, next_group);
        // Normalize via print/parse so group numbering is positional.
        RegexAst ast = parse(print_pattern(raw));
        RewriteResult rw;
        try {
            rw = rewrite_quantifiers(ast);
        } catch (const RewriteBlowup&) {
            continue;
        }
        ++tried;
        for (const Text& w : words) {
            CAPTURE(print_pattern(ast));
            CAPTURE(print_pattern(rw.ast));
            CAPTURE(to_utf8(w));
            CHECK(tuple_recoverable(ast, rw, w));
        }
    }
}
