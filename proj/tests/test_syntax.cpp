#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "regsolve/features.hpp"
#include "regsolve/parser.hpp"
#include "regsolve/printer.hpp"

using namespace regsolve;

TEST_CASE("alternation with nested starred groups is numbered left to right") {
    auto [ast, flags] = parse_pattern("a|((b)*c)*d", "");
    CHECK(ast.group_count == 2);
    REQUIRE(ast.root->kind == Node::Kind::Alternation);
    CHECK(ast.root->left->kind == Node::Kind::Literal);
    CHECK(ast.root->left->literal == U'a');
    const NodePtr& rhs = ast.root->right;  // ((b)*c)*d
    REQUIRE(rhs->kind == Node::Kind::Concat);
    REQUIRE(rhs->children.size() == 2);
    const NodePtr& star = rhs->children[0];
    REQUIRE(star->kind == Node::Kind::Star);
    CHECK_FALSE(star->lazy);
    REQUIRE(star->child->kind == Node::Kind::Group);
    CHECK(star->child->index == 1);
    const NodePtr& inner = star->child->child;
    REQUIRE(inner->kind == Node::Kind::Concat);
    REQUIRE(inner->children[0]->kind == Node::Kind::Star);
    REQUIRE(inner->children[0]->child->kind == Node::Kind::Group);
    CHECK(inner->children[0]->child->index == 2);
    CHECK(inner->children[1]->literal == U'c');
    CHECK(rhs->children[1]->literal == U'd');
}

TEST_CASE("empty pattern parses to an empty concatenation") {
    auto [ast, flags] = parse_pattern("", "");
    CHECK(ast.group_count == 0);
    REQUIRE(ast.root->kind == Node::Kind::Concat);
    CHECK(ast.root->children.empty());
}

TEST_CASE("lookahead maps directly onto the grammar") {
    auto [ast, flags] = parse_pattern("(?=a)b", "");
    REQUIRE(ast.root->kind == Node::Kind::Concat);
    REQUIRE(ast.root->children.size() == 2);
    CHECK(ast.root->children[0]->kind == Node::Kind::PositiveLookahead);
    CHECK(ast.root->children[1]->kind == Node::Kind::Literal);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_pattern("(a", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("a)", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("*a", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("a**", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("{2}", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("a{3,1}", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("[z-a]", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("[\\d-z]", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("(?=a)*", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("\\01", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("(?<name>a)", ""), ParseError);
    CHECK_THROWS_AS(parse_pattern("a", "gg"), ParseError);
    CHECK_THROWS_AS(parse_pattern("a", "q"), ParseError);
    CHECK_THROWS_AS(parse_pattern("\\u{41}", ""), ParseError);  // u flag absent
    try {
        parse_pattern("ab(cd", "");
    } catch (const ParseError& e) {
        CHECK(e.position() >= 2);
    }
}

TEST_CASE("annex-style literal braces parse when no quantifier forms") {
    auto [ast, flags] = parse_pattern("a{", "");
    REQUIRE(ast.root->kind == Node::Kind::Concat);
    CHECK(ast.root->children[1]->literal == U'{');
    auto [ast2, f2] = parse_pattern("a{x}", "");
    CHECK(ast2.root->children.size() == 4);
}

TEST_CASE("flags parse into the flag set") {
    auto [ast, flags] = parse_pattern("x", "giy");
    CHECK(flags.global);
    CHECK(flags.ignore_case);
    CHECK(flags.sticky);
    CHECK_FALSE(flags.multiline);
    CHECK_FALSE(flags.unicode);
    CHECK(parse_flags("u").unicode);
}

TEST_CASE("print round-trips the spec examples") {
    for (const char* src : {"(?:a|(b))\\1", "a{2,3}?", "[a-z\\d]", "a|((b)*c)*d", "(?=a)b",
                            "(?!x)[^a-c]", "a+?b*?c??", "\\bfoo\\b", "^a{2,}$", "[\\]\\-x]",
                            "\\x1F\\u2028", "(a)(b|(c))", "a|", "[^]", "[]"}) {
        auto [ast, flags] = parse_pattern(src, "");
        std::string printed = print_pattern(ast);
        CAPTURE(src);
        CAPTURE(printed);
        auto [again, f2] = parse_pattern(printed, "");
        CHECK(node_equal(ast.root, again.root));
        CHECK(ast.group_count == again.group_count);
        if (std::string(src) == "(?:a|(b))\\1" || std::string(src) == "a{2,3}?" ||
            std::string(src) == "[a-z\\d]") {
            CHECK(printed == src);
        }
    }
}

namespace {

NodePtr random_node(std::mt19937& rng, int depth, std::uint32_t& next_group) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    switch (pick(rng)) {
        case 0: return make_literal(U'a' + rng() % 3);
        case 1: return make_literal(U'0' + rng() % 3);
        case 2: {
            std::vector<ClassItem> items{ClassItem::range(U'a', U'f'), ClassItem::ch(U'-')};
            if (rng() % 2) items.push_back(ClassItem::shorthand(ClassItem::Kind::Digit));
            return make_char_class(rng() % 2 == 0, items);
        }
        case 3: return make_star(random_node(rng, depth - 1, next_group), rng() % 2 == 0);
        case 4: return make_plus(random_node(rng, depth - 1, next_group), rng() % 2 == 0);
        case 5: return make_optional(random_node(rng, depth - 1, next_group), rng() % 2 == 0);
        case 6: {
            std::uint32_t lo = rng() % 3;
            return make_repetition(random_node(rng, depth - 1, next_group), lo, lo + rng() % 3,
                                   rng() % 2 == 0);
        }
        case 7: {
            auto l = random_node(rng, depth - 1, next_group);
            auto r = random_node(rng, depth - 1, next_group);
            return make_alternation(std::move(l), std::move(r));
        }
        case 8: {
            std::uint32_t idx = next_group++;
            return make_group(idx, random_node(rng, depth - 1, next_group));
        }
        default: {
            std::vector<NodePtr> kids;
            for (int i = 0, n = 1 + rng() % 3; i < n; ++i)
                kids.push_back(random_node(rng, depth - 1, next_group));
            return make_concat(std::move(kids));
        }
    }
}

}  // namespace

TEST_CASE("print/parse round-trip holds on random parser-shaped trees") {
    std::mt19937 rng(20240917);
    for (int i = 0; i < 300; ++i) {
        std::uint32_t next_group = 1;
        // Random trees quantify only atoms once printed, since the printer
        // inserts non-capturing wrappers; re-parse then re-print must agree.
        NodePtr root = random_node(rng, 4, next_group);
        std::string printed = print_pattern(root);
        CAPTURE(printed);
        auto [ast, flags] = parse_pattern(printed, "");
        std::string printed2 = print_pattern(ast);
        auto [ast2, f2] = parse_pattern(printed2, "");
        CHECK(node_equal(ast.root, ast2.root));
    }
}

TEST_CASE("group numbering is a gapless pre-order sequence") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        std::uint32_t next_group = 1;
        NodePtr root = random_node(rng, 4, next_group);
        auto [ast, flags] = parse_pattern(print_pattern(root), "");
        std::vector<std::uint32_t> idx;
        collect_group_indices(ast.root, idx);
        CHECK(idx.size() == ast.group_count);
        for (size_t g = 0; g < idx.size(); ++g) CHECK(idx[g] == g + 1);
    }
}

TEST_CASE("feature profile of the xml-tag example") {
    auto [ast, flags] = parse_pattern("<(\\w+)>([0-9]*)<\\/\\1>", "");
    FeatureProfile p = profile_features(ast, flags);
    CHECK(p.capture_groups == 2);
    CHECK(p.backreferences == 1);
    CHECK(p.quantified_backreferences == 0);
    CHECK(p.character_class >= 1);
    CHECK(p.kleene_star >= 1);
}

TEST_CASE("feature profile classifies the quantified backreference") {
    auto [ast, flags] = parse_pattern("((a|b)\\2)+\\1\\2", "");
    FeatureProfile p = profile_features(ast, flags);
    CHECK(p.capture_groups == 2);
    CHECK(p.backreferences == 3);
    CHECK(p.quantified_backreferences == 1);
}

TEST_CASE("feature profile counts flags") {
    auto [ast, flags] = parse_pattern("x", "gy");
    FeatureProfile p = profile_features(ast, flags);
    CHECK(p.global_flag == 1);
    CHECK(p.sticky_flag == 1);
    CHECK(p.capture_groups == 0);
    CHECK(p.kleene_star == 0);
    CHECK(p.character_class == 0);
}

TEST_CASE("feature profile is additive over concatenation and alternation") {
    std::mt19937 rng(99);
    FlagSet none;
    for (int i = 0; i < 100; ++i) {
        std::uint32_t g = 1;
        NodePtr a = random_node(rng, 3, g);
        NodePtr b = random_node(rng, 3, g);
        FeatureProfile pa = profile_features({a, 0}, none);
        FeatureProfile pb = profile_features({b, 0}, none);
        FeatureProfile sum = pa;
        sum += pb;
        CHECK(profile_features({make_concat({a, b}), 0}, none) == sum);
        CHECK(profile_features({make_alternation(a, b), 0}, none) == sum);
    }
}
