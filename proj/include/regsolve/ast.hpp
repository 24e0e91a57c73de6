#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regsolve/text.hpp"

namespace regsolve {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// One entry of a bracketed character class.
struct ClassItem {
    enum class Kind { Char, Range, Digit, NotDigit, Word, NotWord, Space, NotSpace };
    Kind kind = Kind::Char;
    char32_t lo = 0;  // Char: the code point; Range: lower bound
    char32_t hi = 0;  // Range: upper bound (inclusive)

    static ClassItem ch(char32_t c) { return {Kind::Char, c, c}; }
    static ClassItem range(char32_t a, char32_t b) { return {Kind::Range, a, b}; }
    static ClassItem shorthand(Kind k) { return {k, 0, 0}; }
    bool operator==(const ClassItem&) const = default;
};

inline constexpr std::uint32_t kRepInfinity = std::numeric_limits<std::uint32_t>::max();

struct Node {
    enum class Kind {
        Literal,
        CharClass,
        Concat,
        Alternation,
        Star,
        Plus,
        Optional,
        Repetition,
        Group,
        NonCapturingGroup,
        PositiveLookahead,
        NegativeLookahead,
        Backreference,
        WordBoundary,
        NonWordBoundary,
        AnchorStart,
        AnchorEnd,
    };

    Kind kind;
    char32_t literal = 0;                 // Literal
    bool negated = false;                 // CharClass
    bool is_dot = false;                  // CharClass printed as `.`
    std::vector<ClassItem> items;         // CharClass
    std::vector<NodePtr> children;        // Concat
    NodePtr left, right;                  // Alternation
    NodePtr child;                        // quantifiers, groups, lookaheads
    bool lazy = false;                    // quantifiers
    std::uint32_t min = 0;                // Repetition
    std::uint32_t max = 0;                // Repetition (kRepInfinity for open end)
    std::uint32_t index = 0;              // Group / Backreference
    int site_id = -1;                     // rewriting annotation, see rewrite.hpp

    explicit Node(Kind k) : kind(k) {}
};

NodePtr make_literal(char32_t c);
NodePtr make_char_class(bool negated, std::vector<ClassItem> items);
NodePtr make_dot();
NodePtr make_concat(std::vector<NodePtr> children);  // flattens nested concats
NodePtr make_alternation(NodePtr left, NodePtr right);
NodePtr make_star(NodePtr child, bool lazy);
NodePtr make_plus(NodePtr child, bool lazy);
NodePtr make_optional(NodePtr child, bool lazy);
NodePtr make_repetition(NodePtr child, std::uint32_t min, std::uint32_t max, bool lazy);
NodePtr make_group(std::uint32_t index, NodePtr child);
NodePtr make_noncapturing(NodePtr child, int site_id = -1);
NodePtr make_lookahead(bool positive, NodePtr child);
NodePtr make_backreference(std::uint32_t index);
NodePtr make_assertion(Node::Kind kind);  // boundaries and anchors
NodePtr make_empty();                     // Concat([]) — matches only the empty string

bool node_equal(const NodePtr& a, const NodePtr& b);
size_t node_count(const NodePtr& n);

// Capture group indices found in the subtree, in pre-order. Group numbering is
// by position of the opening parenthesis, so a subtree's groups are contiguous.
void collect_group_indices(const NodePtr& n, std::vector<std::uint32_t>& out);
bool contains_kind(const NodePtr& n, Node::Kind kind);

struct RegexAst {
    NodePtr root;
    std::uint32_t group_count = 0;  // capture groups, excluding the implicit group 0
};

struct FlagSet {
    bool ignore_case = false;  // i
    bool multiline = false;    // m
    bool global = false;       // g
    bool sticky = false;       // y
    bool unicode = false;      // u

    bool operator==(const FlagSet&) const = default;
    std::string to_string() const;
};

}  // namespace regsolve
