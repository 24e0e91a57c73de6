#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "regsolve/ast.hpp"
#include "regsolve/errors.hpp"

namespace regsolve {

struct CRegex;
using CRegexPtr = std::shared_ptr<const CRegex>;

// Capture-free classical regular expression. Denotes a regular language and
// maps directly onto the solver's regular-expression term algebra. The meta
// markers are ordinary literals here.
struct CRegex {
    enum class Kind {
        Lit,      // a literal string (possibly empty = epsilon)
        AnyChar,  // any code point
        Dot,      // any code point except line terminators
        Class,    // character class
        Concat,
        Alt,
        Star,
        Loop,  // {min,max}, max = kRepInfinity for open end
    };
    Kind kind;
    Text lit;
    bool negated = false;
    std::vector<ClassItem> items;
    std::vector<CRegexPtr> children;  // Concat / Alt
    CRegexPtr child;                  // Star / Loop
    std::uint32_t min = 0, max = 0;   // Loop

    explicit CRegex(Kind k) : kind(k) {}
};

CRegexPtr cre_lit(Text s);
CRegexPtr cre_epsilon();
CRegexPtr cre_any();   // full wildcard
CRegexPtr cre_dot();   // ES6 `.`
CRegexPtr cre_class(bool negated, std::vector<ClassItem> items);
CRegexPtr cre_none();  // empty language
CRegexPtr cre_concat(std::vector<CRegexPtr> children);
CRegexPtr cre_alt(std::vector<CRegexPtr> children);
CRegexPtr cre_star(CRegexPtr child);
CRegexPtr cre_loop(CRegexPtr child, std::uint32_t min, std::uint32_t max);

// True when the subtree contains no backreferences, lookaheads, boundaries or
// anchors, i.e. capture erasure yields an equivalent regular language.
bool is_erasable(const NodePtr& n);

// Rewrites capturing parentheses away. Throws NotRegularError when a
// non-regular construct remains.
CRegexPtr erase_captures(const NodePtr& n);

// Conversion for evaluation: membership in L(cre) is decided by running the
// backtracking matcher on the converted AST in whole-word mode.
NodePtr cregex_to_node(const CRegexPtr& cre);
bool cregex_member(const CRegexPtr& cre, const Text& word);

std::string cregex_to_string(const CRegexPtr& cre);  // debugging aid

}  // namespace regsolve
