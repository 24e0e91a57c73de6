#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regsolve/ast.hpp"
#include "regsolve/cregex.hpp"
#include "regsolve/errors.hpp"
#include "regsolve/matcher.hpp"

namespace regsolve {

// How an original capture index is recovered from the rewritten form.
struct CorrExpr;
using CorrExprPtr = std::shared_ptr<const CorrExpr>;
struct CorrExpr {
    enum class Kind {
        Group,      // the value of one rewritten capture group
        Select,     // last copy of the alternate taken at a repetition site
        Undefined,  // the zero-copy alternate: the capture cannot participate
    };
    Kind kind = Kind::Undefined;
    std::uint32_t group = 0;             // Kind::Group
    int site = -1;                       // Kind::Select
    std::vector<CorrExprPtr> options;    // Kind::Select, in emitted alternate order
};

// A bounded-repetition site: the alternation spine that replaced r{m,n},
// wrapped in a site-annotated non-capturing group.
struct RepetitionSite {
    int site_id = -1;
    std::vector<NodePtr> alternates;  // emitted order (matching CorrExpr options)
};

struct CaptureCorrespondence {
    std::uint32_t original_count = 0;
    std::vector<CorrExprPtr> entries;  // entries[i] describes original group i+1
    std::vector<RepetitionSite> sites;
};

struct RewriteResult {
    RegexAst ast;
    CaptureCorrespondence corr;
};

inline constexpr size_t kDefaultRewriteNodeBudget = 10000;

// Rewrites to the reduced operator set: alternation, concatenation, star,
// groups, lookarounds, boundaries, anchors, backreferences and leaves.
// Kleene plus and bounded repetition are expanded with duplicated capture
// groups; optionals become alternations with epsilon. Quantified terms whose
// body contains a backreference into that same body survive as Plus/Star/
// Repetition nodes so they can be modeled as one unit. Lazy stars keep their
// flag (the constraint models ignore it; the matcher needs it to reproduce
// matching precedence on the rewritten form).
RewriteResult rewrite_quantifiers(const RegexAst& ast,
                                  size_t node_budget = kDefaultRewriteNodeBudget);

// Concrete-side recovery: the value of an original capture from a match of
// the rewritten regex.
std::optional<Text> recover_capture(const CorrExprPtr& expr, const MatchResult& rewritten);

enum class BackrefKind { Empty, Immutable, ImmutableQuantified, Mutable };

struct BackrefClass {
    std::vector<int> path;  // child offsets from the root
    const Node* node = nullptr;
    std::uint32_t index = 0;
    BackrefKind kind = BackrefKind::Empty;
};

// Classifies every backreference occurrence of a rewritten AST.
std::vector<BackrefClass> classify_backreferences(const RegexAst& ast);

struct WrapResult {
    RegexAst ast;      // (?:.|\n)*? ( original ) (?:.|\n)*?  with group index 0
    size_t offset = 0; // input slice position implied by sticky/global lastIndex
};

// Wildcard padding and the fresh outer capture group; the caller injects the
// meta markers into the subject.
WrapResult wrap_for_exec(const RegexAst& ast, const FlagSet& flags, size_t last_index);

// Closes every literal and class item under ASCII case swapping.
RegexAst rewrite_ignore_case(const RegexAst& ast);

}  // namespace regsolve
