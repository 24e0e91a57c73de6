#include "regsolve/rewrite.hpp"

#include <algorithm>
#include <unordered_map>

namespace regsolve {

namespace {

// Backreferences that cannot be resolved inside their own copy carry the
// original index offset by this marker until the final renumbering pass.
constexpr std::uint32_t kOrigBase = 0x40000000;

using CopyMap = std::map<std::uint32_t, CorrExprPtr>;

CorrExprPtr corr_group(std::uint32_t temp) {
    auto e = std::make_shared<CorrExpr>();
    e->kind = CorrExpr::Kind::Group;
    e->group = temp;
    return e;
}

CorrExprPtr corr_undefined() {
    auto e = std::make_shared<CorrExpr>();
    e->kind = CorrExpr::Kind::Undefined;
    return e;
}

CorrExprPtr corr_select(int site, std::vector<CorrExprPtr> options) {
    auto e = std::make_shared<CorrExpr>();
    e->kind = CorrExpr::Kind::Select;
    e->site = site;
    e->options = std::move(options);
    return e;
}

// Original group indices contained in a subtree of the *input* AST.
void original_groups(const NodePtr& n, std::vector<std::uint32_t>& out) {
    collect_group_indices(n, out);
}

bool has_internal_backref(const NodePtr& body) {
    std::vector<std::uint32_t> groups;
    original_groups(body, groups);
    if (groups.empty()) return false;
    std::uint32_t lo = *std::min_element(groups.begin(), groups.end());
    std::uint32_t hi = *std::max_element(groups.begin(), groups.end());
    bool found = false;
    auto walk = [&](auto&& self, const NodePtr& n) -> void {
        if (!n || found) return;
        if (n->kind == Node::Kind::Backreference && n->index >= lo && n->index <= hi)
            found = true;
        for (const auto& c : n->children) self(self, c);
        self(self, n->left);
        self(self, n->right);
        self(self, n->child);
    };
    walk(walk, body);
    return found;
}

class Rewriter {
public:
    explicit Rewriter(size_t budget) : budget_(budget) {}

    NodePtr run(const NodePtr& root, CopyMap& top_map) { return rewrite_copy(root, top_map); }

    std::uint32_t next_temp_ = 1;
    int next_site_ = 0;

private:
    size_t budget_;
    size_t emitted_ = 0;

    void charge(size_t n = 1) {
        emitted_ += n;
        if (emitted_ > budget_)
            throw RewriteBlowup("rewritten pattern exceeds the node budget of " +
                                std::to_string(budget_));
    }

    // Rewrites one copy of a subtree: every capture group gets a fresh
    // temporary index recorded in `map`; backreferences are resolved against
    // the finished map afterwards, falling back to original-index markers.
    NodePtr rewrite_copy(const NodePtr& n, CopyMap& map) {
        NodePtr out = rw(n, map);
        return fixup_backrefs(out, map);
    }

    NodePtr rw(const NodePtr& n, CopyMap& map) {
        charge();
        switch (n->kind) {
            case Node::Kind::Literal:
            case Node::Kind::CharClass:
            case Node::Kind::WordBoundary:
            case Node::Kind::NonWordBoundary:
            case Node::Kind::AnchorStart:
            case Node::Kind::AnchorEnd:
                return n;
            case Node::Kind::Backreference:
                return make_backreference(kOrigBase + n->index);
            case Node::Kind::Concat: {
                std::vector<NodePtr> kids;
                kids.reserve(n->children.size());
                for (const auto& c : n->children) kids.push_back(rw(c, map));
                return make_concat(std::move(kids));
            }
            case Node::Kind::Alternation: {
                NodePtr l = rw(n->left, map);  // evaluation order fixes numbering
                NodePtr r = rw(n->right, map);
                return make_alternation(std::move(l), std::move(r));
            }
            case Node::Kind::Group: {
                std::uint32_t temp = next_temp_++;
                map[n->index] = corr_group(temp);
                return make_group(temp, rw(n->child, map));
            }
            case Node::Kind::NonCapturingGroup:
                return make_noncapturing(rw(n->child, map), n->site_id);
            case Node::Kind::PositiveLookahead:
            case Node::Kind::NegativeLookahead:
                return make_lookahead(n->kind == Node::Kind::PositiveLookahead,
                                      rw(n->child, map));
            case Node::Kind::Star: {
                CopyMap body_map;
                NodePtr body = rewrite_copy(n->child, body_map);
                for (auto& [k, v] : body_map) map[k] = v;
                return make_star(std::move(body), n->lazy);
            }
            case Node::Kind::Plus: {
                if (has_internal_backref(n->child)) {
                    CopyMap body_map;
                    NodePtr body = rewrite_copy(n->child, body_map);
                    for (auto& [k, v] : body_map) map[k] = v;
                    return make_plus(std::move(body), n->lazy);
                }
                // r+ -> r* r; the trailing copy is always the final iteration.
                CopyMap star_map, tail_map;
                NodePtr star_body = rewrite_copy(n->child, star_map);
                NodePtr tail = rewrite_copy(n->child, tail_map);
                for (auto& [k, v] : tail_map) map[k] = v;
                return make_concat({make_star(std::move(star_body), n->lazy), std::move(tail)});
            }
            case Node::Kind::Optional: {
                // r? -> r|eps, r?? -> eps|r
                CopyMap body_map;
                NodePtr body = rewrite_copy(n->child, body_map);
                for (auto& [k, v] : body_map) map[k] = v;
                if (n->lazy) return make_alternation(make_empty(), std::move(body));
                return make_alternation(std::move(body), make_empty());
            }
            case Node::Kind::Repetition:
                return rw_repetition(n, map);
        }
        return n;
    }

    NodePtr rw_repetition(const NodePtr& n, CopyMap& map) {
        if (has_internal_backref(n->child)) {
            CopyMap body_map;
            NodePtr body = rewrite_copy(n->child, body_map);
            for (auto& [k, v] : body_map) map[k] = v;
            return make_repetition(std::move(body), n->min, n->max, n->lazy);
        }
        std::vector<std::uint32_t> body_groups;
        original_groups(n->child, body_groups);

        if (n->max == kRepInfinity) {
            // r{m,} = r^(m-1) . r* . r  — the tail is always the last iteration.
            std::vector<NodePtr> seq;
            for (std::uint32_t i = 1; i < n->min; ++i) {
                CopyMap lead_map;
                seq.push_back(rewrite_copy(n->child, lead_map));
            }
            CopyMap star_map;
            seq.push_back(make_star(rewrite_copy(n->child, star_map), n->lazy));
            if (n->min >= 1) {
                CopyMap tail_map;
                seq.push_back(rewrite_copy(n->child, tail_map));
                for (auto& [k, v] : tail_map) map[k] = v;
            } else {
                for (auto& [k, v] : star_map) map[k] = v;
            }
            return make_concat(std::move(seq));
        }

        // r{m,n} -> r^n | ... | r^m (greedy) or r^m | ... | r^n (lazy).
        std::vector<std::uint32_t> counts;
        if (n->lazy) {
            for (std::uint32_t j = n->min; j <= n->max; ++j) counts.push_back(j);
        } else {
            for (std::uint32_t j = n->max; j + 1 > n->min; --j) {
                counts.push_back(j);
                if (j == 0) break;
            }
        }

        std::vector<NodePtr> alternates;
        std::vector<CopyMap> last_copy_maps;
        for (std::uint32_t count : counts) {
            std::vector<NodePtr> seq;
            CopyMap last;
            for (std::uint32_t c = 0; c < count; ++c) {
                CopyMap copy_map;
                seq.push_back(rewrite_copy(n->child, copy_map));
                if (c + 1 == count) last = std::move(copy_map);
            }
            alternates.push_back(make_concat(std::move(seq)));
            last_copy_maps.push_back(std::move(last));
        }

        if (alternates.size() == 1) {
            for (auto& [k, v] : last_copy_maps[0]) map[k] = v;
            if (!body_groups.empty() && counts[0] == 0)
                for (std::uint32_t g : body_groups) map[g] = corr_undefined();
            return alternates[0];
        }

        int site = next_site_++;
        for (std::uint32_t g : body_groups) {
            std::vector<CorrExprPtr> options;
            for (size_t a = 0; a < alternates.size(); ++a) {
                auto it = last_copy_maps[a].find(g);
                options.push_back(it == last_copy_maps[a].end() ? corr_undefined()
                                                                : it->second);
            }
            map[g] = corr_select(site, std::move(options));
        }

        NodePtr spine = alternates.back();
        for (size_t i = alternates.size() - 1; i-- > 0;)
            spine = make_alternation(alternates[i], std::move(spine));
        return make_noncapturing(std::move(spine), site);
    }

    // Resolves marker backreferences that point at groups of this copy.
    NodePtr fixup_backrefs(const NodePtr& n, const CopyMap& map) {
        if (!n) return n;
        if (n->kind == Node::Kind::Backreference && n->index >= kOrigBase) {
            std::uint32_t orig = n->index - kOrigBase;
            auto it = map.find(orig);
            if (it == map.end()) return n;  // outer scope resolves it
            const CorrExpr& e = *it->second;
            if (e.kind == CorrExpr::Kind::Group) return make_backreference(e.group);
            if (e.kind == CorrExpr::Kind::Undefined) return n;  // stays empty
            throw UnsupportedError(
                "backreference \\" + std::to_string(orig) +
                " refers to a capture group duplicated by bounded repetition");
        }
        switch (n->kind) {
            case Node::Kind::Concat: {
                std::vector<NodePtr> kids;
                bool changed = false;
                for (const auto& c : n->children) {
                    NodePtr nc = fixup_backrefs(c, map);
                    changed |= nc != c;
                    kids.push_back(std::move(nc));
                }
                return changed ? make_concat(std::move(kids)) : n;
            }
            case Node::Kind::Alternation: {
                NodePtr l = fixup_backrefs(n->left, map);
                NodePtr r = fixup_backrefs(n->right, map);
                return (l != n->left || r != n->right) ? make_alternation(l, r) : n;
            }
            case Node::Kind::Star:
            case Node::Kind::Plus:
            case Node::Kind::Optional:
            case Node::Kind::Repetition:
            case Node::Kind::Group:
            case Node::Kind::NonCapturingGroup:
            case Node::Kind::PositiveLookahead:
            case Node::Kind::NegativeLookahead: {
                NodePtr c = fixup_backrefs(n->child, map);
                if (c == n->child) return n;
                auto copy = std::make_shared<Node>(*n);
                copy->child = c;
                return copy;
            }
            default:
                return n;
        }
    }
};

// Final pass: assign dense 1..N indices in pre-order and remap.
class Renumberer {
public:
    NodePtr assign(const NodePtr& n) {
        if (!n) return n;
        switch (n->kind) {
            case Node::Kind::Group: {
                std::uint32_t final_idx = next_++;
                temp_to_final_[n->index] = final_idx;
                return make_group(final_idx, assign(n->child));
            }
            case Node::Kind::Concat: {
                std::vector<NodePtr> kids;
                for (const auto& c : n->children) kids.push_back(assign(c));
                return make_concat(std::move(kids));
            }
            case Node::Kind::Alternation: {
                NodePtr l = assign(n->left);
                NodePtr r = assign(n->right);
                return make_alternation(std::move(l), std::move(r));
            }
            case Node::Kind::Backreference:
                return n;  // patched in a second pass
            default: {
                if (!n->child) return n;
                auto copy = std::make_shared<Node>(*n);
                copy->child = assign(n->child);
                return copy;
            }
        }
    }

    NodePtr patch_backrefs(const NodePtr& n, const CaptureCorrespondence& corr,
                           std::uint32_t final_count) {
        if (!n) return n;
        if (n->kind == Node::Kind::Backreference) {
            std::uint32_t idx = n->index;
            if (idx >= kOrigBase) {
                std::uint32_t orig = idx - kOrigBase;
                if (orig <= corr.original_count) {
                    const CorrExpr& e = *corr.entries[orig - 1];
                    if (e.kind == CorrExpr::Kind::Group) {
                        idx = e.group;  // already final, see below
                    } else if (e.kind == CorrExpr::Kind::Undefined) {
                        idx = final_count + orig;
                    } else {
                        throw UnsupportedError(
                            "backreference \\" + std::to_string(orig) +
                            " refers to a capture group duplicated by bounded repetition");
                    }
                } else {
                    idx = final_count + orig;  // beyond group count: always empty
                }
            } else {
                idx = temp_to_final_.at(idx);
            }
            return make_backreference(idx);
        }
        switch (n->kind) {
            case Node::Kind::Concat: {
                std::vector<NodePtr> kids;
                for (const auto& c : n->children)
                    kids.push_back(patch_backrefs(c, corr, final_count));
                return make_concat(std::move(kids));
            }
            case Node::Kind::Alternation: {
                NodePtr l = patch_backrefs(n->left, corr, final_count);
                NodePtr r = patch_backrefs(n->right, corr, final_count);
                return make_alternation(std::move(l), std::move(r));
            }
            default: {
                if (!n->child) return n;
                auto copy = std::make_shared<Node>(*n);
                copy->child = patch_backrefs(n->child, corr, final_count);
                return copy;
            }
        }
    }

    CorrExprPtr remap(const CorrExprPtr& e) {
        switch (e->kind) {
            case CorrExpr::Kind::Group:
                return corr_group(temp_to_final_.at(e->group));
            case CorrExpr::Kind::Select: {
                std::vector<CorrExprPtr> options;
                for (const auto& o : e->options) options.push_back(remap(o));
                return corr_select(e->site, std::move(options));
            }
            case CorrExpr::Kind::Undefined:
                return e;
        }
        return e;
    }

    std::uint32_t count() const { return next_ - 1; }

private:
    std::uint32_t next_ = 1;
    std::unordered_map<std::uint32_t, std::uint32_t> temp_to_final_;
};

void collect_sites(const NodePtr& n, std::vector<RepetitionSite>& out) {
    if (!n) return;
    if (n->kind == Node::Kind::NonCapturingGroup && n->site_id >= 0 &&
        n->child->kind == Node::Kind::Alternation) {
        RepetitionSite site;
        site.site_id = n->site_id;
        const Node* cur = n->child.get();
        while (cur->kind == Node::Kind::Alternation) {
            site.alternates.push_back(cur->left);
            cur = cur->right.get();
        }
        site.alternates.push_back(NodePtr(n->child, cur));
        out.push_back(std::move(site));
    }
    for (const auto& c : n->children) collect_sites(c, out);
    collect_sites(n->left, out);
    collect_sites(n->right, out);
    collect_sites(n->child, out);
}

}  // namespace

RewriteResult rewrite_quantifiers(const RegexAst& ast, size_t node_budget) {
    Rewriter rewriter(node_budget);
    CopyMap top;
    NodePtr rewritten = rewriter.run(ast.root, top);

    CaptureCorrespondence corr;
    corr.original_count = ast.group_count;

    Renumberer ren;
    NodePtr numbered = ren.assign(rewritten);
    for (std::uint32_t i = 1; i <= ast.group_count; ++i) {
        auto it = top.find(i);
        corr.entries.push_back(it == top.end() ? corr_undefined() : ren.remap(it->second));
    }
    NodePtr final_root = ren.patch_backrefs(numbered, corr, ren.count());

    RewriteResult out;
    out.ast.root = final_root;
    out.ast.group_count = ren.count();
    out.corr = std::move(corr);
    collect_sites(final_root, out.corr.sites);
    return out;
}

std::optional<Text> recover_capture(const CorrExprPtr& expr, const MatchResult& rewritten) {
    switch (expr->kind) {
        case CorrExpr::Kind::Group:
            if (expr->group < rewritten.captures.size()) return rewritten.captures[expr->group];
            return std::nullopt;
        case CorrExpr::Kind::Select: {
            auto it = rewritten.taken_alternates.find(expr->site);
            if (it == rewritten.taken_alternates.end()) return std::nullopt;
            return recover_capture(expr->options.at(it->second), rewritten);
        }
        case CorrExpr::Kind::Undefined:
            return std::nullopt;
    }
    return std::nullopt;
}

namespace {

struct ClassifyCtx {
    std::unordered_map<std::uint32_t, int> group_postorder;
    std::unordered_map<std::uint32_t, std::vector<const Node*>> group_quantifiers;
};

// Post-order walk recording each group's position and quantifier ancestry.
void index_groups(const NodePtr& n, std::vector<const Node*>& quantifiers, int& counter,
                  ClassifyCtx& ctx) {
    if (!n) return;
    bool quantifier = n->kind == Node::Kind::Star || n->kind == Node::Kind::Plus ||
                      n->kind == Node::Kind::Repetition || n->kind == Node::Kind::Optional;
    if (quantifier) quantifiers.push_back(n.get());
    for (const auto& c : n->children) index_groups(c, quantifiers, counter, ctx);
    index_groups(n->left, quantifiers, counter, ctx);
    index_groups(n->right, quantifiers, counter, ctx);
    index_groups(n->child, quantifiers, counter, ctx);
    if (quantifier) quantifiers.pop_back();

    int order = counter++;
    if (n->kind == Node::Kind::Group) {
        ctx.group_postorder[n->index] = order;
        ctx.group_quantifiers[n->index] = quantifiers;
    }
}

}  // namespace

std::vector<BackrefClass> classify_backreferences(const RegexAst& ast) {
    // Two traversals: one to index groups, one to classify occurrences with
    // their post-order positions and quantifier stacks available.
    ClassifyCtx ctx;
    {
        std::vector<const Node*> quantifiers;
        int counter = 0;
        index_groups(ast.root, quantifiers, counter, ctx);
    }
    // Re-walk to get per-occurrence post-order and quantifier sets.
    std::vector<BackrefClass> result;
    std::vector<int> path;
    std::vector<const Node*> quantifiers;
    int counter = 0;
    auto walk = [&](auto&& self, const NodePtr& n) -> void {
        if (!n) return;
        bool quantifier = n->kind == Node::Kind::Star || n->kind == Node::Kind::Plus ||
                          n->kind == Node::Kind::Repetition || n->kind == Node::Kind::Optional;
        if (quantifier) quantifiers.push_back(n.get());
        int slot = 0;
        auto descend = [&](const NodePtr& c) {
            path.push_back(slot++);
            self(self, c);
            path.pop_back();
        };
        for (const auto& c : n->children) descend(c);
        descend(n->left);
        descend(n->right);
        descend(n->child);
        if (quantifier) quantifiers.pop_back();
        int order = counter++;

        if (n->kind != Node::Kind::Backreference) return;
        BackrefClass b;
        b.path = path;
        b.node = n.get();
        b.index = n->index;
        if (n->index > ast.group_count || n->index == 0) {
            b.kind = BackrefKind::Empty;
        } else if (order < ctx.group_postorder.at(n->index)) {
            b.kind = BackrefKind::Empty;
        } else {
            const auto& group_quants = ctx.group_quantifiers.at(n->index);
            bool common = false;
            for (const Node* q : quantifiers)
                if (std::find(group_quants.begin(), group_quants.end(), q) !=
                    group_quants.end()) {
                    common = true;
                    break;
                }
            if (common) {
                b.kind = BackrefKind::Mutable;
            } else if (!quantifiers.empty()) {
                b.kind = BackrefKind::ImmutableQuantified;
            } else {
                b.kind = BackrefKind::Immutable;
            }
        }
        result.push_back(std::move(b));
    };
    walk(walk, ast.root);
    return result;
}

WrapResult wrap_for_exec(const RegexAst& ast, const FlagSet& flags, size_t last_index) {
    auto pad = [] {
        return make_star(make_noncapturing(make_alternation(make_dot(), make_literal(U'\n'))),
                         /*lazy=*/true);
    };
    WrapResult out;
    out.ast.root = make_concat({pad(), make_group(0, ast.root), pad()});
    out.ast.group_count = ast.group_count;
    if (flags.sticky || flags.global) out.offset = last_index > 0 ? last_index + 1 : 0;
    return out;
}

namespace {

void case_close_items(std::vector<ClassItem>& items) {
    size_t original = items.size();
    for (size_t i = 0; i < original; ++i) {
        const ClassItem item = items[i];
        if (item.kind == ClassItem::Kind::Char) {
            char32_t sw = ascii_swap_case(item.lo);
            if (sw != item.lo) items.push_back(ClassItem::ch(sw));
        } else if (item.kind == ClassItem::Kind::Range) {
            // Swap the alphabetic slices of the range.
            auto add_swapped = [&](char32_t lo, char32_t hi) {
                char32_t a = std::max(item.lo, lo), b = std::min(item.hi, hi);
                if (a <= b) items.push_back(ClassItem::range(ascii_swap_case(a),
                                                             ascii_swap_case(b)));
            };
            add_swapped(U'a', U'z');
            add_swapped(U'A', U'Z');
        }
    }
}

NodePtr case_close(const NodePtr& n) {
    if (!n) return n;
    switch (n->kind) {
        case Node::Kind::Literal: {
            char32_t sw = ascii_swap_case(n->literal);
            if (sw == n->literal) return n;
            return make_char_class(false, {ClassItem::ch(n->literal), ClassItem::ch(sw)});
        }
        case Node::Kind::CharClass: {
            if (n->is_dot) return n;
            std::vector<ClassItem> items = n->items;
            case_close_items(items);
            if (items == n->items) return n;
            return make_char_class(n->negated, std::move(items));
        }
        case Node::Kind::Concat: {
            std::vector<NodePtr> kids;
            for (const auto& c : n->children) kids.push_back(case_close(c));
            return make_concat(std::move(kids));
        }
        case Node::Kind::Alternation:
            return make_alternation(case_close(n->left), case_close(n->right));
        default: {
            if (!n->child) return n;
            auto copy = std::make_shared<Node>(*n);
            copy->child = case_close(n->child);
            return copy;
        }
    }
}

}  // namespace

RegexAst rewrite_ignore_case(const RegexAst& ast) {
    return RegexAst{case_close(ast.root), ast.group_count};
}

}  // namespace regsolve
