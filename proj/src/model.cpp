#include "regsolve/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "regsolve/matcher.hpp"
#include "regsolve/printer.hpp"

namespace regsolve {

namespace {

Text meta_start_text() { return Text(1, kMetaStart); }
Text meta_end_text() { return Text(1, kMetaEnd); }

CRegexPtr sigma_star() { return cre_star(cre_any()); }

// prefix language "ends with c": . * c
CRegexPtr ends_with(CRegexPtr tail) { return cre_concat({sigma_star(), std::move(tail)}); }
CRegexPtr starts_with(CRegexPtr head) { return cre_concat({std::move(head), sigma_star()}); }

CRegexPtr word_char_class() {
    return cre_class(false, {ClassItem::shorthand(ClassItem::Kind::Word)});
}
CRegexPtr non_word_char_class() {
    return cre_class(false, {ClassItem::shorthand(ClassItem::Kind::NotWord)});
}

const NodePtr& peel(const NodePtr& n) {
    const NodePtr* cur = &n;
    while (true) {
        if ((*cur)->kind == Node::Kind::NonCapturingGroup && (*cur)->site_id < 0) {
            cur = &(*cur)->child;
        } else if ((*cur)->kind == Node::Kind::Concat && (*cur)->children.size() == 1) {
            cur = &(*cur)->children[0];
        } else {
            return *cur;
        }
    }
}

// Backreferences inside `n` that refer to groups inside `n`.
void collect_mutable_ancestor_groups(const NodePtr& n, std::uint32_t lo, std::uint32_t hi,
                                     std::vector<const Node*>& group_stack,
                                     std::unordered_set<const Node*>& out) {
    if (!n) return;
    if (n->kind == Node::Kind::Backreference && n->index >= lo && n->index <= hi)
        for (const Node* g : group_stack) out.insert(g);
    bool is_group = n->kind == Node::Kind::Group;
    if (is_group) group_stack.push_back(n.get());
    for (const auto& c : n->children)
        collect_mutable_ancestor_groups(c, lo, hi, group_stack, out);
    collect_mutable_ancestor_groups(n->left, lo, hi, group_stack, out);
    collect_mutable_ancestor_groups(n->right, lo, hi, group_stack, out);
    collect_mutable_ancestor_groups(n->child, lo, hi, group_stack, out);
    if (is_group) group_stack.pop_back();
}

bool group_free(const NodePtr& n) {
    std::vector<std::uint32_t> idx;
    collect_group_indices(n, idx);
    return idx.empty();
}

class ModelBuilder {
public:
    ModelBuilder(ConstraintProblem& problem, const UnrollConfig& cfg, bool multiline,
                 std::string stem)
        : problem_(problem), cfg_(cfg), multiline_(multiline), stem_(std::move(stem)) {}

    MembershipModel build(const RegexAst& ast, Term subject, Polarity polarity,
                          std::map<std::uint32_t, std::string> capture_names,
                          std::vector<Term> left = {}, std::vector<Term> right = {}) {
        cap_names_ = std::move(capture_names);
        classes_.clear();
        for (const BackrefClass& b : classify_backreferences(ast)) classes_[b.node] = b.kind;
        MembershipModel out;
        out.formula = model(ast.root, std::move(subject), left, right,
                            polarity == Polarity::Member);
        out.site_subjects = std::move(site_subjects_);
        out.site_model_count = std::move(site_count_);
        out.site_alternates = std::move(site_alternates_);
        return out;
    }

    const std::string& capture_var(std::uint32_t index) {
        auto it = cap_names_.find(index);
        if (it != cap_names_.end()) return it->second;
        std::string fresh = problem_.fresh_capture(stem_ + ".c" + std::to_string(index));
        return cap_names_.emplace(index, std::move(fresh)).first->second;
    }

private:
    ConstraintProblem& problem_;
    const UnrollConfig& cfg_;
    bool multiline_;
    std::string stem_;
    std::map<std::uint32_t, std::string> cap_names_;
    std::unordered_map<const Node*, BackrefKind> classes_;
    std::map<int, Term> site_subjects_;
    std::map<int, int> site_count_;
    std::map<int, std::vector<NodePtr>> site_alternates_;
    // Groups that bind to the whole quantified word under the bounded mutable
    // rule, with that word's term.
    std::unordered_map<const Node*, Term> quant_bound_groups_;

    Term fresh_word_term(const char* tag) {
        return term_var(problem_.fresh_word(stem_ + "." + tag));
    }

    Ir caps_undefined(const NodePtr& subtree) {
        std::vector<std::uint32_t> idx;
        collect_group_indices(subtree, idx);
        std::vector<Ir> parts;
        for (std::uint32_t g : idx) parts.push_back(ir_cap_undef(capture_var(g)));
        return ir_and(std::move(parts));
    }

    // ---- zero-width assertions over prefix/suffix context ----------------

    // "the text before this position ends at an injected start marker";
    // the empty-prefix case covers unwrapped subjects.
    Ir anchor_start(const Term& prefix) {
        std::vector<Ir> cases{ir_in_re(prefix, ends_with(cre_lit(meta_start_text()))),
                              ir_str_eq(prefix, term_lit({}))};
        if (multiline_) cases.push_back(ir_in_re(prefix, ends_with(cre_lit(from_utf8("\n")))));
        return ir_or(std::move(cases));
    }

    Ir anchor_end(const Term& suffix) {
        std::vector<Ir> cases{ir_in_re(suffix, starts_with(cre_lit(meta_end_text()))),
                              ir_str_eq(suffix, term_lit({}))};
        if (multiline_) cases.push_back(ir_in_re(suffix, starts_with(cre_lit(from_utf8("\n")))));
        return ir_or(std::move(cases));
    }

    Ir word_boundary(const Term& prefix, const Term& suffix, bool positive) {
        Ir p_nonword = ir_in_re(prefix, ends_with(non_word_char_class()));
        Ir p_word = ir_in_re(prefix, ends_with(word_char_class()));
        Ir s_word = ir_in_re(suffix, starts_with(word_char_class()));
        Ir s_nonword = ir_in_re(suffix, starts_with(non_word_char_class()));
        Ir p_empty = ir_str_eq(prefix, term_lit({}));
        Ir s_empty = ir_str_eq(suffix, term_lit({}));
        if (positive) {
            return ir_or({ir_and({ir_or({p_nonword, p_empty}), s_word}),
                          ir_and({p_word, ir_or({s_nonword, s_empty})})});
        }
        // The non-word boundary is the printed dual.
        return ir_and(
            {ir_or({ir_and({ir_not(p_nonword), ir_not(p_empty)}), ir_not(s_word)}),
             ir_or({ir_not(p_word), ir_and({ir_not(s_nonword), ir_not(s_empty)})})});
    }

    // ---- the recursive model ----------------------------------------------

    Ir model(const NodePtr& raw, Term word, std::vector<Term>& left, std::vector<Term>& right,
             bool positive) {
        const NodePtr& n = peel(raw);

        // Base case: a regular, capture-free term is one membership atom.
        if (is_erasable(n) && group_free(n)) {
            CRegexPtr erased = erase_captures(n);
            return positive ? ir_in_re(word, erased) : ir_not_in_re(word, erased);
        }

        switch (n->kind) {
            case Node::Kind::Concat:
                return model_concat(n, std::move(word), left, right, positive);
            case Node::Kind::Alternation: {
                Ir formula = model_alternation(n, word, left, right);
                return positive ? formula : ir_not(formula);
            }
            case Node::Kind::Group: {
                Ir bind;
                auto it = quant_bound_groups_.find(n.get());
                if (it != quant_bound_groups_.end()) {
                    bind = ir_cap_eq(capture_var(n->index), it->second);
                } else {
                    bind = ir_cap_eq(capture_var(n->index), word);
                }
                Ir body = model(n->child, word, left, right, positive);
                return ir_and({std::move(bind), std::move(body)});
            }
            case Node::Kind::NonCapturingGroup: {
                if (n->site_id >= 0 && n->child->kind == Node::Kind::Alternation)
                    record_site(n->site_id, word, n->child);
                Ir inner = n->site_id >= 0 && n->child->kind == Node::Kind::Alternation
                               ? model_alternation(n->child, word, left, right)
                               : model(n->child, word, left, right, true);
                return positive ? inner : ir_not(inner);
            }
            case Node::Kind::Star:
            case Node::Kind::Plus:
            case Node::Kind::Repetition: {
                Ir formula = model_quantifier(n, word, left, right, positive);
                return formula;
            }
            case Node::Kind::Backreference: {
                Ir formula = model_backref_leaf(n, word);
                return positive ? formula : ir_not(formula);
            }
            case Node::Kind::AnchorStart: {
                Ir formula = ir_and({ir_str_eq(word, term_lit({})), anchor_start(ctx_term(left))});
                return positive ? formula : ir_not(formula);
            }
            case Node::Kind::AnchorEnd: {
                Ir formula = ir_and({ir_str_eq(word, term_lit({})), anchor_end(ctx_term(right))});
                return positive ? formula : ir_not(formula);
            }
            case Node::Kind::WordBoundary:
            case Node::Kind::NonWordBoundary: {
                bool want = n->kind == Node::Kind::WordBoundary;
                Ir formula = ir_and({ir_str_eq(word, term_lit({})),
                                     word_boundary(ctx_term(left), ctx_term(right), want)});
                return positive ? formula : ir_not(formula);
            }
            case Node::Kind::PositiveLookahead:
            case Node::Kind::NegativeLookahead: {
                Ir formula = model_lookahead(n, word, left, right);
                return positive ? formula : ir_not(formula);
            }
            default:
                // Literal / CharClass are erasable and handled above.
                return positive ? ir_in_re(word, erase_captures(n))
                                : ir_not_in_re(word, erase_captures(n));
        }
    }

    static Term ctx_term(const std::vector<Term>& ctx) {
        std::vector<Term> parts(ctx.begin(), ctx.end());
        return term_concat(std::move(parts));
    }

    Ir model_concat(const NodePtr& n, Term word, std::vector<Term>& left,
                    std::vector<Term>& right, bool positive) {
        if (n->children.empty()) {
            return positive ? ir_str_eq(word, term_lit({}))
                            : ir_not(ir_str_eq(word, term_lit({})));
        }
        std::vector<Term> words;
        words.reserve(n->children.size());
        for (size_t i = 0; i < n->children.size(); ++i) words.push_back(fresh_word_term("w"));
        std::vector<Ir> defs{ir_str_eq(word, term_concat(words))};
        std::vector<Ir> parts;
        for (size_t i = 0; i < n->children.size(); ++i) {
            std::vector<Term> l(left);
            l.insert(l.end(), words.begin(), words.begin() + i);
            std::vector<Term> r(words.begin() + i + 1, words.end());
            r.insert(r.end(), right.begin(), right.end());
            parts.push_back(model(n->children[i], words[i], l, r, positive));
        }
        if (positive) {
            defs.push_back(ir_and(std::move(parts)));
            return ir_and(std::move(defs));
        }
        // Splits stay, one of the member constraints is violated.
        defs.push_back(ir_or(std::move(parts)));
        return ir_and(std::move(defs));
    }

    Ir model_alternation(const NodePtr& n, const Term& word, std::vector<Term>& left,
                         std::vector<Term>& right) {
        Ir left_model = ir_and(
            {model(n->left, word, left, right, true), caps_undefined(n->right)});
        Ir right_model =
            ir_and({model(n->right, word, left, right, true), caps_undefined(n->left)});
        return ir_or({std::move(left_model), std::move(right_model)});
    }

    void record_site(int site, const Term& word, const NodePtr& spine) {
        site_subjects_[site] = word;
        site_count_[site]++;
        if (!site_alternates_.count(site)) {
            std::vector<NodePtr> alts;
            const Node* cur = spine.get();
            while (cur->kind == Node::Kind::Alternation) {
                alts.push_back(cur->left);
                cur = cur->right.get();
            }
            alts.push_back(NodePtr(spine, cur));
            site_alternates_[site] = std::move(alts);
        }
    }

    // Star / surviving Plus / surviving bounded Repetition.
    Ir model_quantifier(const NodePtr& n, const Term& word, std::vector<Term>& left,
                        std::vector<Term>& right, bool positive) {
        const NodePtr body = peel(n->child);
        bool body_mutable = false;
        {
            std::vector<std::uint32_t> groups;
            collect_group_indices(body, groups);
            if (!groups.empty()) {
                std::uint32_t lo = *std::min_element(groups.begin(), groups.end());
                std::uint32_t hi = *std::max_element(groups.begin(), groups.end());
                body_mutable = contains_backref_in_range(body, lo, hi);
            }
        }

        std::uint32_t min_reps = n->kind == Node::Kind::Plus ? 1 : 0;
        std::uint32_t max_reps = kRepInfinity;
        if (n->kind == Node::Kind::Repetition) {
            min_reps = n->min;
            max_reps = n->max;
        }

        if (is_erasable(body)) {
            if (n->kind != Node::Kind::Star)
                throw std::logic_error("unexpanded quantifier over a regular body");
            return model_regular_star(n, body, word, left, right, positive);
        }

        if (body->kind == Node::Kind::Backreference) {
            Ir formula = model_quantified_backref(body, word, min_reps);
            return positive ? formula : ir_not(formula);
        }

        Ir formula = body_mutable
                         ? model_mutable_quantified(body, word, left, right, min_reps, max_reps)
                         : model_unrolled(body, word, left, right, min_reps, max_reps);
        return positive ? formula : ir_not(formula);
    }

    static bool contains_backref_in_range(const NodePtr& n, std::uint32_t lo, std::uint32_t hi) {
        if (!n) return false;
        if (n->kind == Node::Kind::Backreference && n->index >= lo && n->index <= hi)
            return true;
        for (const auto& c : n->children)
            if (contains_backref_in_range(c, lo, hi)) return true;
        return contains_backref_in_range(n->left, lo, hi) ||
               contains_backref_in_range(n->right, lo, hi) ||
               contains_backref_in_range(n->child, lo, hi);
    }

    // Backreference-free quantification: w = w1 ++ w2, w1 in L(erased*), the
    // last iteration keeps the captures, and an empty last iteration forces
    // the whole term empty with no captures.
    Ir model_regular_star(const NodePtr& star, const NodePtr& body, const Term& word,
                          std::vector<Term>& left, std::vector<Term>& right, bool positive) {
        (void)star;
        Term w1 = fresh_word_term("w");
        Term w2 = fresh_word_term("w");
        Ir split = ir_str_eq(word, term_concat({w1, w2}));
        Ir prefix = ir_in_re(w1, cre_star(erase_captures(body)));
        std::vector<Term> l(left);
        l.push_back(w1);
        Ir eps_branch = ir_and({ir_str_eq(w2, term_lit({})), caps_undefined(body)});
        Ir alt = ir_or({model(body, w2, l, right, true), eps_branch});
        if (positive) {
            Ir emptiness =
                ir_implies(ir_str_eq(w2, term_lit({})),
                           ir_and({ir_str_eq(w1, term_lit({})), caps_undefined(body)}));
            return ir_and({split, prefix, alt, std::move(emptiness)});
        }
        // Dual: split kept, some component violated.
        Ir neg_emptiness = ir_and(
            {ir_str_eq(w2, term_lit({})),
             ir_not(ir_and({ir_str_eq(w1, term_lit({})), caps_undefined(body)}))});
        return ir_and(
            {split, ir_or({ir_not(prefix), ir_not(alt), std::move(neg_emptiness)})});
    }

    // \k under quantification, group k outside: the word is a bounded
    // concatenation of identical copies of the capture.
    Ir model_quantified_backref(const NodePtr& backref, const Term& word,
                                std::uint32_t min_reps) {
        auto it = classes_.find(backref.get());
        BackrefKind kind = it == classes_.end() ? BackrefKind::Empty : it->second;
        if (kind == BackrefKind::Empty) return ir_str_eq(word, term_lit({}));
        const std::string& cap = capture_var(backref->index);
        std::vector<Ir> options;
        for (std::uint32_t m = min_reps; m <= cfg_.max_repeats; ++m) {
            std::vector<Term> copies;
            for (std::uint32_t i = 0; i < m; ++i) copies.push_back(term_cap_value(cap));
            options.push_back(ir_str_eq(word, term_concat(std::move(copies))));
        }
        return ir_and({ir_implies(ir_cap_undef(cap), ir_str_eq(word, term_lit({}))),
                       ir_implies(ir_not(ir_cap_undef(cap)), ir_or(std::move(options)))});
    }

    // Bounded rule for mutable backreferences: all iterations are forced to
    // the same word, capture groups enclosing the backreference bind to the
    // whole quantified word.
    Ir model_mutable_quantified(const NodePtr& body, const Term& word, std::vector<Term>& left,
                                std::vector<Term>& right, std::uint32_t min_reps,
                                std::uint32_t max_reps) {
        std::vector<std::uint32_t> groups;
        collect_group_indices(body, groups);
        std::uint32_t lo = *std::min_element(groups.begin(), groups.end());
        std::uint32_t hi = *std::max_element(groups.begin(), groups.end());
        std::unordered_set<const Node*> bind_whole;
        {
            std::vector<const Node*> stack;
            collect_mutable_ancestor_groups(body, lo, hi, stack, bind_whole);
        }
        for (const Node* g : bind_whole) quant_bound_groups_[g] = word;

        Term seg = fresh_word_term("s");
        std::vector<Term> l(left);  // each iteration sees the quantifier's own context
        Ir one_iteration = model(body, seg, l, right, true);
        for (const Node* g : bind_whole) quant_bound_groups_.erase(g);

        std::vector<Ir> length_options;
        std::uint32_t first = std::max<std::uint32_t>(min_reps, 1);
        std::uint32_t last = max_reps == kRepInfinity
                                 ? first + cfg_.max_repeats - 1
                                 : std::min(max_reps, first + cfg_.max_repeats - 1);
        for (std::uint32_t m = first; m <= last; ++m) {
            std::vector<Term> copies(m, seg);
            length_options.push_back(ir_str_eq(word, term_concat(std::move(copies))));
        }
        Ir repeated = ir_and({std::move(one_iteration), ir_or(std::move(length_options))});
        if (min_reps == 0) {
            Ir eps = ir_and({ir_str_eq(word, term_lit({})), caps_undefined(body)});
            return ir_or({std::move(eps), std::move(repeated)});
        }
        return repeated;
    }

    // General bounded unrolling for quantified bodies holding immutable
    // backreferences or assertions: fresh throwaway captures for all but the
    // last iteration.
    Ir model_unrolled(const NodePtr& body, const Term& word, std::vector<Term>& left,
                      std::vector<Term>& right, std::uint32_t min_reps,
                      std::uint32_t max_reps) {
        std::vector<Ir> options;
        if (min_reps == 0)
            options.push_back(ir_and({ir_str_eq(word, term_lit({})), caps_undefined(body)}));
        std::uint32_t first = std::max<std::uint32_t>(min_reps, 1);
        std::uint32_t last = max_reps == kRepInfinity
                                 ? first + cfg_.max_repeats - 1
                                 : std::min(max_reps, first + cfg_.max_repeats - 1);
        for (std::uint32_t m = first; m <= last; ++m) {
            std::vector<Term> segs;
            for (std::uint32_t i = 0; i < m; ++i) segs.push_back(fresh_word_term("s"));
            std::vector<Ir> parts{ir_str_eq(word, term_concat(segs))};
            for (std::uint32_t i = 0; i < m; ++i) {
                std::vector<Term> l(left);
                l.insert(l.end(), segs.begin(), segs.begin() + i);
                std::vector<Term> r(segs.begin() + i + 1, segs.end());
                r.insert(r.end(), right.begin(), right.end());
                if (i + 1 == m) {
                    parts.push_back(model(body, segs[i], l, r, true));
                } else {
                    // earlier iterations keep their own throwaway captures
                    std::map<std::uint32_t, std::string> saved = cap_names_;
                    std::vector<std::uint32_t> groups;
                    collect_group_indices(body, groups);
                    for (std::uint32_t g : groups)
                        cap_names_[g] = problem_.fresh_capture(stem_ + ".t" + std::to_string(g));
                    parts.push_back(model(body, segs[i], l, r, true));
                    cap_names_ = std::move(saved);
                }
            }
            options.push_back(ir_and(std::move(parts)));
        }
        return ir_or(std::move(options));
    }

    Ir model_backref_leaf(const NodePtr& n, const Term& word) {
        auto it = classes_.find(n.get());
        BackrefKind kind = it == classes_.end() ? BackrefKind::Empty : it->second;
        switch (kind) {
            case BackrefKind::Empty:
                return ir_str_eq(word, term_lit({}));
            case BackrefKind::Immutable:
            case BackrefKind::Mutable: {
                // A mutable occurrence reaching this leaf sits inside the
                // shared iteration of the bounded rule: treat as immutable.
                const std::string& cap = capture_var(n->index);
                return ir_and({ir_implies(ir_cap_undef(cap), ir_str_eq(word, term_lit({}))),
                               ir_implies(ir_not(ir_cap_undef(cap)),
                                          ir_str_eq(word, term_cap_value(cap)))});
            }
            case BackrefKind::ImmutableQuantified:
                // Reached when the star around it was unrolled; one copy of
                // the immutable rule per occurrence.
                return model_backref_leaf_immutable(n, word);
        }
        return ir_str_eq(word, term_lit({}));
    }

    Ir model_backref_leaf_immutable(const NodePtr& n, const Term& word) {
        const std::string& cap = capture_var(n->index);
        return ir_and({ir_implies(ir_cap_undef(cap), ir_str_eq(word, term_lit({}))),
                       ir_implies(ir_not(ir_cap_undef(cap)),
                                  ir_str_eq(word, term_cap_value(cap)))});
    }

    Ir model_lookahead(const NodePtr& n, const Term& word, std::vector<Term>& left,
                       std::vector<Term>& right) {
        Ir zero = ir_str_eq(word, term_lit({}));
        Term rest = ctx_term(right);
        Term w_la = fresh_word_term("la");
        Term w_tail = fresh_word_term("la");
        Ir split = ir_str_eq(rest, term_concat({w_la, w_tail}));
        std::vector<Term> l(left);
        std::vector<Term> r{w_tail};
        Ir body = model(n->child, w_la, l, r, true);
        if (n->kind == Node::Kind::PositiveLookahead)
            return ir_and({std::move(zero), std::move(split), std::move(body)});
        // Negative: no split of the rest satisfies the body; failed lookahead
        // groups stay unset.
        Ir negated = ir_not(ir_and({std::move(split), std::move(body)}));
        return ir_and({std::move(zero), std::move(negated), caps_undefined(n->child)});
    }
};

}  // namespace

MembershipModel model_membership(ConstraintProblem& problem, const RegexAst& rewritten,
                                 Term subject, std::map<std::uint32_t, std::string> capture_names,
                                 Polarity polarity, const UnrollConfig& cfg, bool multiline,
                                 const std::string& stem) {
    // Declare the named capture variables up front so evaluation covers them.
    for (const auto& [idx, name] : capture_names)
        if (!problem.has_capture_var(name)) problem.declare_capture(name);
    ModelBuilder builder(problem, cfg, multiline, stem);
    return builder.build(rewritten, std::move(subject), polarity, std::move(capture_names));
}

namespace {

Ir corr_entry_constraint(const CorrExprPtr& expr, const std::string& original_cap,
                         const std::map<std::uint32_t, std::string>& rewritten_caps,
                         const MembershipModel& model) {
    switch (expr->kind) {
        case CorrExpr::Kind::Undefined:
            return ir_cap_undef(original_cap);
        case CorrExpr::Kind::Group: {
            auto it = rewritten_caps.find(expr->group);
            if (it == rewritten_caps.end())
                throw std::logic_error("correspondence references an unnamed capture copy");
            if (it->second == original_cap) return ir_true();  // aliased
            return ir_cap_eq_cap(original_cap, it->second);
        }
        case CorrExpr::Kind::Select: {
            // Selector sharpening: when every alternate is a classical regex
            // and the site was modeled exactly once, the taken alternate is
            // the first (in emitted precedence order) whose language contains
            // the subject, with all earlier ones excluded.
            bool sharpen = false;
            std::vector<CRegexPtr> erased;
            Term subject;
            auto subj_it = model.site_subjects.find(expr->site);
            auto count_it = model.site_model_count.find(expr->site);
            auto alts_it = model.site_alternates.find(expr->site);
            if (subj_it != model.site_subjects.end() && count_it != model.site_model_count.end() &&
                count_it->second == 1 && alts_it != model.site_alternates.end()) {
                sharpen = true;
                subject = subj_it->second;
                for (const NodePtr& alt : alts_it->second) {
                    if (!is_erasable(alt)) {
                        sharpen = false;
                        break;
                    }
                    erased.push_back(erase_captures(alt));
                }
            }
            std::vector<Ir> options;
            for (size_t a = 0; a < expr->options.size(); ++a) {
                std::vector<Ir> parts;
                if (sharpen) {
                    parts.push_back(ir_in_re(subject, erased[a]));
                    for (size_t b = 0; b < a; ++b)
                        parts.push_back(ir_not_in_re(subject, erased[b]));
                }
                parts.push_back(corr_entry_constraint(expr->options[a], original_cap,
                                                      rewritten_caps, model));
                options.push_back(ir_and(std::move(parts)));
            }
            return ir_or(std::move(options));
        }
    }
    return ir_true();
}

}  // namespace

Ir correspondence_constraints(const CaptureCorrespondence& corr,
                              const std::vector<std::string>& original_caps,
                              const std::map<std::uint32_t, std::string>& rewritten_caps,
                              const MembershipModel& model) {
    std::vector<Ir> parts;
    for (std::uint32_t i = 1; i <= corr.original_count; ++i) {
        const std::string& name = original_caps.at(i - 1);
        parts.push_back(corr_entry_constraint(corr.entries[i - 1], name, rewritten_caps, model));
    }
    return ir_and(std::move(parts));
}

namespace {

bool pattern_uses_meta(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == Node::Kind::Literal &&
        (n->literal == kMetaStart || n->literal == kMetaEnd))
        return true;
    if (n->kind == Node::Kind::CharClass && !n->is_dot) {
        for (const auto& item : n->items) {
            if (item.kind == ClassItem::Kind::Char &&
                (item.lo == kMetaStart || item.lo == kMetaEnd))
                return true;
            if (item.kind == ClassItem::Kind::Range &&
                (item.lo <= kMetaStart && kMetaStart <= item.hi))
                return true;
            if (item.kind == ClassItem::Kind::Range &&
                (item.lo <= kMetaEnd && kMetaEnd <= item.hi))
                return true;
        }
    }
    for (const auto& c : n->children)
        if (pattern_uses_meta(c)) return true;
    return pattern_uses_meta(n->left) || pattern_uses_meta(n->right) ||
           pattern_uses_meta(n->child);
}

CRegexPtr pad_language() {
    return cre_star(cre_alt({cre_dot(), cre_lit(from_utf8("\n"))}));
}

}  // namespace

ExecBinding::Outcome ExecBinding::reconstruct(const Assignment& a) const {
    Outcome out;
    if (polarity == Polarity::NonMember) {
        out.matched = false;
        out.last_index_after = stateful ? 0 : last_index;
        return out;
    }
    out.matched = true;
    size_t pad_len = a.strings.at(pad_front).size();
    out.index = offset > 0 ? offset - 1 + pad_len : pad_len - 1;
    size_t c0_len = a.captures.at(c0_var).value_or(Text{}).size();
    out.last_index_after = stateful ? out.index + c0_len : last_index;
    return out;
}

ExecBinding build_exec_query(ConstraintProblem& problem, const RegexAst& regex,
                             const FlagSet& flags, const std::string& pattern_source,
                             const std::string& subject, bool subject_is_capture,
                             const std::vector<std::string>& capture_names, Polarity polarity,
                             ApiMode mode, size_t last_index, const UnrollConfig& cfg) {
    if (flags.unicode) throw UnsupportedError("unsupported flag u");
    if (pattern_uses_meta(regex.root))
        throw UnsupportedError("pattern matches the reserved marker code points");

    size_t constraint_idx = problem.regex_constraints.size();
    std::string stem = "q" + std::to_string(constraint_idx);

    // Register for refinement before any rewriting.
    RegexConstraintInfo info;
    info.subject_is_capture = subject_is_capture;
    info.subject = subject;
    info.capture_vars = capture_names;
    info.polarity = polarity;
    info.regex = regex;
    info.flags = flags;
    info.mode = mode;
    info.last_index = last_index;
    info.pattern_source = pattern_source;
    problem.regex_constraints.push_back(info);

    RewriteResult rw = rewrite_quantifiers(regex);
    FlagSet wrap_flags = flags;
    if (mode == ApiMode::Raw) {
        wrap_flags.sticky = false;
        wrap_flags.global = false;
    }
    WrapResult wrapped = wrap_for_exec(rw.ast, wrap_flags, last_index);
    RegexAst modeled = flags.ignore_case ? rewrite_ignore_case(wrapped.ast) : wrapped.ast;

    // Name the capture variables: group 0 is the exec result's whole match;
    // original groups with a direct correspondence alias straight onto their
    // rewritten copy.
    std::vector<std::string> user_caps(capture_names);
    std::uint32_t original_count = regex.group_count;
    std::string c0_name;
    std::vector<std::string> original_named(original_count);
    if (mode == ApiMode::Exec) {
        c0_name = user_caps.at(0);
        for (std::uint32_t i = 1; i <= original_count; ++i) original_named[i - 1] = user_caps.at(i);
    } else {
        c0_name = problem.fresh_capture(stem + ".c0");
        for (std::uint32_t i = 1; i <= original_count; ++i)
            original_named[i - 1] = user_caps.at(i - 1);
    }
    std::map<std::uint32_t, std::string> rewritten_caps;
    rewritten_caps[0] = c0_name;
    for (std::uint32_t i = 1; i <= original_count; ++i) {
        const CorrExpr& e = *rw.corr.entries[i - 1];
        if (e.kind == CorrExpr::Kind::Group) rewritten_caps[e.group] = original_named[i - 1];
    }

    Term subject_term =
        subject_is_capture ? term_cap_value(subject) : term_var(subject);
    std::vector<Ir> top;
    if (subject_is_capture) top.push_back(ir_not(ir_cap_undef(subject)));

    // Meta-marker wrapping of the input.
    std::string wrapped_var = stem + ".in";
    problem.declare_string(wrapped_var);
    top.push_back(ir_str_eq(term_var(wrapped_var),
                            term_concat({term_lit(meta_start_text()), subject_term,
                                         term_lit(meta_end_text())})));

    // Sticky/global slicing.
    size_t offset = wrapped.offset;
    Term modeled_word = term_var(wrapped_var);
    Ir slice_short = ir_false();
    std::vector<Ir> slice_defs;
    if (offset > 0) {
        std::string pre = stem + ".pre";
        std::string in = stem + ".cur";
        problem.declare_string(pre);
        problem.declare_string(in);
        slice_defs.push_back(ir_str_eq(term_var(wrapped_var),
                                       term_concat({term_var(pre), term_var(in)})));
        slice_defs.push_back(ir_len_eq(term_var(pre), offset));
        // the input may simply be too short to slice
        slice_short = ir_in_re(term_var(wrapped_var),
                               cre_loop(cre_any(), 0, static_cast<std::uint32_t>(offset) - 1));
        modeled_word = term_var(in);
    }

    // Padding split with the fresh outer capture group.
    std::string p1 = problem.fresh_word(stem + ".pad");
    std::string p2 = problem.fresh_word(stem + ".pad");
    std::string wg = problem.fresh_word(stem + ".g0");
    Ir pad_split = ir_str_eq(modeled_word,
                             term_concat({term_var(p1), term_var(wg), term_var(p2)}));
    Ir pad1_in = ir_in_re(term_var(p1), pad_language());
    Ir pad2_in = ir_in_re(term_var(p2), pad_language());
    Ir c0_bind = ir_cap_eq(c0_name, term_var(wg));

    RegexAst body_ast{modeled.root->children[1]->child, modeled.group_count};
    std::map<std::uint32_t, std::string> body_caps(rewritten_caps);
    body_caps.erase(0);

    ModelBuilder builder(problem, cfg, flags.multiline, stem);
    MembershipModel memb = builder.build(body_ast, term_var(wg), polarity, body_caps,
                                         {term_var(p1)}, {term_var(p2)});

    Ir corr_ir = correspondence_constraints(rw.corr, original_named, rewritten_caps, memb);

    // declare user capture vars that were not aliased into the model
    for (const auto& name : capture_names)
        if (!problem.has_capture_var(name)) problem.declare_capture(name);
    if (!problem.has_capture_var(c0_name)) problem.declare_capture(c0_name);

    Ir membership;
    if (polarity == Polarity::Member) {
        membership = ir_and({pad_split, pad1_in, pad2_in, c0_bind, memb.formula, corr_ir});
        std::vector<Ir> all(slice_defs);
        all.push_back(membership);
        top.push_back(ir_and(std::move(all)));
    } else {
        Ir neg = ir_and({pad_split, c0_bind, corr_ir,
                         ir_or({ir_not(pad1_in), ir_not(pad2_in), memb.formula})});
        if (offset > 0) {
            std::vector<Ir> sliced(slice_defs);
            sliced.push_back(std::move(neg));
            top.push_back(ir_or({slice_short, ir_and(std::move(sliced))}));
        } else {
            top.push_back(std::move(neg));
        }
    }
    problem.assertions.push_back(ir_and(std::move(top)));

    ExecBinding binding;
    binding.subject = subject;
    binding.subject_is_capture = subject_is_capture;
    binding.wrapped_var = wrapped_var;
    binding.pad_front = p1;
    binding.c0_var = c0_name;
    binding.captures = capture_names;
    binding.offset = offset;
    binding.last_index = last_index;
    binding.stateful = flags.sticky || flags.global;
    binding.polarity = polarity;
    return binding;
}

}  // namespace regsolve
