#include "regsolve/features.hpp"

namespace regsolve {

FeatureProfile& FeatureProfile::operator+=(const FeatureProfile& o) {
    capture_groups += o.capture_groups;
    global_flag += o.global_flag;
    character_class += o.character_class;
    kleene_plus += o.kleene_plus;
    kleene_star += o.kleene_star;
    ignore_case_flag += o.ignore_case_flag;
    ranges += o.ranges;
    non_capturing += o.non_capturing;
    repetition += o.repetition;
    lazy_kleene_star += o.lazy_kleene_star;
    multiline_flag += o.multiline_flag;
    word_boundary += o.word_boundary;
    lazy_kleene_plus += o.lazy_kleene_plus;
    lookaheads += o.lookaheads;
    backreferences += o.backreferences;
    lazy_repetition += o.lazy_repetition;
    quantified_backreferences += o.quantified_backreferences;
    sticky_flag += o.sticky_flag;
    unicode_flag += o.unicode_flag;
    return *this;
}

std::uint64_t feature_by_index(const FeatureProfile& p, size_t i) {
    switch (i) {
        case 0: return p.capture_groups;
        case 1: return p.global_flag;
        case 2: return p.character_class;
        case 3: return p.kleene_plus;
        case 4: return p.kleene_star;
        case 5: return p.ignore_case_flag;
        case 6: return p.ranges;
        case 7: return p.non_capturing;
        case 8: return p.repetition;
        case 9: return p.lazy_kleene_star;
        case 10: return p.multiline_flag;
        case 11: return p.word_boundary;
        case 12: return p.lazy_kleene_plus;
        case 13: return p.lookaheads;
        case 14: return p.backreferences;
        case 15: return p.lazy_repetition;
        case 16: return p.quantified_backreferences;
        case 17: return p.sticky_flag;
        case 18: return p.unicode_flag;
        default: return 0;
    }
}

namespace {

void walk(const NodePtr& n, bool under_quantifier, FeatureProfile& p) {
    if (!n) return;
    bool child_quantified = under_quantifier;
    switch (n->kind) {
        case Node::Kind::CharClass:
            if (!n->is_dot && !(n->items.size() == 1 && n->items[0].kind != ClassItem::Kind::Char &&
                                n->items[0].kind != ClassItem::Kind::Range)) {
                // Bracketed class; bare shorthands like \d and `.` do not count.
                p.character_class++;
                for (const auto& item : n->items)
                    if (item.kind == ClassItem::Kind::Range) p.ranges++;
            }
            break;
        case Node::Kind::Star:
            (n->lazy ? p.lazy_kleene_star : p.kleene_star)++;
            child_quantified = true;
            break;
        case Node::Kind::Plus:
            (n->lazy ? p.lazy_kleene_plus : p.kleene_plus)++;
            child_quantified = true;
            break;
        case Node::Kind::Repetition:
            (n->lazy ? p.lazy_repetition : p.repetition)++;
            child_quantified = true;
            break;
        case Node::Kind::Optional:
            break;  // not a survey category, and not quantification for backrefs
        case Node::Kind::Group:
            p.capture_groups++;
            break;
        case Node::Kind::NonCapturingGroup:
            p.non_capturing++;
            break;
        case Node::Kind::PositiveLookahead:
        case Node::Kind::NegativeLookahead:
            p.lookaheads++;
            break;
        case Node::Kind::Backreference:
            p.backreferences++;
            if (under_quantifier) p.quantified_backreferences++;
            break;
        case Node::Kind::WordBoundary:
        case Node::Kind::NonWordBoundary:
            p.word_boundary++;
            break;
        default:
            break;
    }
    for (const auto& c : n->children) walk(c, child_quantified, p);
    walk(n->left, child_quantified, p);
    walk(n->right, child_quantified, p);
    walk(n->child, child_quantified, p);
}

}  // namespace

FeatureProfile profile_features(const RegexAst& ast, const FlagSet& flags) {
    FeatureProfile p;
    walk(ast.root, false, p);
    if (flags.global) p.global_flag = 1;
    if (flags.ignore_case) p.ignore_case_flag = 1;
    if (flags.multiline) p.multiline_flag = 1;
    if (flags.sticky) p.sticky_flag = 1;
    if (flags.unicode) p.unicode_flag = 1;
    return p;
}

}  // namespace regsolve
