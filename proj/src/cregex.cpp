#include "regsolve/cregex.hpp"

#include "regsolve/matcher.hpp"
#include "regsolve/printer.hpp"

namespace regsolve {

namespace {
std::shared_ptr<CRegex> fresh(CRegex::Kind k) { return std::make_shared<CRegex>(k); }
}  // namespace

CRegexPtr cre_lit(Text s) {
    auto n = fresh(CRegex::Kind::Lit);
    n->lit = std::move(s);
    return n;
}

CRegexPtr cre_epsilon() { return cre_lit(Text{}); }

CRegexPtr cre_any() { return fresh(CRegex::Kind::AnyChar); }

CRegexPtr cre_dot() { return fresh(CRegex::Kind::Dot); }

CRegexPtr cre_class(bool negated, std::vector<ClassItem> items) {
    auto n = fresh(CRegex::Kind::Class);
    n->negated = negated;
    n->items = std::move(items);
    return n;
}

CRegexPtr cre_none() { return cre_class(false, {}); }

CRegexPtr cre_concat(std::vector<CRegexPtr> children) {
    if (children.size() == 1) return children[0];
    auto n = fresh(CRegex::Kind::Concat);
    for (auto& c : children) {
        if (c->kind == CRegex::Kind::Concat) {
            for (const auto& gc : c->children) n->children.push_back(gc);
        } else if (c->kind == CRegex::Kind::Lit && c->lit.empty()) {
            continue;  // epsilon is the concat identity
        } else {
            n->children.push_back(std::move(c));
        }
    }
    if (n->children.empty()) return cre_epsilon();
    if (n->children.size() == 1) return n->children[0];
    return n;
}

CRegexPtr cre_alt(std::vector<CRegexPtr> children) {
    if (children.size() == 1) return children[0];
    auto n = fresh(CRegex::Kind::Alt);
    n->children = std::move(children);
    return n;
}

CRegexPtr cre_star(CRegexPtr child) {
    auto n = fresh(CRegex::Kind::Star);
    n->child = std::move(child);
    return n;
}

CRegexPtr cre_loop(CRegexPtr child, std::uint32_t min, std::uint32_t max) {
    auto n = fresh(CRegex::Kind::Loop);
    n->child = std::move(child);
    n->min = min;
    n->max = max;
    return n;
}

bool is_erasable(const NodePtr& n) {
    if (!n) return true;
    switch (n->kind) {
        case Node::Kind::Backreference:
        case Node::Kind::PositiveLookahead:
        case Node::Kind::NegativeLookahead:
        case Node::Kind::WordBoundary:
        case Node::Kind::NonWordBoundary:
        case Node::Kind::AnchorStart:
        case Node::Kind::AnchorEnd:
            return false;
        default:
            break;
    }
    for (const auto& c : n->children)
        if (!is_erasable(c)) return false;
    return is_erasable(n->left) && is_erasable(n->right) &&
           (n->child == nullptr || is_erasable(n->child));
}

CRegexPtr erase_captures(const NodePtr& n) {
    switch (n->kind) {
        case Node::Kind::Literal:
            return cre_lit(Text(1, n->literal));
        case Node::Kind::CharClass:
            if (n->is_dot) return cre_dot();
            return cre_class(n->negated, n->items);
        case Node::Kind::Concat: {
            std::vector<CRegexPtr> kids;
            kids.reserve(n->children.size());
            for (const auto& c : n->children) kids.push_back(erase_captures(c));
            return cre_concat(std::move(kids));
        }
        case Node::Kind::Alternation:
            return cre_alt({erase_captures(n->left), erase_captures(n->right)});
        case Node::Kind::Star:
            return cre_star(erase_captures(n->child));
        case Node::Kind::Plus:
            return cre_loop(erase_captures(n->child), 1, kRepInfinity);
        case Node::Kind::Optional:
            return cre_loop(erase_captures(n->child), 0, 1);
        case Node::Kind::Repetition:
            return cre_loop(erase_captures(n->child), n->min, n->max);
        case Node::Kind::Group:
        case Node::Kind::NonCapturingGroup:
            return erase_captures(n->child);
        default:
            throw NotRegularError("subterm is not a regular language: " + print_pattern(n));
    }
}

NodePtr cregex_to_node(const CRegexPtr& cre) {
    switch (cre->kind) {
        case CRegex::Kind::Lit: {
            std::vector<NodePtr> kids;
            kids.reserve(cre->lit.size());
            for (char32_t c : cre->lit) kids.push_back(make_literal(c));
            return make_concat(std::move(kids));
        }
        case CRegex::Kind::AnyChar:
            return make_char_class(true, {});  // [^] matches any code point
        case CRegex::Kind::Dot:
            return make_dot();
        case CRegex::Kind::Class:
            return make_char_class(cre->negated, cre->items);
        case CRegex::Kind::Concat: {
            std::vector<NodePtr> kids;
            kids.reserve(cre->children.size());
            for (const auto& c : cre->children) kids.push_back(cregex_to_node(c));
            return make_concat(std::move(kids));
        }
        case CRegex::Kind::Alt: {
            NodePtr acc = cregex_to_node(cre->children.back());
            for (size_t i = cre->children.size() - 1; i-- > 0;)
                acc = make_alternation(cregex_to_node(cre->children[i]), std::move(acc));
            return acc;
        }
        case CRegex::Kind::Star:
            return make_star(cregex_to_node(cre->child), false);
        case CRegex::Kind::Loop:
            return make_repetition(cregex_to_node(cre->child), cre->min, cre->max, false);
    }
    return make_empty();
}

bool cregex_member(const CRegexPtr& cre, const Text& word) {
    RegexAst ast{cregex_to_node(cre), 0};
    FlagSet none;
    return matches_full(ast, word, none);
}

namespace {
void render(std::string& out, const CRegexPtr& cre) {
    switch (cre->kind) {
        case CRegex::Kind::Lit:
            out += "\"" + to_utf8(cre->lit) + "\"";
            return;
        case CRegex::Kind::AnyChar:
            out += "<any>";
            return;
        case CRegex::Kind::Dot:
            out += ".";
            return;
        case CRegex::Kind::Class:
            out += print_pattern(make_char_class(cre->negated, cre->items));
            return;
        case CRegex::Kind::Concat:
            out += "(";
            for (size_t i = 0; i < cre->children.size(); ++i) {
                if (i) out += " ";
                render(out, cre->children[i]);
            }
            out += ")";
            return;
        case CRegex::Kind::Alt:
            out += "(";
            for (size_t i = 0; i < cre->children.size(); ++i) {
                if (i) out += "|";
                render(out, cre->children[i]);
            }
            out += ")";
            return;
        case CRegex::Kind::Star:
            render(out, cre->child);
            out += "*";
            return;
        case CRegex::Kind::Loop:
            render(out, cre->child);
            out += "{" + std::to_string(cre->min) + "," +
                   (cre->max == kRepInfinity ? std::string("") : std::to_string(cre->max)) + "}";
            return;
    }
}
}  // namespace

std::string cregex_to_string(const CRegexPtr& cre) {
    std::string out;
    render(out, cre);
    return out;
}

}  // namespace regsolve
