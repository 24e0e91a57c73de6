#include "regsolve/ast.hpp"

namespace regsolve {

namespace {
std::shared_ptr<Node> fresh(Node::Kind k) { return std::make_shared<Node>(k); }
}  // namespace

NodePtr make_literal(char32_t c) {
    auto n = fresh(Node::Kind::Literal);
    n->literal = c;
    return n;
}

NodePtr make_char_class(bool negated, std::vector<ClassItem> items) {
    auto n = fresh(Node::Kind::CharClass);
    n->negated = negated;
    n->items = std::move(items);
    return n;
}

NodePtr make_dot() {
    auto n = fresh(Node::Kind::CharClass);
    n->is_dot = true;
    return n;
}

NodePtr make_concat(std::vector<NodePtr> children) {
    auto n = fresh(Node::Kind::Concat);
    n->children.reserve(children.size());
    for (auto& c : children) {
        if (c->kind == Node::Kind::Concat) {
            for (const auto& gc : c->children) n->children.push_back(gc);
        } else {
            n->children.push_back(std::move(c));
        }
    }
    return n;
}

NodePtr make_alternation(NodePtr left, NodePtr right) {
    auto n = fresh(Node::Kind::Alternation);
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
}

NodePtr make_star(NodePtr child, bool lazy) {
    auto n = fresh(Node::Kind::Star);
    n->child = std::move(child);
    n->lazy = lazy;
    return n;
}

NodePtr make_plus(NodePtr child, bool lazy) {
    auto n = fresh(Node::Kind::Plus);
    n->child = std::move(child);
    n->lazy = lazy;
    return n;
}

NodePtr make_optional(NodePtr child, bool lazy) {
    auto n = fresh(Node::Kind::Optional);
    n->child = std::move(child);
    n->lazy = lazy;
    return n;
}

NodePtr make_repetition(NodePtr child, std::uint32_t min, std::uint32_t max, bool lazy) {
    auto n = fresh(Node::Kind::Repetition);
    n->child = std::move(child);
    n->min = min;
    n->max = max;
    n->lazy = lazy;
    return n;
}

NodePtr make_group(std::uint32_t index, NodePtr child) {
    auto n = fresh(Node::Kind::Group);
    n->index = index;
    n->child = std::move(child);
    return n;
}

NodePtr make_noncapturing(NodePtr child, int site_id) {
    auto n = fresh(Node::Kind::NonCapturingGroup);
    n->child = std::move(child);
    n->site_id = site_id;
    return n;
}

NodePtr make_lookahead(bool positive, NodePtr child) {
    auto n = fresh(positive ? Node::Kind::PositiveLookahead : Node::Kind::NegativeLookahead);
    n->child = std::move(child);
    return n;
}

NodePtr make_backreference(std::uint32_t index) {
    auto n = fresh(Node::Kind::Backreference);
    n->index = index;
    return n;
}

NodePtr make_assertion(Node::Kind kind) { return fresh(kind); }

NodePtr make_empty() { return make_concat({}); }

bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Node::Kind::Literal:
            return a->literal == b->literal;
        case Node::Kind::CharClass:
            return a->negated == b->negated && a->is_dot == b->is_dot && a->items == b->items;
        case Node::Kind::Concat: {
            if (a->children.size() != b->children.size()) return false;
            for (size_t i = 0; i < a->children.size(); ++i)
                if (!node_equal(a->children[i], b->children[i])) return false;
            return true;
        }
        case Node::Kind::Alternation:
            return node_equal(a->left, b->left) && node_equal(a->right, b->right);
        case Node::Kind::Star:
        case Node::Kind::Plus:
        case Node::Kind::Optional:
            return a->lazy == b->lazy && node_equal(a->child, b->child);
        case Node::Kind::Repetition:
            return a->lazy == b->lazy && a->min == b->min && a->max == b->max &&
                   node_equal(a->child, b->child);
        case Node::Kind::Group:
            return a->index == b->index && node_equal(a->child, b->child);
        case Node::Kind::NonCapturingGroup:
            return a->site_id == b->site_id && node_equal(a->child, b->child);
        case Node::Kind::PositiveLookahead:
        case Node::Kind::NegativeLookahead:
            return node_equal(a->child, b->child);
        case Node::Kind::Backreference:
            return a->index == b->index;
        case Node::Kind::WordBoundary:
        case Node::Kind::NonWordBoundary:
        case Node::Kind::AnchorStart:
        case Node::Kind::AnchorEnd:
            return true;
    }
    return false;
}

size_t node_count(const NodePtr& n) {
    if (!n) return 0;
    size_t total = 1;
    for (const auto& c : n->children) total += node_count(c);
    total += node_count(n->left);
    total += node_count(n->right);
    total += node_count(n->child);
    return total;
}

void collect_group_indices(const NodePtr& n, std::vector<std::uint32_t>& out) {
    if (!n) return;
    if (n->kind == Node::Kind::Group) out.push_back(n->index);
    for (const auto& c : n->children) collect_group_indices(c, out);
    collect_group_indices(n->left, out);
    collect_group_indices(n->right, out);
    collect_group_indices(n->child, out);
}

bool contains_kind(const NodePtr& n, Node::Kind kind) {
    if (!n) return false;
    if (n->kind == kind) return true;
    for (const auto& c : n->children)
        if (contains_kind(c, kind)) return true;
    return contains_kind(n->left, kind) || contains_kind(n->right, kind) ||
           contains_kind(n->child, kind);
}

std::string FlagSet::to_string() const {
    std::string s;
    if (global) s += 'g';
    if (ignore_case) s += 'i';
    if (multiline) s += 'm';
    if (unicode) s += 'u';
    if (sticky) s += 'y';
    return s;
}

}  // namespace regsolve
