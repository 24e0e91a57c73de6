#include "regsolve/printer.hpp"

#include <cstdio>

namespace regsolve {

namespace {

void append_hex_escape(std::string& out, char32_t c) {
    char buf[16];
    if (c <= 0xFF) {
        std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned>(c));
    } else {
        std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
    }
    out += buf;
}

// force_hex makes the next character safe after a backreference, where a bare
// digit would extend the reference's index.
void append_literal(std::string& out, char32_t c, bool force_hex) {
    if (force_hex) {
        append_hex_escape(out, c);
        return;
    }
    switch (c) {
        case U'\n': out += "\\n"; return;
        case U'\r': out += "\\r"; return;
        case U'\t': out += "\\t"; return;
        case U'\f': out += "\\f"; return;
        case U'\v': out += "\\v"; return;
        case U'\0': out += "\\0"; return;
        case U'^': case U'$': case U'\\': case U'.': case U'*': case U'+':
        case U'?': case U'(': case U')': case U'[': case U']': case U'{':
        case U'}': case U'|': case U'/':
            out += '\\';
            out += static_cast<char>(c);
            return;
        default:
            break;
    }
    if (c >= 0x20 && c < 0x7F) {
        out += static_cast<char>(c);
    } else {
        append_hex_escape(out, c);
    }
}

void append_class_char(std::string& out, char32_t c) {
    switch (c) {
        case U'\n': out += "\\n"; return;
        case U'\r': out += "\\r"; return;
        case U'\t': out += "\\t"; return;
        case U'\f': out += "\\f"; return;
        case U'\v': out += "\\v"; return;
        case U'\0': out += "\\0"; return;
        case U'\b': out += "\\b"; return;
        case U'\\': case U']': case U'^': case U'-': case U'/':
            out += '\\';
            out += static_cast<char>(c);
            return;
        default:
            break;
    }
    if (c >= 0x20 && c < 0x7F) {
        out += static_cast<char>(c);
    } else {
        append_hex_escape(out, c);
    }
}

void append_class_item(std::string& out, const ClassItem& item) {
    switch (item.kind) {
        case ClassItem::Kind::Char: append_class_char(out, item.lo); return;
        case ClassItem::Kind::Range:
            append_class_char(out, item.lo);
            out += '-';
            append_class_char(out, item.hi);
            return;
        case ClassItem::Kind::Digit: out += "\\d"; return;
        case ClassItem::Kind::NotDigit: out += "\\D"; return;
        case ClassItem::Kind::Word: out += "\\w"; return;
        case ClassItem::Kind::NotWord: out += "\\W"; return;
        case ClassItem::Kind::Space: out += "\\s"; return;
        case ClassItem::Kind::NotSpace: out += "\\S"; return;
    }
}

bool is_shorthand_only_class(const Node& n) {
    return !n.negated && !n.is_dot && n.items.size() == 1 &&
           n.items[0].kind != ClassItem::Kind::Char && n.items[0].kind != ClassItem::Kind::Range;
}

void print_node(std::string& out, const NodePtr& n, bool after_backref);

// Quantifiable atoms print bare; anything else gets a non-capturing wrapper so
// the quantifier binds correctly when re-parsed.
bool is_atom_for_quantifier(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Literal:
        case Node::Kind::CharClass:
        case Node::Kind::Group:
        case Node::Kind::NonCapturingGroup:
        case Node::Kind::Backreference:
            return true;
        default:
            return false;
    }
}

void print_quantified(std::string& out, const NodePtr& child, const char* op, bool lazy) {
    if (is_atom_for_quantifier(*child)) {
        print_node(out, child, false);
    } else {
        out += "(?:";
        print_node(out, child, false);
        out += ')';
    }
    out += op;
    if (lazy) out += '?';
}

void print_node(std::string& out, const NodePtr& n, bool after_backref) {
    switch (n->kind) {
        case Node::Kind::Literal:
            append_literal(out, n->literal, after_backref && is_ascii_digit(n->literal));
            return;
        case Node::Kind::CharClass: {
            if (n->is_dot) {
                out += '.';
                return;
            }
            if (is_shorthand_only_class(*n)) {
                append_class_item(out, n->items[0]);
                return;
            }
            out += '[';
            if (n->negated) out += '^';
            for (const auto& item : n->items) append_class_item(out, item);
            out += ']';
            return;
        }
        case Node::Kind::Concat: {
            bool prev_backref = false;
            for (const auto& c : n->children) {
                if (c->kind == Node::Kind::Alternation) {
                    out += "(?:";
                    print_node(out, c, false);
                    out += ')';
                } else {
                    print_node(out, c, prev_backref);
                }
                prev_backref = c->kind == Node::Kind::Backreference;
            }
            return;
        }
        case Node::Kind::Alternation: {
            if (n->left->kind == Node::Kind::Alternation) {
                out += "(?:";
                print_node(out, n->left, false);
                out += ')';
            } else {
                print_node(out, n->left, false);
            }
            out += '|';
            print_node(out, n->right, false);
            return;
        }
        case Node::Kind::Star: print_quantified(out, n->child, "*", n->lazy); return;
        case Node::Kind::Plus: print_quantified(out, n->child, "+", n->lazy); return;
        case Node::Kind::Optional: print_quantified(out, n->child, "?", n->lazy); return;
        case Node::Kind::Repetition: {
            std::string op = "{" + std::to_string(n->min);
            if (n->max == kRepInfinity) {
                op += ",}";
            } else if (n->max != n->min) {
                op += "," + std::to_string(n->max) + "}";
            } else {
                op += "}";
            }
            print_quantified(out, n->child, op.c_str(), n->lazy);
            return;
        }
        case Node::Kind::Group:
            out += '(';
            print_node(out, n->child, false);
            out += ')';
            return;
        case Node::Kind::NonCapturingGroup:
            out += "(?:";
            print_node(out, n->child, false);
            out += ')';
            return;
        case Node::Kind::PositiveLookahead:
            out += "(?=";
            print_node(out, n->child, false);
            out += ')';
            return;
        case Node::Kind::NegativeLookahead:
            out += "(?!";
            print_node(out, n->child, false);
            out += ')';
            return;
        case Node::Kind::Backreference:
            out += '\\';
            out += std::to_string(n->index);
            return;
        case Node::Kind::WordBoundary: out += "\\b"; return;
        case Node::Kind::NonWordBoundary: out += "\\B"; return;
        case Node::Kind::AnchorStart: out += '^'; return;
        case Node::Kind::AnchorEnd: out += '$'; return;
    }
}

}  // namespace

std::string print_pattern(const NodePtr& node) {
    std::string out;
    print_node(out, node, false);
    return out;
}

std::string print_pattern(const RegexAst& ast) { return print_pattern(ast.root); }

}  // namespace regsolve
