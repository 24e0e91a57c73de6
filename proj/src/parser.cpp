#include "regsolve/parser.hpp"

#include <cstdint>

namespace regsolve {

namespace {

bool is_ascii_punct(char32_t c) {
    return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') || (c >= U'[' && c <= U'`') ||
           (c >= U'{' && c <= U'~');
}

constexpr std::uint32_t kMaxQuantifierBound = 1000000;

class Parser {
public:
    Parser(const Text& src, bool unicode_flag) : src_(src), unicode_(unicode_flag) {}

    RegexAst parse() {
        NodePtr root = parse_disjunction();
        if (!at_end()) fail("unexpected ')'");
        RegexAst ast;
        ast.root = std::move(root);
        ast.group_count = next_group_ - 1;
        return ast;
    }

private:
    const Text& src_;
    bool unicode_;
    size_t pos_ = 0;
    std::uint32_t next_group_ = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    bool at_end() const { return pos_ >= src_.size(); }
    char32_t peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : 0;
    }
    char32_t get() { return src_[pos_++]; }
    bool eat(char32_t c) {
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_disjunction() {
        NodePtr left = parse_alternative();
        if (eat(U'|')) return make_alternation(std::move(left), parse_disjunction());
        return left;
    }

    NodePtr parse_alternative() {
        std::vector<NodePtr> terms;
        while (!at_end() && peek() != U'|' && peek() != U')') terms.push_back(parse_term());
        if (terms.size() == 1) return terms[0];
        return make_concat(std::move(terms));
    }

    NodePtr parse_term() {
        size_t term_start = pos_;
        char32_t c = peek();

        // Assertions are not quantifiable.
        if (c == U'^') {
            ++pos_;
            check_no_quantifier(term_start);
            return make_assertion(Node::Kind::AnchorStart);
        }
        if (c == U'$') {
            ++pos_;
            check_no_quantifier(term_start);
            return make_assertion(Node::Kind::AnchorEnd);
        }
        if (c == U'\\' && (peek(1) == U'b' || peek(1) == U'B')) {
            bool non = peek(1) == U'B';
            pos_ += 2;
            check_no_quantifier(term_start);
            return make_assertion(non ? Node::Kind::NonWordBoundary : Node::Kind::WordBoundary);
        }
        if (c == U'(' && peek(1) == U'?' && (peek(2) == U'=' || peek(2) == U'!')) {
            bool positive = peek(2) == U'=';
            pos_ += 3;
            NodePtr body = parse_disjunction();
            if (!eat(U')')) fail("unbalanced parenthesis in lookahead");
            check_no_quantifier(term_start);
            return make_lookahead(positive, std::move(body));
        }

        NodePtr atom = parse_atom();
        return parse_quantifier(std::move(atom), term_start);
    }

    void check_no_quantifier(size_t term_start) {
        char32_t c = peek();
        if (c == U'*' || c == U'+' || c == U'?') {
            pos_ = term_start;
            fail("quantifier after assertion");
        }
        std::uint32_t lo, hi;
        size_t save = pos_;
        if (c == U'{' && try_parse_braced(lo, hi)) {
            pos_ = term_start;
            fail("quantifier after assertion");
        }
        pos_ = save;
    }

    NodePtr parse_atom() {
        char32_t c = peek();
        switch (c) {
            case U'.':
                ++pos_;
                return make_dot();
            case U'(':
                return parse_group();
            case U'[':
                return parse_class();
            case U'\\':
                return parse_atom_escape();
            case U'*':
            case U'+':
            case U'?':
                fail("nothing to repeat");
            case U'{': {
                // A `{` that forms a syntactically valid quantifier has nothing
                // to repeat; otherwise it is a literal brace.
                std::uint32_t lo, hi;
                size_t save = pos_;
                ++pos_;
                if (try_parse_braced_tail(lo, hi)) {
                    pos_ = save;
                    fail("nothing to repeat");
                }
                pos_ = save + 1;
                return make_literal(U'{');
            }
            default:
                ++pos_;
                return make_literal(c);
        }
    }

    NodePtr parse_group() {
        ++pos_;  // (
        if (eat(U'?')) {
            if (eat(U':')) {
                NodePtr body = parse_disjunction();
                if (!eat(U')')) fail("unbalanced parenthesis");
                return make_noncapturing(std::move(body));
            }
            if (peek() == U'<') fail("named groups and lookbehind are not supported");
            fail("invalid group syntax");
        }
        std::uint32_t index = next_group_++;
        NodePtr body = parse_disjunction();
        if (!eat(U')')) fail("unbalanced parenthesis");
        return make_group(index, std::move(body));
    }

    NodePtr parse_quantifier(NodePtr atom, size_t term_start) {
        char32_t c = peek();
        NodePtr result;
        if (c == U'*') {
            ++pos_;
            result = make_star(std::move(atom), eat(U'?'));
        } else if (c == U'+') {
            ++pos_;
            result = make_plus(std::move(atom), eat(U'?'));
        } else if (c == U'?') {
            ++pos_;
            result = make_optional(std::move(atom), eat(U'?'));
        } else if (c == U'{') {
            std::uint32_t lo, hi;
            size_t save = pos_;
            if (!try_parse_braced(lo, hi)) {
                pos_ = save;
                return atom;
            }
            if (lo > hi) fail("numbers out of order in {} quantifier");
            result = make_repetition(std::move(atom), lo, hi, eat(U'?'));
        } else {
            return atom;
        }
        // A quantifier directly following a quantifier has nothing to repeat.
        c = peek();
        if (c == U'*' || c == U'+' || c == U'?') fail("nothing to repeat");
        std::uint32_t lo, hi;
        size_t save = pos_;
        if (c == U'{' && try_parse_braced(lo, hi)) {
            pos_ = term_start;
            fail("nothing to repeat");
        }
        pos_ = save;
        return result;
    }

    bool try_parse_braced(std::uint32_t& lo, std::uint32_t& hi) {
        if (!eat(U'{')) return false;
        return try_parse_braced_tail(lo, hi);
    }

    // Parses `m}`, `m,}`, or `m,n}` after the opening brace.
    bool try_parse_braced_tail(std::uint32_t& lo, std::uint32_t& hi) {
        if (!is_ascii_digit(peek())) return false;
        lo = parse_decimal();
        if (eat(U'}')) {
            hi = lo;
            return true;
        }
        if (!eat(U',')) return false;
        if (eat(U'}')) {
            hi = kRepInfinity;
            return true;
        }
        if (!is_ascii_digit(peek())) return false;
        hi = parse_decimal();
        return eat(U'}');
    }

    std::uint32_t parse_decimal() {
        std::uint64_t v = 0;
        while (is_ascii_digit(peek())) {
            v = v * 10 + (get() - U'0');
            if (v > kMaxQuantifierBound) fail("quantifier bound too large");
        }
        return static_cast<std::uint32_t>(v);
    }

    NodePtr parse_atom_escape() {
        ++pos_;  // backslash
        if (at_end()) fail("trailing backslash");
        char32_t c = peek();
        if (c >= U'1' && c <= U'9') {
            std::uint32_t index = parse_decimal();
            return make_backreference(index);
        }
        switch (c) {
            case U'd':
            case U'D':
            case U'w':
            case U'W':
            case U's':
            case U'S': {
                ++pos_;
                return make_char_class(false, {ClassItem::shorthand(shorthand_kind(c))});
            }
            default:
                return make_literal(parse_char_escape(/*in_class=*/false));
        }
    }

    static ClassItem::Kind shorthand_kind(char32_t c) {
        switch (c) {
            case U'd': return ClassItem::Kind::Digit;
            case U'D': return ClassItem::Kind::NotDigit;
            case U'w': return ClassItem::Kind::Word;
            case U'W': return ClassItem::Kind::NotWord;
            case U's': return ClassItem::Kind::Space;
            default: return ClassItem::Kind::NotSpace;
        }
    }

    // Called with pos_ at the character after the backslash.
    char32_t parse_char_escape(bool in_class) {
        char32_t c = get();
        switch (c) {
            case U'n': return U'\n';
            case U'r': return U'\r';
            case U't': return U'\t';
            case U'f': return U'\f';
            case U'v': return U'\v';
            case U'b':
                if (in_class) return U'\b';
                fail("unexpected \\b");
            case U'0':
                if (is_ascii_digit(peek())) fail("octal escapes are not supported");
                return U'\0';
            case U'x': {
                char32_t v = 0;
                for (int i = 0; i < 2; ++i) {
                    int d = hex_digit(peek());
                    if (d < 0) fail("invalid \\x escape");
                    v = v * 16 + d;
                    ++pos_;
                }
                return v;
            }
            case U'u': {
                if (peek() == U'{') {
                    if (!unicode_) fail("\\u{...} requires the u flag");
                    ++pos_;
                    char32_t v = 0;
                    int digits = 0;
                    while (hex_digit(peek()) >= 0) {
                        v = v * 16 + hex_digit(get());
                        if (v > 0x10FFFF) fail("code point out of range");
                        ++digits;
                    }
                    if (digits == 0 || !eat(U'}')) fail("invalid \\u{...} escape");
                    return v;
                }
                char32_t v = 0;
                for (int i = 0; i < 4; ++i) {
                    int d = hex_digit(peek());
                    if (d < 0) fail("invalid \\u escape");
                    v = v * 16 + d;
                    ++pos_;
                }
                return v;
            }
            default:
                if (is_ascii_punct(c)) return c;  // identity escape
                fail("unsupported escape");
        }
    }

    static int hex_digit(char32_t c) {
        if (c >= U'0' && c <= U'9') return static_cast<int>(c - U'0');
        if (c >= U'a' && c <= U'f') return static_cast<int>(c - U'a' + 10);
        if (c >= U'A' && c <= U'F') return static_cast<int>(c - U'A' + 10);
        return -1;
    }

    NodePtr parse_class() {
        ++pos_;  // [
        bool negated = eat(U'^');
        std::vector<ClassItem> items;
        while (true) {
            if (at_end()) fail("unterminated character class");
            if (eat(U']')) break;
            ClassItem first = parse_class_atom();
            if (peek() == U'-' && peek(1) != U']' && pos_ + 1 < src_.size()) {
                ++pos_;  // -
                ClassItem second = parse_class_atom();
                if (first.kind != ClassItem::Kind::Char || second.kind != ClassItem::Kind::Char)
                    fail("invalid class range");
                if (first.lo > second.lo) fail("invalid class range");
                items.push_back(ClassItem::range(first.lo, second.lo));
            } else {
                items.push_back(first);
            }
        }
        return make_char_class(negated, std::move(items));
    }

    ClassItem parse_class_atom() {
        char32_t c = get();
        if (c != U'\\') return ClassItem::ch(c);
        if (at_end()) fail("trailing backslash");
        char32_t e = peek();
        switch (e) {
            case U'd':
            case U'D':
            case U'w':
            case U'W':
            case U's':
            case U'S':
                ++pos_;
                return ClassItem::shorthand(shorthand_kind(e));
            default:
                return ClassItem::ch(parse_char_escape(/*in_class=*/true));
        }
    }
};

}  // namespace

FlagSet parse_flags(const std::string& flags) {
    FlagSet out;
    for (size_t i = 0; i < flags.size(); ++i) {
        bool dup = false;
        switch (flags[i]) {
            case 'i': dup = out.ignore_case; out.ignore_case = true; break;
            case 'm': dup = out.multiline; out.multiline = true; break;
            case 'g': dup = out.global; out.global = true; break;
            case 'y': dup = out.sticky; out.sticky = true; break;
            case 'u': dup = out.unicode; out.unicode = true; break;
            default:
                throw ParseError(std::string("unknown flag '") + flags[i] + "'", i);
        }
        if (dup) throw ParseError(std::string("duplicate flag '") + flags[i] + "'", i);
    }
    return out;
}

std::pair<RegexAst, FlagSet> parse_pattern(const Text& source, const std::string& flags) {
    FlagSet fs = parse_flags(flags);
    Parser p(source, fs.unicode);
    return {p.parse(), fs};
}

std::pair<RegexAst, FlagSet> parse_pattern(const std::string& source, const std::string& flags) {
    return parse_pattern(from_utf8(source), flags);
}

}  // namespace regsolve
