#include "regsolve/matcher.hpp"

#include <functional>
#include <unordered_map>
#include <utility>

namespace regsolve {

namespace {

bool class_item_matches(const ClassItem& item, char32_t c) {
    switch (item.kind) {
        case ClassItem::Kind::Char: return c == item.lo;
        case ClassItem::Kind::Range: return c >= item.lo && c <= item.hi;
        case ClassItem::Kind::Digit: return is_ascii_digit(c);
        case ClassItem::Kind::NotDigit: return !is_ascii_digit(c);
        case ClassItem::Kind::Word: return is_word_char(c);
        case ClassItem::Kind::NotWord: return !is_word_char(c);
        case ClassItem::Kind::Space:
            return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
                   c == U'\v' || c == U' ' || c == U' ' || c == U' ' ||
                   c == U'﻿';
        case ClassItem::Kind::NotSpace:
            return !class_item_matches(ClassItem::shorthand(ClassItem::Kind::Space), c);
    }
    return false;
}

using Span = std::optional<std::pair<size_t, size_t>>;

class Engine {
public:
    Engine(const Text& input, const FlagSet& flags, std::uint32_t group_count,
           std::uint64_t budget)
        : input_(input), flags_(flags), budget_(budget) {
        captures_.assign(group_count + 1, std::nullopt);
    }

    using Cont = std::function<bool(size_t)>;

    bool run(const NodePtr& root, size_t start, std::optional<size_t> required_end,
             size_t& end_out) {
        size_t end = 0;
        Cont done = [&](size_t pos) {
            if (required_end && pos != *required_end) return false;
            end = pos;
            return true;
        };
        if (!match(root, start, done)) return false;
        end_out = end;
        return true;
    }

    // Explores every backtracking completion, reporting each to `sink`.
    void run_all(const NodePtr& root, size_t start,
                 const std::function<void(size_t end)>& sink) {
        Cont collect = [&](size_t pos) {
            sink(pos);
            return false;  // force further exploration
        };
        match(root, start, collect);
    }

    const std::vector<Span>& captures() const { return captures_; }
    const std::map<int, int>& taken_alternates() const { return sites_; }

private:
    const Text& input_;
    const FlagSet& flags_;
    std::uint64_t budget_;
    std::vector<Span> captures_;
    std::map<int, int> sites_;  // site id -> alternate on the current path
    std::unordered_map<const Node*, std::pair<std::uint32_t, std::uint32_t>> group_ranges_;

    char32_t canon(char32_t c) const { return flags_.ignore_case ? ascii_upper(c) : c; }

    bool char_matches_class(const Node& n, char32_t c) const {
        if (n.is_dot) return !is_line_terminator(c);
        auto raw = [&](char32_t x) {
            for (const auto& item : n.items)
                if (class_item_matches(item, x)) return true;
            return false;
        };
        bool in_set = raw(c);
        if (!in_set && flags_.ignore_case) {
            char32_t swapped = ascii_swap_case(c);
            if (swapped != c) in_set = raw(swapped);
        }
        return n.negated ? !in_set : in_set;
    }

    // Capture indices inside a subtree are contiguous (numbering follows the
    // opening parenthesis); [1, 0] encodes the empty range.
    std::pair<std::uint32_t, std::uint32_t> group_range(const Node* n) {
        auto it = group_ranges_.find(n);
        if (it != group_ranges_.end()) return it->second;
        std::vector<std::uint32_t> idx;
        collect_group_indices(n->child ? n->child : nullptr, idx);
        // quantifier nodes hold their body in `child`
        std::pair<std::uint32_t, std::uint32_t> r{1, 0};
        for (std::uint32_t g : idx) {
            if (r.first > r.second) {
                r = {g, g};
            } else {
                if (g < r.first) r.first = g;
                if (g > r.second) r.second = g;
            }
        }
        group_ranges_.emplace(n, r);
        return r;
    }

    void spend() {
        if (budget_ == 0) throw MatchBudgetExceeded();
        --budget_;
    }

    bool is_word_at(size_t pos) const {
        return pos < input_.size() && is_word_char(input_[pos]);
    }
    bool is_word_before(size_t pos) const { return pos > 0 && is_word_char(input_[pos - 1]); }

    bool match(const NodePtr& n, size_t pos, const Cont& k) {
        spend();
        switch (n->kind) {
            case Node::Kind::Literal: {
                if (pos >= input_.size()) return false;
                if (canon(input_[pos]) != canon(n->literal)) return false;
                return k(pos + 1);
            }
            case Node::Kind::CharClass: {
                if (pos >= input_.size()) return false;
                if (!char_matches_class(*n, input_[pos])) return false;
                return k(pos + 1);
            }
            case Node::Kind::Concat:
                return match_seq(n->children, 0, pos, k);
            case Node::Kind::Alternation:
                return match(n->left, pos, k) || match(n->right, pos, k);
            case Node::Kind::Star:
                return repeat(n.get(), n->child, 0, kRepInfinity, !n->lazy, pos, k);
            case Node::Kind::Plus:
                return repeat(n.get(), n->child, 1, kRepInfinity, !n->lazy, pos, k);
            case Node::Kind::Optional:
                return repeat(n.get(), n->child, 0, 1, !n->lazy, pos, k);
            case Node::Kind::Repetition:
                return repeat(n.get(), n->child, n->min, n->max, !n->lazy, pos, k);
            case Node::Kind::Group: {
                Span saved = captures_[n->index];
                bool ok = match(n->child, pos, [&, pos](size_t p) {
                    Span inner_saved = captures_[n->index];
                    captures_[n->index] = std::make_pair(pos, p);
                    if (k(p)) return true;
                    captures_[n->index] = inner_saved;
                    return false;
                });
                if (!ok) captures_[n->index] = saved;
                return ok;
            }
            case Node::Kind::NonCapturingGroup: {
                if (n->site_id >= 0 && n->child->kind == Node::Kind::Alternation)
                    return match_site(n->site_id, n->child, pos, k);
                return match(n->child, pos, k);
            }
            case Node::Kind::PositiveLookahead: {
                std::vector<Span> saved = captures_;
                size_t ignored;
                // The lookahead commits to its first internal match.
                if (!Engine::submatch(n->child, pos, ignored)) {
                    captures_ = std::move(saved);
                    return false;
                }
                if (k(pos)) return true;
                captures_ = std::move(saved);
                return false;
            }
            case Node::Kind::NegativeLookahead: {
                std::vector<Span> saved = captures_;
                size_t ignored;
                bool inner = Engine::submatch(n->child, pos, ignored);
                captures_ = std::move(saved);
                if (inner) return false;
                return k(pos);
            }
            case Node::Kind::Backreference: {
                if (n->index >= captures_.size() || !captures_[n->index]) return k(pos);
                auto [s, e] = *captures_[n->index];
                size_t len = e - s;
                if (pos + len > input_.size()) return false;
                for (size_t i = 0; i < len; ++i)
                    if (canon(input_[pos + i]) != canon(input_[s + i])) return false;
                return k(pos + len);
            }
            case Node::Kind::WordBoundary: {
                if (is_word_before(pos) != is_word_at(pos)) return k(pos);
                return false;
            }
            case Node::Kind::NonWordBoundary: {
                if (is_word_before(pos) == is_word_at(pos)) return k(pos);
                return false;
            }
            case Node::Kind::AnchorStart: {
                if (pos == 0) return k(pos);
                if (flags_.multiline && is_line_terminator(input_[pos - 1])) return k(pos);
                return false;
            }
            case Node::Kind::AnchorEnd: {
                if (pos == input_.size()) return k(pos);
                if (flags_.multiline && is_line_terminator(input_[pos])) return k(pos);
                return false;
            }
        }
        return false;
    }

    bool submatch(const NodePtr& n, size_t pos, size_t& end) {
        return match(n, pos, [&](size_t p) {
            end = p;
            return true;
        });
    }

    bool match_seq(const std::vector<NodePtr>& seq, size_t i, size_t pos, const Cont& k) {
        if (i == seq.size()) return k(pos);
        return match(seq[i], pos,
                     [&, i](size_t p) { return match_seq(seq, i + 1, p, k); });
    }

    // Annotated alternation: try the spine's alternates in order, keeping the
    // taken alternate visible on the current path. A later evaluation of the
    // same site (a new quantifier iteration) simply overwrites the entry.
    bool match_site(int site, const NodePtr& spine, size_t pos, const Cont& k) {
        std::vector<NodePtr> alts;
        const Node* cur = spine.get();
        while (cur->kind == Node::Kind::Alternation) {
            alts.push_back(cur->left);
            cur = cur->right.get();
        }
        alts.push_back(NodePtr(spine, cur));  // aliasing share; cur is owned by spine
        std::optional<int> saved;
        if (auto it = sites_.find(site); it != sites_.end()) saved = it->second;
        for (size_t p = 0; p < alts.size(); ++p) {
            sites_[site] = static_cast<int>(p);
            if (match(alts[p], pos, k)) return true;
        }
        if (saved) {
            sites_[site] = *saved;
        } else {
            sites_.erase(site);
        }
        return false;
    }

    bool repeat(const Node* self, const NodePtr& body, std::uint32_t min, std::uint32_t max,
                bool greedy, size_t pos, const Cont& k) {
        auto [glo, ghi] = group_range(self);
        std::function<bool(size_t, std::uint32_t, std::uint32_t)> iter =
            [&](size_t at, std::uint32_t rem_min, std::uint32_t rem_max) -> bool {
            spend();
            if (rem_max == 0) return k(at);
            auto try_body = [&]() -> bool {
                // Each iteration starts with the body's captures cleared.
                std::vector<Span> saved;
                for (std::uint32_t g = glo; g <= ghi && glo <= ghi; ++g) {
                    saved.push_back(captures_[g]);
                    captures_[g] = std::nullopt;
                }
                bool ok = match(body, at, [&](size_t np) {
                    if (rem_min == 0 && np == at) return false;  // no progress, stop looping
                    return iter(np, rem_min > 0 ? rem_min - 1 : 0,
                                rem_max == kRepInfinity ? kRepInfinity : rem_max - 1);
                });
                if (!ok && glo <= ghi) {
                    for (std::uint32_t g = glo; g <= ghi; ++g)
                        captures_[g] = saved[g - glo];
                }
                return ok;
            };
            if (rem_min > 0) return try_body();
            if (greedy) return try_body() || k(at);
            return k(at) || try_body();
        };
        return iter(pos, min, max);
    }
};

std::uint32_t max_group_index(const NodePtr& root) {
    std::vector<std::uint32_t> idx;
    collect_group_indices(root, idx);
    std::uint32_t m = 0;
    for (auto g : idx)
        if (g > m) m = g;
    return m;
}

MatchResult build_result(const Engine& eng, const Text& input, size_t start, size_t end,
                         std::uint32_t slots) {
    MatchResult r;
    r.matched = true;
    r.index = start;
    r.input = input;
    r.captures.resize(slots + 1);
    r.captures[0] = input.substr(start, end - start);
    const auto& caps = eng.captures();
    for (std::uint32_t g = 1; g <= slots; ++g) {
        if (g < caps.size() && caps[g])
            r.captures[g] = input.substr(caps[g]->first, caps[g]->second - caps[g]->first);
    }
    r.taken_alternates = eng.taken_alternates();
    return r;
}

}  // namespace

std::optional<MatchResult> match_at(const RegexAst& ast, const Text& input, size_t start,
                                    const FlagSet& flags, std::uint64_t step_budget) {
    std::uint32_t slots = std::max(ast.group_count, max_group_index(ast.root));
    Engine eng(input, flags, slots, step_budget);
    size_t end = 0;
    if (!eng.run(ast.root, start, std::nullopt, end)) return std::nullopt;
    return build_result(eng, input, start, end, slots);
}

std::vector<MatchResult> match_all_at(const RegexAst& ast, const Text& input, size_t start,
                                      const FlagSet& flags, size_t max_results,
                                      std::uint64_t step_budget) {
    std::uint32_t slots = std::max(ast.group_count, max_group_index(ast.root));
    Engine eng(input, flags, slots, step_budget);
    std::vector<MatchResult> out;
    eng.run_all(ast.root, start, [&](size_t end) {
        if (out.size() >= max_results) throw BudgetExceeded("too many match completions");
        out.push_back(build_result(eng, input, start, end, slots));
    });
    return out;
}

MatchResult exec(RegexValue& r, const Text& input, std::uint64_t step_budget) {
    if (r.flags.unicode) throw UnsupportedError("the u flag is not supported");
    MatchResult out;
    out.input = input;
    bool stateful = r.flags.global || r.flags.sticky;
    size_t start = stateful ? r.last_index : 0;
    if (start <= input.size()) {
        for (size_t i = start; i <= input.size(); ++i) {
            auto m = match_at(r.ast, input, i, r.flags, step_budget);
            if (m) {
                out = std::move(*m);
                size_t end = out.index + out.captures[0]->size();
                if (stateful) r.last_index = end;
                out.last_index_after = r.last_index;
                return out;
            }
            if (r.flags.sticky) break;
        }
    }
    if (stateful) r.last_index = 0;
    out.matched = false;
    out.last_index_after = r.last_index;
    return out;
}

bool test(RegexValue& r, const Text& input, std::uint64_t step_budget) {
    return exec(r, input, step_budget).matched;
}

bool matches_full(const RegexAst& ast, const Text& input, const FlagSet& flags,
                  std::uint64_t step_budget) {
    std::uint32_t slots = std::max(ast.group_count, max_group_index(ast.root));
    Engine eng(input, flags, slots, step_budget);
    size_t end = 0;
    return eng.run(ast.root, 0, input.size(), end);
}

}  // namespace regsolve
