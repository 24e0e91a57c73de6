#include "regsolve/oracle.hpp"

#include <cmath>

#include "regsolve/errors.hpp"

namespace regsolve {

namespace {

// Total number of words up to max_len, guarded against the budget.
size_t enumeration_size(const EnumerationSpec& spec) {
    size_t total = 0, layer = 1;
    for (size_t len = 0; len <= spec.max_len; ++len) {
        total += layer;
        if (total > spec.budget) throw BudgetExceeded("enumeration exceeds the word budget");
        if (len < spec.max_len) {
            if (layer > spec.budget / std::max<size_t>(1, spec.alphabet.size()))
                throw BudgetExceeded("enumeration exceeds the word budget");
            layer *= spec.alphabet.size();
        }
    }
    return total;
}

template <typename Fn>
void for_each_word(const EnumerationSpec& spec, Fn&& fn) {
    enumeration_size(spec);
    std::vector<Text> frontier{Text{}};
    fn(frontier[0]);
    for (size_t len = 1; len <= spec.max_len; ++len) {
        std::vector<Text> next;
        next.reserve(frontier.size() * spec.alphabet.size());
        for (const Text& w : frontier)
            for (char32_t c : spec.alphabet) {
                Text ext = w;
                ext.push_back(c);
                fn(ext);
                next.push_back(std::move(ext));
            }
        frontier = std::move(next);
    }
}

}  // namespace

std::vector<CapturingTuple> capturing_language_enumerate(const RegexAst& ast,
                                                         const FlagSet& flags,
                                                         const EnumerationSpec& spec) {
    if (flags.unicode) throw UnsupportedError("unsupported flag u");
    std::vector<CapturingTuple> out;
    for_each_word(spec, [&](const Text& w) {
        RegexValue value{ast, flags, 0};
        MatchResult m = exec(value, w);
        if (m.matched) out.push_back({w, m.captures});
    });
    return out;
}

namespace {

// Subjects are the user-declared strings (the ones carrying the alphabet
// side condition); model-internal words are derived, not enumerated.
std::vector<const StringVarDecl*> subject_vars(const ConstraintProblem& problem) {
    std::vector<const StringVarDecl*> out;
    for (const auto& v : problem.string_vars)
        if (v.exclude_meta) out.push_back(&v);
    return out;
}

bool derive_and_check(const ConstraintProblem& problem, Assignment& a) {
    // Process constraints in order so capture-valued subjects see the
    // captures derived before them.
    for (const auto& info : problem.regex_constraints) {
        Text word;
        if (info.subject_is_capture) {
            auto it = a.captures.find(info.subject);
            if (it == a.captures.end() || !it->second.has_value()) return false;
            word = *it->second;
        } else {
            word = a.strings.at(info.subject);
        }
        MatchResult m = concrete_match(info, word);
        if (info.polarity == Polarity::Member) {
            if (!m.matched) return false;
            size_t base = info.mode == ApiMode::Exec ? 0 : 1;
            for (size_t i = 0; i < info.capture_vars.size(); ++i) {
                size_t slot = base + i;
                a.captures[info.capture_vars[i]] =
                    slot < m.captures.size() ? m.captures[slot] : std::nullopt;
            }
        } else {
            if (m.matched) return false;
            for (const auto& name : info.capture_vars) a.captures[name] = std::nullopt;
        }
    }
    for (const auto& ir : problem.side_assertions)
        if (!eval_ir(ir, a)) return false;
    return true;
}

}  // namespace

BruteForceResult brute_force_solve(const ConstraintProblem& problem,
                                   const EnumerationSpec& spec) {
    std::vector<const StringVarDecl*> subjects = subject_vars(problem);
    for (const auto* v : subjects) {
        if (!v->max_len)
            throw BudgetExceeded("brute force needs a length bound on " + v->name);
        if (*v->max_len > spec.max_len)
            throw BudgetExceeded("length bound on " + v->name + " exceeds the enumeration bound");
    }

    // Pre-enumerate the word list once.
    std::vector<Text> words;
    for_each_word(spec, [&](const Text& w) { words.push_back(w); });

    size_t combos = 1;
    for (size_t i = 0; i < subjects.size(); ++i) {
        if (combos > spec.budget / words.size())
            throw BudgetExceeded("assignment space exceeds the budget");
        combos *= words.size();
    }

    std::vector<size_t> pick(subjects.size(), 0);
    while (true) {
        Assignment a;
        bool lengths_ok = true;
        for (size_t i = 0; i < subjects.size(); ++i) {
            const Text& w = words[pick[i]];
            if (w.size() > subjects[i]->max_len.value()) lengths_ok = false;
            a.strings[subjects[i]->name] = w;
        }
        if (lengths_ok && derive_and_check(problem, a)) {
            BruteForceResult out;
            out.status = BruteForceResult::Status::Sat;
            out.model = std::move(a);
            return out;
        }
        // advance the odometer
        size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < words.size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return {};
}

}  // namespace regsolve
