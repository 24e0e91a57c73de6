#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "regsolve/ir.hpp"
#include "regsolve/rewrite.hpp"

namespace regsolve {

struct UnrollConfig {
    std::uint32_t max_repeats = 5;  // bound for the existential unrollings
};

// Output of modeling one capturing-language membership.
struct MembershipModel {
    Ir formula;
    // Per repetition site: the subject term its alternation was modeled on,
    // how many times it was modeled (sharpening is only sound when 1), and
    // the modeled alternates.
    std::map<int, Term> site_subjects;
    std::map<int, int> site_model_count;
    std::map<int, std::vector<NodePtr>> site_alternates;
};

// Models (subject, captures...) in-or-not-in clang(ast) for a quantifier-
// rewritten AST. `capture_names` maps rewritten group indices to variable
// names; groups without an entry get fresh internal variables (declared on
// the problem). Contexts start empty: anchors resolve against the meta
// markers inside the subject itself.
MembershipModel model_membership(ConstraintProblem& problem, const RegexAst& rewritten,
                                 Term subject, std::map<std::uint32_t, std::string> capture_names,
                                 Polarity polarity, const UnrollConfig& cfg, bool multiline,
                                 const std::string& stem);

// The capture-correspondence equations of a rewrite: original capture
// variables tied to the duplicated copies, selecting the last copy of the
// alternate taken at each repetition site.
Ir correspondence_constraints(const CaptureCorrespondence& corr,
                              const std::vector<std::string>& original_caps,
                              const std::map<std::uint32_t, std::string>& rewritten_caps,
                              const MembershipModel& model);

// A fully assembled exec/test-style query over one subject.
struct ExecBinding {
    std::string subject;
    bool subject_is_capture = false;
    std::string wrapped_var;
    std::string pad_front;  // wildcard padding before the match
    std::string c0_var;
    std::vector<std::string> captures;  // user-facing names (C0.. in exec mode)
    size_t offset = 0;
    size_t last_index = 0;
    bool stateful = false;  // sticky or global
    Polarity polarity = Polarity::Member;

    struct Outcome {
        bool matched = false;
        size_t index = 0;
        size_t last_index_after = 0;
    };
    Outcome reconstruct(const Assignment& a) const;
};

// Compiles one regexMembership assertion into the problem: meta-marker input
// wrapping, sticky/global slicing, wildcard padding with the fresh outer
// group, ignore-case rewriting, quantifier rewriting with correspondence
// constraints, and the membership model itself. Also registers the constraint
// for the refinement loop.
ExecBinding build_exec_query(ConstraintProblem& problem, const RegexAst& regex,
                             const FlagSet& flags, const std::string& pattern_source,
                             const std::string& subject, bool subject_is_capture,
                             const std::vector<std::string>& capture_names, Polarity polarity,
                             ApiMode mode, size_t last_index, const UnrollConfig& cfg);

}  // namespace regsolve
