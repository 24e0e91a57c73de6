#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regsolve/ast.hpp"
#include "regsolve/cregex.hpp"

namespace regsolve {

// ---- string terms -------------------------------------------------------

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    enum class Kind { Lit, Var, CapValue, Concat };
    Kind kind = Kind::Lit;
    Text lit;                  // Lit
    std::string name;          // Var / CapValue
    std::vector<Term> parts;   // Concat
};

Term term_lit(Text value);
Term term_var(std::string name);
Term term_cap_value(std::string capture);  // value component of a capture variable
Term term_concat(std::vector<Term> parts);

// ---- formulas ------------------------------------------------------------

struct IrNode;
using Ir = std::shared_ptr<const IrNode>;

struct IrNode {
    enum class Kind {
        True,
        False,
        StrEq,     // lhs = rhs
        LenEq,     // |subject| = len
        InRe,      // subject in L(re)
        NotInRe,   // subject not in L(re)
        CapUndef,  // capture unset
        CapEq,     // capture defined and equal to lhs
        And,
        Or,
        Not,
        Implies,
    };
    Kind kind = Kind::True;
    Term lhs, rhs;      // StrEq; CapEq uses lhs
    Term subject;       // LenEq / InRe / NotInRe
    size_t len = 0;     // LenEq
    CRegexPtr re;       // InRe / NotInRe
    std::string cap;    // CapUndef / CapEq
    std::vector<Ir> kids;  // And / Or; Not uses kids[0]; Implies kids[0] => kids[1]
};

Ir ir_true();
Ir ir_false();
Ir ir_str_eq(Term lhs, Term rhs);
Ir ir_len_eq(Term subject, size_t len);
Ir ir_in_re(Term subject, CRegexPtr re);
Ir ir_not_in_re(Term subject, CRegexPtr re);
Ir ir_cap_undef(std::string capture);
Ir ir_cap_eq(std::string capture, Term value);
Ir ir_and(std::vector<Ir> kids);   // flattens; drops True; False dominates
Ir ir_or(std::vector<Ir> kids);    // flattens; drops False; True dominates
Ir ir_not(Ir inner);
Ir ir_implies(Ir premise, Ir conclusion);

// Capture-to-capture equality: both unset, or both set with equal values.
Ir ir_cap_eq_cap(const std::string& a, const std::string& b);

std::string ir_to_string(const Ir& ir);  // debugging aid

// ---- problems ------------------------------------------------------------

enum class Polarity { Member, NonMember };
enum class ApiMode { Raw, Exec };

struct StringVarDecl {
    std::string name;
    std::optional<size_t> max_len;
    // User-level subjects exclude the injected markers and the line
    // separators outside the supported alphabet; model-internal words are
    // constrained through their defining equations instead.
    bool exclude_meta = false;
};

// One capturing-language membership constraint, retained in source form so
// the refinement loop can replay it against the concrete matcher.
struct RegexConstraintInfo {
    bool subject_is_capture = false;
    std::string subject;                    // string variable or capture name
    std::vector<std::string> capture_vars;  // C0..Cn in exec mode, C1..Cn raw
    Polarity polarity = Polarity::Member;
    RegexAst regex;
    FlagSet flags;
    ApiMode mode = ApiMode::Exec;
    size_t last_index = 0;
    std::string pattern_source;  // for reporting
};

struct ConstraintProblem {
    std::vector<StringVarDecl> string_vars;  // declared + model-internal words
    std::vector<std::string> capture_vars;
    std::vector<Ir> assertions;
    std::vector<RegexConstraintInfo> regex_constraints;
    // User-level equality/undefinedness assertions (a subset of `assertions`
    // over declared names only) — the part a brute-force decision procedure
    // evaluates directly.
    std::vector<Ir> side_assertions;

    std::uint64_t fresh_counter = 0;

    bool has_string_var(const std::string& name) const;
    bool has_capture_var(const std::string& name) const;
    void declare_string(std::string name, std::optional<size_t> max_len = std::nullopt);
    void declare_capture(std::string name);
    std::string fresh_word(const std::string& stem);
    std::string fresh_capture(const std::string& stem);
};

// ---- assignments and evaluation -------------------------------------------

struct Assignment {
    std::map<std::string, Text> strings;
    std::map<std::string, std::optional<Text>> captures;
};

// Substitution evaluation by the IR's own semantics; the independent check of
// everything the solver claims.
Text eval_term(const Term& term, const Assignment& a);
bool eval_ir(const Ir& ir, const Assignment& a);

// Every assertion of the problem holds under `a`.
bool eval_problem(const ConstraintProblem& problem, const Assignment& a);

}  // namespace regsolve
