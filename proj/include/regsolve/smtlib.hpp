#pragma once

#include <string>

#include "regsolve/ir.hpp"

namespace regsolve {

// Deterministic, byte-stable SMT-LIB 2 serialization over the Unicode string
// theory. Capture variables compile to a (Bool, String) pair `c.def`/`c.val`
// with the convention: undefined iff `c.def` is false, in which case `c.val`
// is pinned to "".
std::string emit_smtlib(const ConstraintProblem& problem);

// Serialization pieces used by the incremental refinement loop.
std::string emit_declarations(const ConstraintProblem& problem);
std::string emit_assert(const Ir& ir);
std::string smt_regex(const CRegexPtr& re);
std::string smt_term(const Term& term);
std::string smt_string_literal(const Text& text);

}  // namespace regsolve
