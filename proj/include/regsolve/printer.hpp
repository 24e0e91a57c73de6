#pragma once

#include <string>

#include "regsolve/ast.hpp"

namespace regsolve {

// Prints an AST back to pattern-body source. For every AST produced by
// parse_pattern, parse_pattern(print_pattern(ast)) is structurally equal.
std::string print_pattern(const RegexAst& ast);
std::string print_pattern(const NodePtr& node);

}  // namespace regsolve
