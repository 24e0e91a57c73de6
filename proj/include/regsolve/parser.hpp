#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "regsolve/ast.hpp"

namespace regsolve {

// Position is a code-point offset into the pattern body (or the flag string
// for flag errors).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, size_t position)
        : std::runtime_error(std::move(message)), position_(position) {}
    size_t position() const { return position_; }

private:
    size_t position_;
};

// `source` is the body of an ES6 regex literal (the text between the
// slashes), `flags` its flag suffix.
std::pair<RegexAst, FlagSet> parse_pattern(const std::string& source, const std::string& flags);
std::pair<RegexAst, FlagSet> parse_pattern(const Text& source, const std::string& flags);

FlagSet parse_flags(const std::string& flags);

}  // namespace regsolve
