#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regsolve/ir.hpp"
#include "regsolve/model.hpp"

namespace regsolve {

// Parsed form of the line-oriented problem format (see docs/problem-format.md).
struct ProblemFile {
    struct Declaration {
        std::string name;
        std::optional<size_t> max_len;
    };
    struct TermSpec {
        enum class Kind { Name, Literal, Concat };
        Kind kind = Kind::Name;
        std::string name;
        Text literal;
        std::vector<TermSpec> parts;
    };
    struct MembershipSpec {
        std::string subject;
        std::string pattern;
        std::string flags;
        Polarity polarity = Polarity::Member;
        std::vector<std::string> capture_names;
        ApiMode mode = ApiMode::Exec;
        size_t last_index = 0;
        int line = 0;
    };
    struct EqSpec {
        TermSpec lhs, rhs;
        int line = 0;
    };
    struct UndefSpec {
        std::string capture;
        int line = 0;
    };

    std::vector<Declaration> declarations;
    std::vector<MembershipSpec> memberships;
    std::vector<EqSpec> equalities;
    std::vector<UndefSpec> undefs;
};

class ProblemFileError : public std::runtime_error {
public:
    ProblemFileError(const std::string& message, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

struct CompiledProblem {
    ConstraintProblem problem;
    std::vector<ExecBinding> bindings;  // one per membership, in file order
};

// Validates names and group counts, compiles every membership through the
// exec/raw model, and registers the side assertions.
CompiledProblem compile_problem(const ProblemFile& file, const UnrollConfig& cfg);

}  // namespace regsolve
