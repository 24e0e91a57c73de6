// regsolve — compile ECMAScript regex constraints to SMT-LIB string theory,
// solve them with counterexample-guided refinement against the built-in
// matcher, run the matcher directly, or scan a source tree for regex usage.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "regsolve/cegar.hpp"
#include "regsolve/matcher.hpp"
#include "regsolve/oracle.hpp"
#include "regsolve/parser.hpp"
#include "regsolve/problem_file.hpp"
#include "regsolve/scanner.hpp"
#include "regsolve/smtlib.hpp"

using namespace regsolve;
using nlohmann::json;

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

json capture_json(const std::optional<Text>& value) {
    if (!value) return nullptr;
    return to_utf8(*value);
}

int cmd_match(const std::string& pattern, const std::string& flags, const std::string& input,
              size_t last_index) {
    RegexValue value;
    try {
        auto [ast, fs] = parse_pattern(pattern, flags);
        value = RegexValue{ast, fs, last_index};
    } catch (const ParseError& e) {
        std::cerr << "regsolve: syntax error at position " << e.position() << ": " << e.what()
                  << "\n";
        return kExitError;
    }
    MatchResult m;
    try {
        m = exec(value, from_utf8(input));
    } catch (const UnsupportedError& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
        return kExitError;
    }
    json out;
    out["matched"] = m.matched;
    if (m.matched) {
        out["index"] = m.index;
        json captures = json::array();
        for (const auto& c : m.captures) captures.push_back(capture_json(c));
        out["captures"] = captures;
    }
    out["input"] = input;
    out["lastIndexAfter"] = m.last_index_after;
    std::cout << out.dump(2) << "\n";
    return m.matched ? kExitSat : kExitUnsat;
}

std::string resolve_solver_command(std::string cmd, std::optional<unsigned> seed) {
    if (cmd.empty()) cmd = default_solver_command();
    if (seed) {
        size_t placeholder = cmd.find("{seed}");
        if (placeholder != std::string::npos) {
            cmd = cmd.substr(0, placeholder) + std::to_string(*seed) +
                  cmd.substr(placeholder + 6);
        } else if (cmd.rfind("z3", 0) == 0 || cmd.find("/z3") != std::string::npos) {
            cmd += " smt.random_seed=" + std::to_string(*seed);
        }
    }
    return cmd;
}

int cmd_solve(const std::string& path, int refinement_limit, unsigned unroll_bound,
              std::string solver_cmd, double timeout_seconds, std::optional<unsigned> seed,
              bool incremental) {
    auto wall_start = std::chrono::steady_clock::now();
    CompiledProblem compiled;
    ProblemFile file;
    try {
        file = load_problem_file(path);
        UnrollConfig cfg{unroll_bound};
        compiled = compile_problem(file, cfg);
    } catch (const ProblemFileError& e) {
        std::cerr << "regsolve: " << path << ": " << e.what() << "\n";
        return kExitError;
    } catch (const UnsupportedError& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
        return kExitError;
    } catch (const RewriteBlowup& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
        return kExitError;
    }

    CegarOptions options;
    options.refinement_limit = refinement_limit;
    options.solver_timeout = Millis{static_cast<long>(timeout_seconds * 1000)};
    options.solver_command = resolve_solver_command(std::move(solver_cmd), seed);
    options.incremental = incremental;

    SolveResult result;
    Millis solver_time{0};
    try {
        SolverSession session(options.solver_command);
        options.session = &session;
        result = cegar_solve(compiled.problem, options);
        solver_time = session.total_time();
    } catch (const SolverCrash& e) {
        std::cerr << "regsolve: solver failure: " << e.what() << "\n";
        return kExitError;
    } catch (const MatchBudgetExceeded& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
        return kExitError;
    }
    auto wall = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - wall_start);

    const char* status = result.status == SolveResult::Status::Sat     ? "sat"
                         : result.status == SolveResult::Status::Unsat ? "unsat"
                                                                       : "unknown";
    std::cout << "status: " << status << "\n";
    if (result.status == SolveResult::Status::Sat) {
        json vars, caps;
        for (const auto& d : file.declarations)
            vars[d.name] = to_utf8(result.model.strings.at(d.name));
        for (const auto& m : file.memberships)
            for (const auto& c : m.capture_names)
                caps[c] = capture_json(result.model.captures.at(c));
        json out;
        out["strings"] = vars;
        out["captures"] = caps;
        std::cout << "assignment: " << out.dump(2) << "\n";
    }
    if (result.status == SolveResult::Status::Unknown && !result.diagnostics.empty())
        std::cout << "reason: " << result.diagnostics << "\n";
    std::cout << "refinements: " << result.refinements_used << "\n";
    std::cout << "time: wall " << wall.count() / 1000.0 << "s, solver "
              << solver_time.count() / 1000.0 << "s\n";
    switch (result.status) {
        case SolveResult::Status::Sat: return kExitSat;
        case SolveResult::Status::Unsat: return kExitUnsat;
        case SolveResult::Status::Unknown: return kExitUnknown;
    }
    return kExitError;
}

int cmd_compile(const std::string& path, unsigned unroll_bound) {
    try {
        ProblemFile file = load_problem_file(path);
        UnrollConfig cfg{unroll_bound};
        CompiledProblem compiled = compile_problem(file, cfg);
        std::cout << emit_smtlib(compiled.problem);
        return kExitSat;
    } catch (const ProblemFileError& e) {
        std::cerr << "regsolve: " << path << ": " << e.what() << "\n";
    } catch (const UnsupportedError& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
    } catch (const RewriteBlowup& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
    }
    return kExitError;
}

int cmd_scan(const std::string& root, bool csv) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(root, ec)) {
        std::cerr << "regsolve: cannot read " << root << "\n";
        return kExitError;
    }
    ScanReport report = scan_paths({root});
    std::cout << (csv ? report_to_csv(report) : report_to_text(report));
    return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ES6 regex constraint compiler and CEGAR string solver"};
    app.require_subcommand(1);

    // solve
    std::string problem_path;
    int refinement_limit = 20;
    unsigned unroll_bound = 5;
    std::string solver_cmd;
    double timeout_seconds = 30.0;
    std::optional<unsigned> seed;
    bool no_incremental = false;
    auto* solve = app.add_subcommand("solve", "solve a constraint problem file");
    solve->add_option("problem", problem_path, "problem file")->required();
    solve->add_option("--refinement-limit", refinement_limit, "max refinement iterations")
        ->capture_default_str();
    solve->add_option("--unroll-bound", unroll_bound, "bound for backreference unrollings")
        ->capture_default_str();
    solve->add_option("--solver-cmd", solver_cmd,
                      "solver command line (default: $REGSOLVE_SOLVER or 'z3 -in')");
    solve->add_option("--timeout", timeout_seconds, "per-query solver timeout in seconds")
        ->capture_default_str();
    unsigned seed_value = 0;
    auto* seed_opt = solve->add_option("--seed", seed_value, "solver random seed");
    solve->add_flag("--no-incremental", no_incremental,
                    "re-emit the whole problem on every refinement");

    // compile
    std::string compile_path;
    unsigned compile_unroll = 5;
    auto* compile = app.add_subcommand("compile", "emit SMT-LIB 2 without solving");
    compile->add_option("problem", compile_path, "problem file")->required();
    compile->add_option("--unroll-bound", compile_unroll, "bound for backreference unrollings")
        ->capture_default_str();

    // match
    std::string pattern, flags, input;
    size_t last_index = 0;
    auto* match = app.add_subcommand("match", "run the ES6 matcher (RegExp.exec)");
    match->add_option("pattern", pattern, "pattern body")->required();
    match->add_option("flags", flags, "flag string (may be empty)");
    match->add_option("input", input, "input string");
    match->add_option("--last-index", last_index, "initial lastIndex")->capture_default_str();

    // scan
    std::string scan_root;
    bool csv = false;
    auto* scan = app.add_subcommand("scan", "scan JavaScript sources for regex literals");
    scan->add_option("dir", scan_root, "directory or file to scan")->required();
    scan->add_flag("--csv", csv, "CSV output");

    CLI11_PARSE(app, argc, argv);

    if (*seed_opt) seed = seed_value;
    try {
        if (solve->parsed())
            return cmd_solve(problem_path, refinement_limit, unroll_bound, solver_cmd,
                             timeout_seconds, seed, !no_incremental);
        if (compile->parsed()) return cmd_compile(compile_path, compile_unroll);
        if (match->parsed()) return cmd_match(pattern, flags, input, last_index);
        if (scan->parsed()) return cmd_scan(scan_root, csv);
    } catch (const std::exception& e) {
        std::cerr << "regsolve: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
