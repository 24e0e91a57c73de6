#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regsolve/errors.hpp"
#include "regsolve/ir.hpp"

namespace regsolve {

struct SolverOutcome {
    enum class Status { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    Assignment model;  // meaningful iff status == Sat
    std::string diagnostics;
};

using Millis = std::chrono::milliseconds;
inline constexpr Millis kDefaultSolverTimeout{30000};

// Resolution order: explicit command, REGSOLVE_SOLVER, then `z3 -in`.
std::string default_solver_command();

// One child solver process speaking SMT-LIB 2 over its standard streams.
// Batches are framed with an echo marker so incremental use works; a query
// that outlives its deadline kills the process and the session reports
// unknown from then on.
class SolverSession {
public:
    explicit SolverSession(const std::string& command);
    ~SolverSession();
    SolverSession(const SolverSession&) = delete;
    SolverSession& operator=(const SolverSession&) = delete;

    bool alive() const { return pid_ > 0; }

    // Cumulative wall time spent waiting on the solver.
    Millis total_time() const { return total_time_; }

    // Queues SMT-LIB text (declarations/asserts) for the next round trip.
    void add(const std::string& smt);

    SolverOutcome::Status check_sat(Millis timeout);

    // After a sat result: reads back every variable of the problem.
    std::optional<Assignment> read_model(const ConstraintProblem& problem, Millis timeout);

    void reset();  // (reset) — clears all state for session reuse

private:
    void spawn(const std::string& command);
    void shutdown();
    void write_all(const std::string& text);
    // Sends the sync marker and reads until it comes back. On a malformed
    // reply the session respawns once, replays the accepted transcript and
    // retries the batch (fresh-process fallback).
    std::string round_trip(Millis timeout);
    std::string raw_round_trip(const std::string& batch, Millis timeout);

    std::string command_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string pending_;
    std::string buffer_;
    std::string transcript_;
    Millis total_time_{0};
};

// One-shot convenience: run the text through a fresh process, parse
// (check-sat) and, on sat, (get-value) for the given problem's variables.
SolverOutcome solve_once(const std::string& smt_text, const ConstraintProblem& problem,
                         Millis timeout = kDefaultSolverTimeout,
                         const std::string& command = default_solver_command());

}  // namespace regsolve
