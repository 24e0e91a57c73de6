#include "regsolve/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>

#include "regsolve/smtlib.hpp"

namespace regsolve {

namespace {

constexpr const char* kSyncSend = "(echo \"@@SYNC@@\")\n";
constexpr const char* kSyncLine = "@@SYNC@@";

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : command) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// ---- s-expression scanning for (get-value ...) responses -------------------

struct Sexpr {
    bool is_atom = true;
    std::string atom;
    std::vector<Sexpr> items;
};

size_t parse_sexpr(const std::string& s, size_t pos, Sexpr& out) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw SolverCrash("truncated solver response");
    if (s[pos] == '(') {
        out.is_atom = false;
        ++pos;
        while (true) {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos >= s.size()) throw SolverCrash("unbalanced solver response");
            if (s[pos] == ')') return pos + 1;
            Sexpr child;
            pos = parse_sexpr(s, pos, child);
            out.items.push_back(std::move(child));
        }
    }
    if (s[pos] == '"') {
        size_t start = pos++;
        while (pos < s.size()) {
            if (s[pos] == '"') {
                if (pos + 1 < s.size() && s[pos + 1] == '"') {
                    pos += 2;
                    continue;
                }
                ++pos;
                break;
            }
            ++pos;
        }
        out.is_atom = true;
        out.atom = s.substr(start, pos - start);
        return pos;
    }
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
        ++pos;
    out.is_atom = true;
    out.atom = s.substr(start, pos - start);
    return pos;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Decodes an SMT-LIB string literal token (including \u{...} forms).
Text decode_smt_string(const std::string& token) {
    if (token.size() < 2 || token.front() != '"' || token.back() != '"')
        throw SolverCrash("expected a string literal in the model, got: " + token);
    Text raw = from_utf8(token.substr(1, token.size() - 2));
    Text out;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == U'"' && i + 1 < raw.size() && raw[i + 1] == U'"') {
            out.push_back(U'"');
            ++i;
            continue;
        }
        if (raw[i] == U'\\' && i + 1 < raw.size() && raw[i + 1] == U'u') {
            size_t j = i + 2;
            char32_t value = 0;
            bool ok = false;
            if (j < raw.size() && raw[j] == U'{') {
                ++j;
                size_t digits = 0;
                while (j < raw.size() && raw[j] != U'}') {
                    int d = raw[j] < 128 ? hex_value(static_cast<char>(raw[j])) : -1;
                    if (d < 0) break;
                    value = value * 16 + d;
                    ++digits;
                    ++j;
                }
                if (j < raw.size() && raw[j] == U'}' && digits >= 1 && digits <= 5) {
                    ok = true;
                }
            } else {
                // \uXXXX form
                value = 0;
                size_t digits = 0;
                while (digits < 4 && j < raw.size()) {
                    int d = raw[j] < 128 ? hex_value(static_cast<char>(raw[j])) : -1;
                    if (d < 0) break;
                    value = value * 16 + d;
                    ++digits;
                    ++j;
                }
                if (digits == 4) {
                    ok = true;
                    --j;
                }
            }
            if (ok) {
                out.push_back(value);
                i = j;
                continue;
            }
        }
        out.push_back(raw[i]);
    }
    return out;
}

}  // namespace

std::string default_solver_command() {
    if (const char* env = std::getenv("REGSOLVE_SOLVER"); env && *env) return env;
    return "z3 -in";
}

SolverSession::SolverSession(const std::string& command) : command_(command) { spawn(command); }

SolverSession::~SolverSession() { shutdown(); }

void SolverSession::spawn(const std::string& command) {
    std::vector<std::string> parts = split_command(command);
    if (parts.empty()) throw SolverCrash("empty solver command");

    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw SolverCrash("cannot create solver pipes");

    pid_t pid = fork();
    if (pid < 0) throw SolverCrash("cannot fork solver process");
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        std::vector<char*> argv;
        for (auto& p : parts) argv.push_back(p.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        perror("regsolve: exec solver");
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
}

void SolverSession::shutdown() {
    if (to_child_ >= 0) close(to_child_), to_child_ = -1;
    if (from_child_ >= 0) close(from_child_), from_child_ = -1;
    if (pid_ > 0) {
        kill(pid_, SIGKILL);
        waitpid(pid_, nullptr, 0);
        pid_ = -1;
    }
}

void SolverSession::write_all(const std::string& text) {
    size_t off = 0;
    while (off < text.size()) {
        ssize_t n = write(to_child_, text.data() + off, text.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            shutdown();
            throw SolverCrash("solver process closed its input");
        }
        off += static_cast<size_t>(n);
    }
}

void SolverSession::add(const std::string& smt) { pending_ += smt; }

std::string SolverSession::round_trip(Millis timeout) {
    std::string batch = std::move(pending_);
    pending_.clear();
    std::string out = raw_round_trip(batch, timeout);
    if (out.find("(error") != std::string::npos) {
        // Respawn and replay: the WASM solver build occasionally corrupts a
        // batch internally; a genuine problem error reproduces deterministically.
        shutdown();
        spawn(command_);
        buffer_.clear();
        if (!transcript_.empty()) raw_round_trip(transcript_, timeout);
        out = raw_round_trip(batch, timeout);
        if (out.find("(error") != std::string::npos) {
            shutdown();
            throw SolverCrash("solver rejected the query: " + out);
        }
    }
    // a reset starts a fresh transcript
    size_t reset_pos = batch.rfind("(reset)");
    if (reset_pos != std::string::npos) {
        transcript_ = batch.substr(reset_pos);
    } else {
        transcript_ += batch;
    }
    return out;
}

std::string SolverSession::raw_round_trip(const std::string& batch, Millis timeout) {
    if (!alive()) throw SolverCrash("solver session is dead");
    auto started = std::chrono::steady_clock::now();
    struct Meter {
        std::chrono::steady_clock::time_point start;
        Millis& sink;
        ~Meter() {
            sink += std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - start);
        }
    } meter{started, total_time_};
    write_all(batch);
    write_all(kSyncSend);

    auto deadline = started + timeout;
    std::string out;
    while (true) {
        // A finished batch ends with the sync marker on its own line.
        size_t search_from = 0;
        std::string combined = buffer_;
        size_t line_start = 0;
        bool done = false;
        (void)search_from;
        for (size_t i = 0; i <= combined.size(); ++i) {
            if (i == combined.size() || combined[i] == '\n') {
                std::string line = combined.substr(line_start, i - line_start);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line == kSyncLine) {
                    out = combined.substr(0, line_start);
                    buffer_ = i < combined.size() ? combined.substr(i + 1) : std::string();
                    done = true;
                    break;
                }
                line_start = i + 1;
            }
        }
        if (done) return out;

        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            shutdown();
            throw BudgetExceeded("solver query timed out");
        }
        struct pollfd pfd{from_child_, POLLIN, 0};
        int remaining = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        int rv = poll(&pfd, 1, std::max(1, remaining));
        if (rv < 0) {
            if (errno == EINTR) continue;
            shutdown();
            throw SolverCrash("poll on solver output failed");
        }
        if (rv == 0) continue;
        char chunk[65536];
        ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n <= 0) {
            shutdown();
            throw SolverCrash("solver process exited unexpectedly; partial output: " + buffer_);
        }
        buffer_.append(chunk, static_cast<size_t>(n));
    }
}

SolverOutcome::Status SolverSession::check_sat(Millis timeout) {
    add("(check-sat)\n");
    std::string out;
    try {
        out = round_trip(timeout);
    } catch (const BudgetExceeded&) {
        return SolverOutcome::Status::Unknown;  // timeout maps to unknown
    }
    std::string verdict;
    size_t start = 0;
    for (size_t i = 0; i <= out.size(); ++i) {
        if (i == out.size() || out[i] == '\n') {
            std::string line = out.substr(start, i - start);
            start = i + 1;
            if (line == "sat" || line == "unsat" || line == "unknown") {
                verdict = line;
                break;
            }
        }
    }
    if (verdict == "sat") return SolverOutcome::Status::Sat;
    if (verdict == "unsat") return SolverOutcome::Status::Unsat;
    if (verdict == "unknown") return SolverOutcome::Status::Unknown;
    throw SolverCrash("no check-sat verdict in solver output: " + out);
}

std::optional<Assignment> SolverSession::read_model(const ConstraintProblem& problem,
                                                    Millis timeout) {
    std::string query = "(get-value (";
    bool first = true;
    auto push = [&](const std::string& name) {
        if (!first) query += " ";
        first = false;
        query += name;
    };
    for (const auto& v : problem.string_vars) push(v.name);
    for (const auto& c : problem.capture_vars) {
        push(c + ".def");
        push(c + ".val");
    }
    query += "))\n";
    add(query);
    std::string out;
    try {
        out = round_trip(timeout);
    } catch (const BudgetExceeded&) {
        return std::nullopt;
    }

    size_t open = out.find('(');
    if (open == std::string::npos)
        throw SolverCrash("malformed get-value response: " + out);
    Sexpr root;
    parse_sexpr(out, open, root);
    if (root.is_atom) throw SolverCrash("malformed get-value response: " + out);

    std::map<std::string, std::string> raw;
    for (const auto& pair : root.items) {
        if (pair.is_atom || pair.items.size() != 2 || !pair.items[0].is_atom)
            throw SolverCrash("malformed get-value pair in: " + out);
        raw[pair.items[0].atom] = pair.items[1].is_atom ? pair.items[1].atom : std::string();
    }

    Assignment a;
    for (const auto& v : problem.string_vars) {
        auto it = raw.find(v.name);
        if (it == raw.end()) throw SolverCrash("model misses variable " + v.name);
        a.strings[v.name] = decode_smt_string(it->second);
    }
    for (const auto& c : problem.capture_vars) {
        auto dit = raw.find(c + ".def");
        auto vit = raw.find(c + ".val");
        if (dit == raw.end() || vit == raw.end())
            throw SolverCrash("model misses capture " + c);
        if (dit->second == "true") {
            a.captures[c] = decode_smt_string(vit->second);
        } else if (dit->second == "false") {
            a.captures[c] = std::nullopt;
        } else {
            throw SolverCrash("non-boolean defined flag for " + c + ": " + dit->second);
        }
    }
    return a;
}

void SolverSession::reset() {
    add("(reset)\n(set-option :produce-models true)\n");
}

SolverOutcome solve_once(const std::string& smt_text, const ConstraintProblem& problem,
                         Millis timeout, const std::string& command) {
    SolverSession session(command);
    // the emitted text already ends with (check-sat)
    std::string body = smt_text;
    size_t check = body.rfind("(check-sat)");
    if (check != std::string::npos) body = body.substr(0, check);
    session.add(body);
    SolverOutcome outcome;
    outcome.status = session.check_sat(timeout);
    if (outcome.status == SolverOutcome::Status::Sat) {
        auto model = session.read_model(problem, timeout);
        if (!model) {
            outcome.status = SolverOutcome::Status::Unknown;
            outcome.diagnostics = "model extraction timed out";
            return outcome;
        }
        outcome.model = std::move(*model);
    }
    return outcome;
}

}  // namespace regsolve
