#include "regsolve/problem_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "regsolve/parser.hpp"

namespace regsolve {

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

class LineParser {
public:
    LineParser(const std::string& line, int number) : line_(line), number_(number) {}

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    std::string word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
               line_[pos_] != '(' && line_[pos_] != ')' && line_[pos_] != ',')
            ++pos_;
        if (start == pos_) fail("expected a word");
        return line_.substr(start, pos_ - start);
    }

    char peek() {
        skip_ws();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // /pattern/flags with escaped slashes and classes respected
    std::pair<std::string, std::string> regex_literal() {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '/') fail("expected a /pattern/ literal");
        size_t start = ++pos_;
        bool in_class = false;
        while (pos_ < line_.size()) {
            char c = line_[pos_];
            if (c == '\\') {
                pos_ += 2;
                continue;
            }
            if (c == '[') in_class = true;
            if (c == ']') in_class = false;
            if (c == '/' && !in_class) break;
            ++pos_;
        }
        if (pos_ >= line_.size()) fail("unterminated /pattern/ literal");
        std::string pattern = line_.substr(start, pos_ - start);
        ++pos_;
        size_t fstart = pos_;
        while (pos_ < line_.size() && std::isalpha(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        return {pattern, line_.substr(fstart, pos_ - fstart)};
    }

    Text string_literal() {
        skip_ws();
        if (pos_ >= line_.size() || line_[pos_] != '"') fail("expected a string literal");
        ++pos_;
        std::string raw;
        while (pos_ < line_.size() && line_[pos_] != '"') {
            char c = line_[pos_++];
            if (c != '\\') {
                raw.push_back(c);
                continue;
            }
            if (pos_ >= line_.size()) fail("truncated escape in string literal");
            char e = line_[pos_++];
            switch (e) {
                case 'n': raw.push_back('\n'); break;
                case 'r': raw.push_back('\r'); break;
                case 't': raw.push_back('\t'); break;
                case '0': raw.push_back('\0'); break;
                case '\\': raw.push_back('\\'); break;
                case '"': raw.push_back('"'); break;
                case 'x': {
                    if (pos_ + 1 >= line_.size()) fail("truncated \\x escape");
                    auto hex = [&](char h) -> int {
                        if (h >= '0' && h <= '9') return h - '0';
                        if (h >= 'a' && h <= 'f') return h - 'a' + 10;
                        if (h >= 'A' && h <= 'F') return h - 'A' + 10;
                        fail("invalid \\x escape");
                        return 0;
                    };
                    int v = hex(line_[pos_]) * 16 + hex(line_[pos_ + 1]);
                    pos_ += 2;
                    raw.push_back(static_cast<char>(v));
                    break;
                }
                default:
                    fail("unknown escape in string literal");
            }
        }
        if (pos_ >= line_.size()) fail("unterminated string literal");
        ++pos_;
        return from_utf8(raw);
    }

    size_t number() {
        std::string w = word();
        try {
            return std::stoull(w);
        } catch (...) {
            fail("expected a number, got '" + w + "'");
        }
        return 0;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ProblemFileError(msg, number_); }

private:
    void skip_ws() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    }
    const std::string& line_;
    int number_;
    size_t pos_ = 0;
};

ProblemFile::TermSpec parse_term(LineParser& p) {
    if (p.peek() == '"') {
        ProblemFile::TermSpec t;
        t.kind = ProblemFile::TermSpec::Kind::Literal;
        t.literal = p.string_literal();
        return t;
    }
    std::string w = p.word();
    if (w == "concat") {
        ProblemFile::TermSpec t;
        t.kind = ProblemFile::TermSpec::Kind::Concat;
        p.expect('(');
        while (true) {
            t.parts.push_back(parse_term(p));
            if (p.eat(',')) continue;
            p.expect(')');
            break;
        }
        return t;
    }
    ProblemFile::TermSpec t;
    t.kind = ProblemFile::TermSpec::Kind::Name;
    t.name = w;
    return t;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
    ProblemFile file;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        LineParser p(line, number);
        if (p.at_end()) continue;
        std::string head = p.word();
        if (head == "str") {
            ProblemFile::Declaration d;
            d.name = p.word();
            if (!valid_name(d.name)) p.fail("invalid variable name '" + d.name + "'");
            if (!p.at_end()) {
                std::string bound = p.word();
                if (bound.rfind("len<=", 0) != 0) p.fail("expected len<=N");
                try {
                    d.max_len = std::stoull(bound.substr(5));
                } catch (...) {
                    p.fail("invalid length bound");
                }
            }
            file.declarations.push_back(std::move(d));
        } else if (head == "assert") {
            std::string kind = p.word();
            if (kind == "in" || kind == "notin") {
                ProblemFile::MembershipSpec m;
                m.line = number;
                m.polarity = kind == "in" ? Polarity::Member : Polarity::NonMember;
                m.subject = p.word();
                auto [pattern, flags] = p.regex_literal();
                m.pattern = pattern;
                m.flags = flags;
                std::string kw = p.word();
                if (kw != "captures") p.fail("expected 'captures'");
                while (!p.at_end()) {
                    char c = p.peek();
                    (void)c;
                    std::string w = p.word();
                    if (w == "mode") {
                        std::string mode = p.word();
                        if (mode == "exec") {
                            m.mode = ApiMode::Exec;
                        } else if (mode == "raw") {
                            m.mode = ApiMode::Raw;
                        } else {
                            p.fail("mode must be exec or raw");
                        }
                    } else if (w == "lastindex") {
                        m.last_index = p.number();
                    } else {
                        if (!valid_name(w)) p.fail("invalid capture name '" + w + "'");
                        m.capture_names.push_back(w);
                    }
                }
                file.memberships.push_back(std::move(m));
            } else if (kind == "eq") {
                ProblemFile::EqSpec e;
                e.line = number;
                e.lhs = parse_term(p);
                e.rhs = parse_term(p);
                if (!p.at_end()) p.fail("trailing tokens after eq");
                file.equalities.push_back(std::move(e));
            } else if (kind == "undef") {
                ProblemFile::UndefSpec u;
                u.line = number;
                u.capture = p.word();
                if (!p.at_end()) p.fail("trailing tokens after undef");
                file.undefs.push_back(std::move(u));
            } else {
                p.fail("unknown assertion kind '" + kind + "'");
            }
        } else {
            p.fail("unknown directive '" + head + "'");
        }
    }
    return file;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ProblemFileError("cannot read " + path, 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_text(buffer.str());
}

namespace {

struct NameTable {
    std::set<std::string> strings;
    std::set<std::string> captures;
};

Term build_term(const ProblemFile::TermSpec& spec, const NameTable& names,
                std::vector<std::string>& caps_used, int line) {
    switch (spec.kind) {
        case ProblemFile::TermSpec::Kind::Literal:
            return term_lit(spec.literal);
        case ProblemFile::TermSpec::Kind::Name:
            if (names.strings.count(spec.name)) return term_var(spec.name);
            if (names.captures.count(spec.name)) {
                caps_used.push_back(spec.name);
                return term_cap_value(spec.name);
            }
            throw ProblemFileError("undeclared name '" + spec.name + "'", line);
        case ProblemFile::TermSpec::Kind::Concat: {
            std::vector<Term> parts;
            for (const auto& p : spec.parts)
                parts.push_back(build_term(p, names, caps_used, line));
            return term_concat(std::move(parts));
        }
    }
    throw ProblemFileError("bad term", line);
}

}  // namespace

CompiledProblem compile_problem(const ProblemFile& file, const UnrollConfig& cfg) {
    CompiledProblem out;
    NameTable names;

    for (const auto& d : file.declarations) {
        if (names.strings.count(d.name))
            throw ProblemFileError("duplicate declaration of '" + d.name + "'", 0);
        names.strings.insert(d.name);
        StringVarDecl decl{d.name, d.max_len, /*exclude_meta=*/true};
        out.problem.string_vars.push_back(decl);
    }

    for (const auto& m : file.memberships) {
        RegexAst ast;
        FlagSet flags;
        try {
            auto parsed = parse_pattern(m.pattern, m.flags);
            ast = parsed.first;
            flags = parsed.second;
        } catch (const ParseError& e) {
            throw ProblemFileError(
                "pattern /" + m.pattern + "/: " + e.what() + " at position " +
                    std::to_string(e.position()),
                m.line);
        }
        size_t expected =
            m.mode == ApiMode::Exec ? ast.group_count + 1 : ast.group_count;
        if (m.capture_names.size() != expected)
            throw ProblemFileError("expected " + std::to_string(expected) +
                                       " capture names for /" + m.pattern + "/, got " +
                                       std::to_string(m.capture_names.size()),
                                   m.line);
        bool subject_is_capture = false;
        if (names.strings.count(m.subject)) {
            subject_is_capture = false;
        } else if (names.captures.count(m.subject)) {
            subject_is_capture = true;
        } else {
            throw ProblemFileError("undeclared subject '" + m.subject + "'", m.line);
        }
        for (const auto& c : m.capture_names) {
            if (names.strings.count(c) || names.captures.count(c))
                throw ProblemFileError("capture name '" + c + "' is already in use", m.line);
            names.captures.insert(c);
        }
        ExecBinding binding =
            build_exec_query(out.problem, ast, flags, m.pattern, m.subject, subject_is_capture,
                             m.capture_names, m.polarity, m.mode, m.last_index, cfg);
        out.bindings.push_back(std::move(binding));
    }

    for (const auto& e : file.equalities) {
        std::vector<std::string> caps_used;
        Term lhs = build_term(e.lhs, names, caps_used, e.line);
        Term rhs = build_term(e.rhs, names, caps_used, e.line);
        std::vector<Ir> parts;
        for (const auto& c : caps_used) parts.push_back(ir_not(ir_cap_undef(c)));
        parts.push_back(ir_str_eq(lhs, rhs));
        Ir ir = ir_and(std::move(parts));
        out.problem.side_assertions.push_back(ir);
        out.problem.assertions.push_back(ir);
    }
    for (const auto& u : file.undefs) {
        if (!names.captures.count(u.capture))
            throw ProblemFileError("undeclared capture '" + u.capture + "'", u.line);
        Ir ir = ir_cap_undef(u.capture);
        out.problem.side_assertions.push_back(ir);
        out.problem.assertions.push_back(ir);
    }
    return out;
}

}  // namespace regsolve
