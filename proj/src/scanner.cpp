#include "regsolve/scanner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "regsolve/parser.hpp"

namespace regsolve {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}
bool is_ident_part(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Keywords after which a `/` starts a regex literal rather than division.
const std::set<std::string> kRegexKeywords = {
    "return", "typeof", "instanceof", "in",   "of",    "new",  "delete", "void",
    "throw",  "case",   "do",         "else", "yield", "await"};

// Token classes that can end an expression; a following `/` is division.
enum class PrevToken { None, Value, Operator };

struct Scanner {
    const std::string& src;
    size_t i = 0;
    PrevToken prev = PrevToken::None;
    std::vector<ExtractedLiteral> found;

    explicit Scanner(const std::string& s) : src(s) {}

    char peek(size_t ahead = 0) const { return i + ahead < src.size() ? src[i + ahead] : '\0'; }

    void run() {
        while (i < src.size()) {
            char c = src[i];
            if (c == '/' && peek(1) == '/') {
                skip_line_comment();
            } else if (c == '/' && peek(1) == '*') {
                skip_block_comment();
            } else if (c == '"' || c == '\'') {
                skip_string(c);
                prev = PrevToken::Value;
            } else if (c == '`') {
                skip_template();
                prev = PrevToken::Value;
            } else if (c == '/') {
                if (prev == PrevToken::Value || !try_regex()) {
                    ++i;  // division operator
                    prev = PrevToken::Operator;
                }
            } else if (is_ident_start(c)) {
                size_t start = i;
                while (i < src.size() && is_ident_part(src[i])) ++i;
                std::string word = src.substr(start, i - start);
                prev = kRegexKeywords.count(word) ? PrevToken::Operator : PrevToken::Value;
            } else if (c >= '0' && c <= '9') {
                while (i < src.size() && (is_ident_part(src[i]) || src[i] == '.')) ++i;
                prev = PrevToken::Value;
            } else if (c == ')' || c == ']') {
                ++i;
                prev = PrevToken::Value;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
                       c == '\v') {
                ++i;
            } else {
                // punctuation: `}` closes a block more often than an object
                // literal, so a regex may follow
                ++i;
                prev = PrevToken::Operator;
            }
        }
    }

    void skip_line_comment() {
        while (i < src.size() && src[i] != '\n') ++i;
    }

    void skip_block_comment() {
        i += 2;
        while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) ++i;
        i = std::min(src.size(), i + 2);
    }

    void skip_string(char quote) {
        ++i;
        while (i < src.size() && src[i] != quote) {
            if (src[i] == '\\') ++i;
            if (src[i] == '\n') break;  // unterminated; stop at the line end
            ++i;
        }
        if (i < src.size()) ++i;
    }

    void skip_template() {
        ++i;
        while (i < src.size()) {
            if (src[i] == '\\') {
                i += 2;
                continue;
            }
            if (src[i] == '`') {
                ++i;
                return;
            }
            if (src[i] == '$' && peek(1) == '{') {
                i += 2;
                int depth = 1;
                // substitution expressions may nest templates and braces
                while (i < src.size() && depth > 0) {
                    if (src[i] == '{') ++depth;
                    if (src[i] == '}') --depth;
                    if (src[i] == '`') {
                        skip_template();
                        continue;
                    }
                    if (src[i] == '"' || src[i] == '\'') {
                        skip_string(src[i]);
                        continue;
                    }
                    ++i;
                }
                continue;
            }
            ++i;
        }
    }

    // Attempts to read a regex literal at `i`; on failure the slash was a
    // division sign after all.
    bool try_regex() {
        size_t start = i;
        size_t j = i + 1;
        bool in_class = false;
        bool any = false;
        while (j < src.size()) {
            char c = src[j];
            if (c == '\n') return false;  // literals cannot span lines
            if (c == '\\') {
                j += 2;
                any = true;
                continue;
            }
            if (c == '[') in_class = true;
            if (c == ']') in_class = false;
            if (c == '/' && !in_class) break;
            ++j;
            any = true;
        }
        if (j >= src.size() || src[j] != '/') return false;
        if (!any) return false;  // `//` is a comment, handled earlier anyway
        std::string pattern = src.substr(i + 1, j - i - 1);
        ++j;
        size_t flags_start = j;
        while (j < src.size() && is_ident_part(src[j])) ++j;
        found.push_back({pattern, src.substr(flags_start, j - flags_start), start});
        i = j;
        prev = PrevToken::Value;
        return true;
    }
};

}  // namespace

std::vector<ExtractedLiteral> extract_literals(const std::string& source_text) {
    Scanner scanner(source_text);
    scanner.run();
    return scanner.found;
}

namespace {

void accumulate(ScanReport& report, const std::string& text,
                std::set<std::string>& seen) {
    std::vector<ExtractedLiteral> literals = extract_literals(text);
    for (const auto& lit : literals) {
        report.literals_found++;
        FeatureProfile profile;
        try {
            auto [ast, flags] = parse_pattern(lit.pattern, lit.flags);
            profile = profile_features(ast, flags);
        } catch (const ParseError&) {
            report.parse_failures++;
            continue;
        }
        report.total += profile;
        std::string key = lit.pattern + "\x01" + lit.flags;
        if (seen.insert(key).second) {
            report.unique_literals++;
            report.unique += profile;
        }
    }
}

}  // namespace

ScanReport scan_paths(const std::vector<std::string>& roots) {
    namespace fs = std::filesystem;
    ScanReport report;
    std::set<std::string> seen;
    std::vector<fs::path> files;
    for (const auto& root : roots) {
        std::error_code ec;
        if (fs::is_regular_file(root, ec)) {
            files.push_back(root);
            continue;
        }
        fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied,
                                            ec);
        if (ec) {
            report.io_errors++;
            continue;
        }
        for (const auto& entry : it) {
            if (!entry.is_regular_file(ec)) continue;
            fs::path p = entry.path();
            std::string ext = p.extension().string();
            if (ext == ".js" || ext == ".mjs" || ext == ".cjs") files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            report.io_errors++;
            continue;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        report.files_scanned++;
        accumulate(report, buffer.str(), seen);
    }
    return report;
}

namespace {

double pct(std::uint64_t count, std::uint64_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string report_to_text(const ScanReport& report) {
    std::ostringstream out;
    out << "files scanned:   " << report.files_scanned << "\n";
    out << "literals found:  " << report.literals_found << "\n";
    out << "unique literals: " << report.unique_literals << "\n";
    out << "parse failures:  " << report.parse_failures << "\n";
    if (report.io_errors) out << "io errors:       " << report.io_errors << "\n";
    std::uint64_t parsed = report.literals_found - report.parse_failures;
    out << "\nfeature                        total      %   unique      %\n";
    for (size_t i = 0; i < kFeatureNames.size(); ++i) {
        std::uint64_t t = feature_by_index(report.total, i);
        std::uint64_t u = feature_by_index(report.unique, i);
        char line[128];
        std::snprintf(line, sizeof line, "%-28s %6llu %6.2f %8llu %6.2f\n", kFeatureNames[i],
                      static_cast<unsigned long long>(t), pct(t, parsed),
                      static_cast<unsigned long long>(u), pct(u, report.unique_literals));
        out << line;
    }
    return out.str();
}

std::string report_to_csv(const ScanReport& report) {
    std::ostringstream out;
    out << "name,totalCount,totalPct,uniqueCount,uniquePct\n";
    std::uint64_t parsed = report.literals_found - report.parse_failures;
    out << "total_regex," << parsed << ",100.00," << report.unique_literals << ",100.00\n";
    for (size_t i = 0; i < kFeatureNames.size(); ++i) {
        std::uint64_t t = feature_by_index(report.total, i);
        std::uint64_t u = feature_by_index(report.unique, i);
        out << kFeatureNames[i] << "," << t << "," << fmt_pct(pct(t, parsed)) << "," << u << ","
            << fmt_pct(pct(u, report.unique_literals)) << "\n";
    }
    return out.str();
}

}  // namespace regsolve
