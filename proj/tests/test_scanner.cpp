#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "regsolve/scanner.hpp"

using namespace regsolve;

namespace {

std::string corpus_dir() {
    const char* src = std::getenv("REGSOLVE_SRC_DIR");
    REQUIRE(src != nullptr);
    return std::string(src) + "/tests/fixtures/mini_corpus";
}

}  // namespace

TEST_CASE("literal extraction finds the xml-tag regex") {
    auto found = extract_literals("let p = /<(\\w+)>([0-9]*)<\\/\\1>/.exec(arg);");
    REQUIRE(found.size() == 1);
    CHECK(found[0].pattern == "<(\\w+)>([0-9]*)<\\/\\1>");
    CHECK(found[0].flags.empty());
}

TEST_CASE("division context suppresses literal detection") {
    CHECK(extract_literals("a = b / c / d;").empty());
    CHECK(extract_literals("x = (1 + 2) / 3;").empty());
    CHECK(extract_literals("y = arr[0] / len;").empty());
}

TEST_CASE("string and template contents never produce literals") {
    CHECK(extract_literals("s = \"/not/a/regex/\";").empty());
    CHECK(extract_literals("s = '/nope/';").empty());
    CHECK(extract_literals("s = `也/not/${ a / b }`;").empty());
    auto nested = extract_literals("s = `${x ? /yes/g : /no/}`;");
    CHECK(nested.empty());  // substitutions are skipped wholesale
}

TEST_CASE("regex-permitting contexts") {
    CHECK(extract_literals("return /ab/;").size() == 1);
    CHECK(extract_literals("f(/ab/, 1);").size() == 1);
    CHECK(extract_literals("x = y.match(/ab/g);").size() == 1);
    CHECK(extract_literals("let z = a ? /b/ : /c/;").size() == 2);
    auto with_class_slash = extract_literals("m = /[/]x/;");
    REQUIRE(with_class_slash.size() == 1);
    CHECK(with_class_slash[0].pattern == "[/]x");
}

TEST_CASE("comments are skipped") {
    CHECK(extract_literals("// not a /regex/ here\nq = 1;").empty());
    CHECK(extract_literals("/* /nope/ */ v = 2;").empty());
}

TEST_CASE("the bundled corpus matches the hand count exactly") {
    ScanReport report = scan_paths({corpus_dir()});
    CHECK(report.files_scanned == 10);
    CHECK(report.literals_found == 14);
    CHECK(report.unique_literals == 11);
    CHECK(report.parse_failures == 0);
    CHECK(report.io_errors == 0);

    CHECK(report.total.capture_groups == 11);
    CHECK(report.unique.capture_groups == 9);
    CHECK(report.total.backreferences == 5);
    CHECK(report.unique.backreferences == 4);
    CHECK(report.total.quantified_backreferences == 1);
    CHECK(report.unique.quantified_backreferences == 1);
    CHECK(report.total.global_flag == 1);
    CHECK(report.total.sticky_flag == 2);
    CHECK(report.unique.sticky_flag == 1);
    CHECK(report.total.ignore_case_flag == 2);
    CHECK(report.total.multiline_flag == 1);
    CHECK(report.total.kleene_star == 4);
    CHECK(report.unique.kleene_star == 3);
    CHECK(report.total.lazy_kleene_star == 1);
    CHECK(report.total.kleene_plus == 9);
    CHECK(report.unique.kleene_plus == 6);
    CHECK(report.total.lazy_kleene_plus == 1);
    CHECK(report.total.repetition == 0);
    CHECK(report.total.lazy_repetition == 1);
    CHECK(report.total.character_class == 3);
    CHECK(report.unique.character_class == 2);
    CHECK(report.total.ranges == 4);
    CHECK(report.unique.ranges == 3);
    CHECK(report.total.non_capturing == 0);
    CHECK(report.total.word_boundary == 2);
    CHECK(report.total.lookaheads == 1);
}

TEST_CASE("reports are deterministic") {
    ScanReport a = scan_paths({corpus_dir()});
    ScanReport b = scan_paths({corpus_dir()});
    CHECK(a == b);
    CHECK(report_to_csv(a) == report_to_csv(b));
    // CSV carries one row per feature plus header and total
    std::string csv = report_to_csv(a);
    size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == kFeatureNames.size() + 2);
}

TEST_CASE("dynamic RegExp construction never changes the report") {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "regsolve_scan_lb";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    for (const auto& entry : fs::directory_iterator(corpus_dir()))
        fs::copy(entry.path(), tmp / entry.path().filename());
    ScanReport before = scan_paths({tmp.string()});
    {
        std::ofstream out(tmp / "util.js", std::ios::app);
        out << "\nvar dynamic = new RegExp(\"x+\", \"g\");\n";
    }
    ScanReport after = scan_paths({tmp.string()});
    CHECK(before == after);
    fs::remove_all(tmp);
}
