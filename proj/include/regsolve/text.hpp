#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace regsolve {

// All matching and constraint generation works on sequences of Unicode code
// points; UTF-8 only appears at the CLI / file boundary.
using Text = std::u32string;
using TextView = std::u32string_view;

// Markers injected around the subject string so anchors become ordinary
// language constraints. Chosen so they cannot collide with ordinary input;
// every solver-facing string variable excludes them.
inline constexpr char32_t kMetaStart = U'';  // <
inline constexpr char32_t kMetaEnd = U'';    // >

std::string to_utf8(TextView text);
Text from_utf8(std::string_view bytes);  // throws std::runtime_error on invalid UTF-8

inline bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
inline bool is_ascii_alpha(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}
inline bool is_word_char(char32_t c) {
    return is_ascii_alpha(c) || is_ascii_digit(c) || c == U'_';
}
inline bool is_line_terminator(char32_t c) {
    return c == U'\n' || c == U'\r' || c == U' ' || c == U' ';
}

// ASCII-only simple case mapping; everything else maps to itself.
inline char32_t ascii_upper(char32_t c) { return (c >= U'a' && c <= U'z') ? c - 32 : c; }
inline char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }
inline char32_t ascii_swap_case(char32_t c) {
    if (c >= U'a' && c <= U'z') return c - 32;
    if (c >= U'A' && c <= U'Z') return c + 32;
    return c;
}

}  // namespace regsolve
