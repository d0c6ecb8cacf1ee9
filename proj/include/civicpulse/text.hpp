#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace civicpulse {

inline bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower_char(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool ascii_alnum(char c) { return ascii_alpha(c) || ascii_digit(c); }

std::string ascii_lower(std::string_view s);

/// Split on runs of ASCII whitespace; no empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

/// Trim plus collapse interior whitespace runs to single spaces.
std::string collapse_whitespace(std::string_view s);

bool contains(std::string_view haystack, std::string_view needle);

}  // namespace civicpulse
